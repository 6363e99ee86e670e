#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bigiso/matrix.hpp"
#include "bigiso/rational.hpp"

namespace bigiso {

using Vec = std::vector<Rational>;

/// Linear subspace of Q^d stored as an RREF basis; equal subspaces compare
/// equal representation-wise.
class Subspace {
 public:
  Subspace() = default;
  explicit Subspace(std::size_t ambient) : ambient_(ambient), basis_(0, ambient) {}

  static Subspace span(std::size_t ambient, const std::vector<Vec>& vectors);
  static Subspace from_rows(const Matrix<Rational>& rows);
  static Subspace full(std::size_t ambient);
  /// {x : m x = 0}
  static Subspace kernel(const Matrix<Rational>& m);
  /// Column space of m.
  static Subspace image(const Matrix<Rational>& m);

  std::size_t ambient_dim() const { return ambient_; }
  std::size_t dim() const { return basis_.rows(); }
  bool is_zero() const { return dim() == 0; }
  const Matrix<Rational>& basis() const { return basis_; }
  std::vector<Vec> vectors() const { return basis_.row_list(); }
  const std::vector<std::size_t>& pivots() const { return pivots_; }

  bool contains(const Vec& v) const;
  bool contains(const Subspace& other) const;
  /// Coordinates of v in the stored basis, nullopt if v is not in the span.
  std::optional<Vec> coordinates(const Vec& v) const;

  friend bool operator==(const Subspace& a, const Subspace& b) {
    return a.ambient_ == b.ambient_ && a.basis_ == b.basis_;
  }

  std::string str() const;

 private:
  std::size_t ambient_ = 0;
  Matrix<Rational> basis_;
  std::vector<std::size_t> pivots_;
};

Subspace subspace_sum(const Subspace& a, const Subspace& b);
Subspace subspace_intersection(const Subspace& a, const Subspace& b);
/// Vectors w of the dual space with w . v = 0 for all v in s.
Subspace annihilator(const Subspace& s);
/// Complement of `inner` inside `outer`, chosen greedily from outer's RREF rows.
Subspace complement_in(const Subspace& inner, const Subspace& outer);

/// Coefficients c with sum_i c_i rows_i = target, nullopt if none.
std::optional<Vec> solve_left(const Matrix<Rational>& rows, const Vec& target);

Rational dot(const Vec& a, const Vec& b);

}  // namespace bigiso
