#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bigiso/rational.hpp"

namespace bigiso {

using Monomial = std::vector<std::uint32_t>;

/// Graded lexicographic order, largest first: higher total degree wins,
/// ties broken lexicographically with x1 > x2 > ... .
struct GrlexGreater {
  bool operator()(const Monomial& a, const Monomial& b) const;
};

std::uint32_t monomial_degree(const Monomial& m);

/// Sparse multivariate polynomial over Q in a fixed number of variables.
///
/// A polynomial with zero variables is a constant and combines freely with
/// polynomials in any number of variables. Mixing two polynomials with
/// different nonzero variable counts throws std::invalid_argument.
class Polynomial {
 public:
  using TermMap = std::map<Monomial, Rational, GrlexGreater>;

  Polynomial() = default;
  explicit Polynomial(std::size_t nvars) : nvars_(nvars) {}
  Polynomial(std::size_t nvars, const Rational& c);
  Polynomial(const Rational& c) : Polynomial(0, c) {}  // NOLINT(google-explicit-constructor)
  Polynomial(int c) : Polynomial(0, Rational(c)) {}    // NOLINT(google-explicit-constructor)

  static Polynomial variable(std::size_t nvars, std::size_t index);
  static Polynomial monomial(Monomial exps, const Rational& c);

  std::size_t nvars() const { return nvars_; }
  const TermMap& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  /// Constant term; for constant polynomials this is the whole value.
  Rational constant_term() const;
  Rational coefficient(const Monomial& m) const;

  std::uint32_t total_degree() const;
  std::uint32_t degree_in(std::size_t var) const;
  /// Leading term under GrlexGreater. Requires a nonzero polynomial.
  const TermMap::value_type& leading_term() const;

  Polynomial operator-() const;
  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(const Polynomial& o);
  Polynomial& operator*=(const Rational& c);

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(Polynomial a, const Rational& c) { return a *= c; }
  friend Polynomial operator*(const Rational& c, Polynomial a) { return a *= c; }

  friend bool operator==(const Polynomial& a, const Polynomial& b);

  Polynomial pow(unsigned e) const;
  Polynomial derivative(std::size_t var) const;

  Rational evaluate(std::span<const Rational> point) const;
  /// Replaces variable `var` by the value `c`; the variable count is kept.
  Polynomial substitute(std::size_t var, const Rational& c) const;
  /// Replaces variable i by images[i]; the result lives in the images' ring.
  Polynomial compose(std::span<const Polynomial> images) const;
  /// Re-indexes into a ring with `nvars` variables, variable i going to
  /// position `positions[i]`.
  Polynomial embed(std::size_t nvars, std::span<const std::size_t> positions) const;
  /// Pads the exponent vectors to `nvars` (only valid for constants or equal counts).
  Polynomial with_nvars(std::size_t nvars) const;

  /// Exact quotient a / d when d divides a, nullopt otherwise.
  std::optional<Polynomial> divide_exact(const Polynomial& d) const;

  /// Canonical text form, e.g. "3/2*x^2*y - z + 1"; "0" for zero.
  std::string str(std::span<const std::string> names) const;
  /// Text form with default names x1, x2, ...
  std::string str() const;

 private:
  void add_term(const Monomial& m, const Rational& c);
  static std::size_t common_nvars(const Polynomial& a, const Polynomial& b);
  void promote_to(std::size_t nvars);

  std::size_t nvars_ = 0;
  TermMap terms_;
};

std::vector<std::string> default_names(std::size_t n);

}  // namespace bigiso
