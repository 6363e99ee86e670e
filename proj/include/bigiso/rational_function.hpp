#pragma once

#include <optional>
#include <span>
#include <string>

#include "bigiso/polynomial.hpp"

namespace bigiso {

/// Quotient of two polynomials. No multivariate gcd is taken; the
/// representation is only tidied (monic denominator, exact quotients folded)
/// and equality is decided by cross-multiplication.
class RationalFunction {
 public:
  RationalFunction() : num_(), den_(1) {}
  RationalFunction(Polynomial p) : num_(std::move(p)), den_(1) {}  // NOLINT
  RationalFunction(const Rational& c) : num_(c), den_(1) {}        // NOLINT
  RationalFunction(int c) : num_(c), den_(1) {}                    // NOLINT
  RationalFunction(Polynomial num, Polynomial den);

  const Polynomial& numerator() const { return num_; }
  const Polynomial& denominator() const { return den_; }

  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.is_constant(); }
  /// The polynomial value; requires is_polynomial().
  Polynomial as_polynomial() const;

  RationalFunction operator-() const { return {-num_, den_}; }
  RationalFunction& operator+=(const RationalFunction& o);
  RationalFunction& operator-=(const RationalFunction& o);
  RationalFunction& operator*=(const RationalFunction& o);
  RationalFunction& operator/=(const RationalFunction& o);

  friend RationalFunction operator+(RationalFunction a, const RationalFunction& b) { return a += b; }
  friend RationalFunction operator-(RationalFunction a, const RationalFunction& b) { return a -= b; }
  friend RationalFunction operator*(RationalFunction a, const RationalFunction& b) { return a *= b; }
  friend RationalFunction operator/(RationalFunction a, const RationalFunction& b) { return a /= b; }
  friend bool operator==(const RationalFunction& a, const RationalFunction& b);

  /// Value at a point, or nullopt where the denominator vanishes.
  std::optional<Rational> evaluate(std::span<const Rational> point) const;
  RationalFunction substitute(std::size_t var, const Rational& value) const;
  RationalFunction derivative(std::size_t var) const;

  std::string str(std::span<const std::string> names) const;

 private:
  void tidy();

  Polynomial num_;
  Polynomial den_;
};

}  // namespace bigiso
