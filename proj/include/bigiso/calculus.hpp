#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "bigiso/matrix.hpp"
#include "bigiso/polynomial.hpp"

namespace bigiso {

/// Named coordinates x^1..x^m.
struct Chart {
  std::vector<std::string> names;

  Chart() = default;
  explicit Chart(std::vector<std::string> n);
  static Chart standard(std::size_t m);

  std::size_t dim() const { return names.size(); }
  std::optional<std::size_t> index_of(const std::string& name) const;
  Polynomial coord(std::size_t i) const { return Polynomial::variable(dim(), i); }
  Polynomial zero() const { return Polynomial(dim()); }
  Polynomial constant(const Rational& c) const { return Polynomial(dim(), c); }
  friend bool operator==(const Chart&, const Chart&) = default;
};

using VectorField = std::vector<Polynomial>;
using OneForm = std::vector<Polynomial>;

/// Skew tensor of degree 2 storing only i < j; get(j, i) = -get(i, j).
class Skew2 {
 public:
  Skew2() = default;
  explicit Skew2(std::size_t m);
  std::size_t dim() const { return m_; }
  Polynomial get(std::size_t i, std::size_t j) const;
  /// Sets the (i, j) component (and implicitly (j, i) with opposite sign).
  void set(std::size_t i, std::size_t j, const Polynomial& v);
  void add(std::size_t i, std::size_t j, const Polynomial& v);
  bool is_zero() const;
  Skew2 operator+(const Skew2& o) const;
  Skew2 operator-(const Skew2& o) const;
  Skew2 scaled(const Polynomial& f) const;
  friend bool operator==(const Skew2&, const Skew2&) = default;

 private:
  std::size_t slot(std::size_t i, std::size_t j) const;
  std::size_t m_ = 0;
  std::vector<Polynomial> c_;
};

/// Skew tensor of degree 3 storing only i < j < k.
class Skew3 {
 public:
  Skew3() = default;
  explicit Skew3(std::size_t m);
  std::size_t dim() const { return m_; }
  Polynomial get(std::size_t i, std::size_t j, std::size_t k) const;
  void set(std::size_t i, std::size_t j, std::size_t k, const Polynomial& v);
  bool is_zero() const;
  friend bool operator==(const Skew3&, const Skew3&) = default;

 private:
  std::size_t m_ = 0;
  std::vector<Polynomial> c_;  // indexed by (i*m + j)*m + k, i<j<k entries only
};

using TwoForm = Skew2;
using Bivector = Skew2;
using ThreeForm = Skew3;
using Trivector = Skew3;

/// Cross section (X, alpha) of TM + T*M.
struct BigSection {
  VectorField X;
  OneForm a;
  std::size_t dim() const { return X.size(); }
  bool is_zero() const;
  friend bool operator==(const BigSection&, const BigSection&) = default;
};

VectorField zero_field(std::size_t m);
OneForm zero_form(std::size_t m);
BigSection zero_section(std::size_t m);
VectorField coordinate_field(std::size_t m, std::size_t i);
OneForm coordinate_form(std::size_t m, std::size_t i);
bool is_zero(const std::vector<Polynomial>& v);

VectorField add(const VectorField& a, const VectorField& b);
VectorField sub(const VectorField& a, const VectorField& b);
VectorField scale(const Polynomial& f, const VectorField& a);
BigSection add(const BigSection& a, const BigSection& b);
BigSection sub(const BigSection& a, const BigSection& b);
BigSection scale(const Polynomial& f, const BigSection& a);

/// X(f) = X^i d_i f
Polynomial act(const VectorField& X, const Polynomial& f);
VectorField lie_bracket(const VectorField& X, const VectorField& Y);
/// alpha(X)
Polynomial pair(const OneForm& a, const VectorField& X);

OneForm d(const Polynomial& f, std::size_t m);
TwoForm d(const OneForm& a);
ThreeForm d(const TwoForm& theta);

/// (i(X)theta)_j = X^i theta(i, j)
OneForm interior(const VectorField& X, const TwoForm& theta);
TwoForm interior(const VectorField& X, const ThreeForm& phi);
Polynomial eval2(const TwoForm& theta, const VectorField& X, const VectorField& Y);
Polynomial eval3(const ThreeForm& phi, const VectorField& X, const VectorField& Y, const VectorField& Z);
TwoForm wedge(const OneForm& a, const OneForm& b);

OneForm lie_derivative_form(const VectorField& X, const OneForm& a);
TwoForm lie_derivative_form(const VectorField& X, const TwoForm& theta);

/// g = 1/2 (alpha(Y) + beta(X))
Polynomial g_poly(const BigSection& s, const BigSection& t);
/// omega = 1/2 (alpha(Y) - beta(X))
Polynomial omega_poly(const BigSection& s, const BigSection& t);
/// ([X,Y], L_X beta - L_Y alpha + 1/2 d(alpha(Y) - beta(X)))
BigSection courant_bracket(const BigSection& s, const BigSection& t);
/// Courant algebroid axiom relating the anchor, bracket and metric.
Polynomial axiom_v_check(const BigSection& s1, const BigSection& s2, const BigSection& s3);
/// [a, f b] - f[a, b] - (X_a f) b + g(a, b)(0, df); identically zero.
BigSection leibniz_defect(const BigSection& a, const Polynomial& f, const BigSection& b);

/// (sharp alpha)^j = alpha_i P(i, j)
VectorField sharp(const Bivector& P, const OneForm& a);
OneForm flat_theta(const TwoForm& theta, const VectorField& X);
/// P(alpha, beta) = P(i, j) alpha_i beta_j
Polynomial p_pair(const Bivector& P, const OneForm& a, const OneForm& b);
/// L_{sharp a} b - L_{sharp b} a - d P(a, b)
OneForm p_bracket(const Bivector& P, const OneForm& a, const OneForm& b);
Trivector schouten_PP(const Bivector& P);
Polynomial eval_trivector(const Trivector& T, const OneForm& a, const OneForm& b, const OneForm& c);
/// 1-form T(a, b, .)
OneForm trivector_contract(const Trivector& T, const OneForm& a, const OneForm& b);
/// P({a,b}, c) - c([sharp a, sharp b]) - 1/2 [P,P](a, b, c); identically zero.
Polynomial gelfand_dorfman_defect(const Bivector& P, const OneForm& a, const OneForm& b, const OneForm& c);
/// [(sharp s, s), (sharp t, t)] - (sharp{s,t} - 1/2 [P,P](s,t,.), {s,t})
BigSection graph_P_bracket_defect(const Bivector& P, const OneForm& s, const OneForm& t);
/// [(X, i(X)theta), (Y, i(Y)theta)] - ([X,Y], i([X,Y])theta + dtheta(X,Y,.))
BigSection graph_theta_bracket_defect(const TwoForm& theta, const VectorField& X, const VectorField& Y);

/// Chart (x, xdot) on the tangent bundle: names followed by names + "dot".
Chart lift_chart(const Chart& base);
VectorField vertical_lift(const VectorField& X);
VectorField complete_lift(const VectorField& X);
OneForm vertical_lift_form(const OneForm& a);
OneForm complete_lift_form(const OneForm& a);

/// Affine coordinate change xt = M x + c.
struct AffineChange {
  Matrix<Rational> M;
  std::vector<Rational> c;
  std::size_t dim() const { return M.rows(); }
};
/// Rewrites f(x) as a polynomial in the new coordinates.
Polynomial transform_polynomial(const AffineChange& ch, const Polynomial& f);
BigSection transform_section(const AffineChange& ch, const BigSection& s);

std::string str(const VectorField& X, const Chart& chart);
std::string str_form(const OneForm& a, const Chart& chart);
std::string str(const BigSection& s, const Chart& chart);

Polynomial random_polynomial(std::mt19937_64& rng, std::size_t m, unsigned degree, int coeff_range = 2);
VectorField random_field(std::mt19937_64& rng, std::size_t m, unsigned degree);
OneForm random_form(std::mt19937_64& rng, std::size_t m, unsigned degree);
BigSection random_section(std::mt19937_64& rng, std::size_t m, unsigned degree);
Skew2 random_skew2(std::mt19937_64& rng, std::size_t m, unsigned degree);

}  // namespace bigiso
