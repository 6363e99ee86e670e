#include "bigiso/calculus.hpp"

#include <set>
#include <sstream>
#include <stdexcept>

#include "bigiso/linalg.hpp"

namespace bigiso {

namespace {

void same_dim(std::size_t a, std::size_t b, const char* what) {
  if (a != b) throw std::invalid_argument(std::string(what) + ": chart mismatch");
}

Polynomial half(const Polynomial& p) { return Rational(1, 2) * p; }

}  // namespace

Chart::Chart(std::vector<std::string> n) : names(std::move(n)) {
  std::set<std::string> seen(names.begin(), names.end());
  if (seen.size() != names.size()) throw std::invalid_argument("chart coordinate names must be distinct");
}

Chart Chart::standard(std::size_t m) { return Chart(default_names(m)); }

std::optional<std::size_t> Chart::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return i;
  return std::nullopt;
}

Skew2::Skew2(std::size_t m) : m_(m), c_(m * m, Polynomial(m)) {}

std::size_t Skew2::slot(std::size_t i, std::size_t j) const {
  if (i >= m_ || j >= m_) throw std::out_of_range("Skew2 index");
  return i * m_ + j;
}

Polynomial Skew2::get(std::size_t i, std::size_t j) const {
  if (i == j) return Polynomial(m_);
  return i < j ? c_[slot(i, j)] : -c_[slot(j, i)];
}

void Skew2::set(std::size_t i, std::size_t j, const Polynomial& v) {
  if (i == j) {
    if (!v.is_zero()) throw std::invalid_argument("Skew2 diagonal must vanish");
    return;
  }
  if (i < j)
    c_[slot(i, j)] = v.with_nvars(m_);
  else
    c_[slot(j, i)] = (-v).with_nvars(m_);
}

void Skew2::add(std::size_t i, std::size_t j, const Polynomial& v) { set(i, j, get(i, j) + v); }

bool Skew2::is_zero() const {
  for (const auto& p : c_)
    if (!p.is_zero()) return false;
  return true;
}

Skew2 Skew2::operator+(const Skew2& o) const {
  same_dim(m_, o.m_, "Skew2 +");
  Skew2 r = *this;
  for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] += o.c_[i];
  return r;
}

Skew2 Skew2::operator-(const Skew2& o) const {
  same_dim(m_, o.m_, "Skew2 -");
  Skew2 r = *this;
  for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] -= o.c_[i];
  return r;
}

Skew2 Skew2::scaled(const Polynomial& f) const {
  Skew2 r = *this;
  for (auto& p : r.c_) p = f * p;
  return r;
}

Skew3::Skew3(std::size_t m) : m_(m), c_(m * m * m, Polynomial(m)) {}

Polynomial Skew3::get(std::size_t i, std::size_t j, std::size_t k) const {
  if (i >= m_ || j >= m_ || k >= m_) throw std::out_of_range("Skew3 index");
  if (i == j || j == k || i == k) return Polynomial(m_);
  std::size_t a[3] = {i, j, k};
  int sign = 1;
  for (int p = 0; p < 3; ++p)
    for (int q = 0; q + 1 < 3 - p; ++q)
      if (a[q] > a[q + 1]) {
        std::swap(a[q], a[q + 1]);
        sign = -sign;
      }
  const auto& v = c_[(a[0] * m_ + a[1]) * m_ + a[2]];
  return sign > 0 ? v : -v;
}

void Skew3::set(std::size_t i, std::size_t j, std::size_t k, const Polynomial& v) {
  if (i == j || j == k || i == k) {
    if (!v.is_zero()) throw std::invalid_argument("Skew3 repeated index must vanish");
    return;
  }
  std::size_t a[3] = {i, j, k};
  int sign = 1;
  for (int p = 0; p < 3; ++p)
    for (int q = 0; q + 1 < 3 - p; ++q)
      if (a[q] > a[q + 1]) {
        std::swap(a[q], a[q + 1]);
        sign = -sign;
      }
  c_[(a[0] * m_ + a[1]) * m_ + a[2]] = (sign > 0 ? v : -v).with_nvars(m_);
}

bool Skew3::is_zero() const {
  for (const auto& p : c_)
    if (!p.is_zero()) return false;
  return true;
}

bool BigSection::is_zero() const { return bigiso::is_zero(X) && bigiso::is_zero(a); }

VectorField zero_field(std::size_t m) { return VectorField(m, Polynomial(m)); }
OneForm zero_form(std::size_t m) { return OneForm(m, Polynomial(m)); }
BigSection zero_section(std::size_t m) { return {zero_field(m), zero_form(m)}; }

VectorField coordinate_field(std::size_t m, std::size_t i) {
  auto v = zero_field(m);
  v.at(i) = Polynomial(m, 1);
  return v;
}

OneForm coordinate_form(std::size_t m, std::size_t i) { return coordinate_field(m, i); }

bool is_zero(const std::vector<Polynomial>& v) {
  for (const auto& p : v)
    if (!p.is_zero()) return false;
  return true;
}

VectorField add(const VectorField& a, const VectorField& b) {
  same_dim(a.size(), b.size(), "add");
  VectorField r = a;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += b[i];
  return r;
}

VectorField sub(const VectorField& a, const VectorField& b) {
  same_dim(a.size(), b.size(), "sub");
  VectorField r = a;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
  return r;
}

VectorField scale(const Polynomial& f, const VectorField& a) {
  VectorField r = a;
  for (auto& p : r) p = f * p;
  return r;
}

BigSection add(const BigSection& a, const BigSection& b) { return {add(a.X, b.X), add(a.a, b.a)}; }
BigSection sub(const BigSection& a, const BigSection& b) { return {sub(a.X, b.X), sub(a.a, b.a)}; }
BigSection scale(const Polynomial& f, const BigSection& a) { return {scale(f, a.X), scale(f, a.a)}; }

Polynomial act(const VectorField& X, const Polynomial& f) {
  Polynomial r(X.size());
  for (std::size_t i = 0; i < X.size(); ++i)
    if (!X[i].is_zero()) r += X[i] * f.derivative(i);
  return r;
}

VectorField lie_bracket(const VectorField& X, const VectorField& Y) {
  same_dim(X.size(), Y.size(), "lie_bracket");
  VectorField r(X.size());
  for (std::size_t j = 0; j < X.size(); ++j) r[j] = act(X, Y[j]) - act(Y, X[j]);
  return r;
}

Polynomial pair(const OneForm& a, const VectorField& X) {
  same_dim(a.size(), X.size(), "pair");
  Polynomial r(X.size());
  for (std::size_t i = 0; i < X.size(); ++i) r += a[i] * X[i];
  return r;
}

OneForm d(const Polynomial& f, std::size_t m) {
  OneForm r(m);
  for (std::size_t i = 0; i < m; ++i) r[i] = f.derivative(i).with_nvars(m);
  return r;
}

TwoForm d(const OneForm& a) {
  const std::size_t m = a.size();
  TwoForm r(m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) r.set(i, j, a[j].derivative(i) - a[i].derivative(j));
  return r;
}

ThreeForm d(const TwoForm& t) {
  const std::size_t m = t.dim();
  ThreeForm r(m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      for (std::size_t k = j + 1; k < m; ++k)
        r.set(i, j, k, t.get(j, k).derivative(i) - t.get(i, k).derivative(j) + t.get(i, j).derivative(k));
  return r;
}

OneForm interior(const VectorField& X, const TwoForm& t) {
  same_dim(X.size(), t.dim(), "interior");
  const std::size_t m = X.size();
  OneForm r = zero_form(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (X[i].is_zero()) continue;
    for (std::size_t j = 0; j < m; ++j) r[j] += X[i] * t.get(i, j);
  }
  return r;
}

TwoForm interior(const VectorField& X, const ThreeForm& phi) {
  same_dim(X.size(), phi.dim(), "interior");
  const std::size_t m = X.size();
  TwoForm r(m);
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t k = j + 1; k < m; ++k) {
      Polynomial s(m);
      for (std::size_t i = 0; i < m; ++i)
        if (!X[i].is_zero()) s += X[i] * phi.get(i, j, k);
      r.set(j, k, s);
    }
  return r;
}

Polynomial eval2(const TwoForm& t, const VectorField& X, const VectorField& Y) {
  return pair(interior(X, t), Y);
}

Polynomial eval3(const ThreeForm& phi, const VectorField& X, const VectorField& Y, const VectorField& Z) {
  return eval2(interior(X, phi), Y, Z);
}

TwoForm wedge(const OneForm& a, const OneForm& b) {
  same_dim(a.size(), b.size(), "wedge");
  TwoForm r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i + 1; j < a.size(); ++j) r.set(i, j, a[i] * b[j] - a[j] * b[i]);
  return r;
}

OneForm lie_derivative_form(const VectorField& X, const OneForm& a) {
  same_dim(X.size(), a.size(), "lie_derivative_form");
  const std::size_t m = X.size();
  OneForm r(m);
  for (std::size_t j = 0; j < m; ++j) {
    Polynomial s = act(X, a[j]);
    for (std::size_t i = 0; i < m; ++i)
      if (!a[i].is_zero()) s += a[i] * X[i].derivative(j);
    r[j] = s;
  }
  return r;
}

TwoForm lie_derivative_form(const VectorField& X, const TwoForm& t) {
  same_dim(X.size(), t.dim(), "lie_derivative_form");
  const std::size_t m = X.size();
  TwoForm r(m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) {
      Polynomial s = act(X, t.get(i, j));
      for (std::size_t k = 0; k < m; ++k) {
        s += t.get(k, j) * X[k].derivative(i);
        s += t.get(i, k) * X[k].derivative(j);
      }
      r.set(i, j, s);
    }
  return r;
}

Polynomial g_poly(const BigSection& s, const BigSection& t) {
  return half(pair(s.a, t.X) + pair(t.a, s.X));
}

Polynomial omega_poly(const BigSection& s, const BigSection& t) {
  return half(pair(s.a, t.X) - pair(t.a, s.X));
}

BigSection courant_bracket(const BigSection& s, const BigSection& t) {
  same_dim(s.dim(), t.dim(), "courant_bracket");
  const std::size_t m = s.dim();
  BigSection r;
  r.X = lie_bracket(s.X, t.X);
  r.a = sub(lie_derivative_form(s.X, t.a), lie_derivative_form(t.X, s.a));
  const auto ex = d(half(pair(s.a, t.X) - pair(t.a, s.X)), m);
  r.a = add(r.a, ex);
  return r;
}

Polynomial axiom_v_check(const BigSection& s1, const BigSection& s2, const BigSection& s3) {
  return act(s1.X, g_poly(s2, s3)) - g_poly(courant_bracket(s1, s2), s3) -
         g_poly(s2, courant_bracket(s1, s3)) -
         half(act(s3.X, g_poly(s1, s2)) + act(s2.X, g_poly(s1, s3)));
}

BigSection leibniz_defect(const BigSection& a, const Polynomial& f, const BigSection& b) {
  const std::size_t m = a.dim();
  auto lhs = courant_bracket(a, scale(f, b));
  auto rhs = add(scale(f, courant_bracket(a, b)), scale(act(a.X, f), b));
  rhs = sub(rhs, BigSection{zero_field(m), scale(g_poly(a, b), d(f, m))});
  return sub(lhs, rhs);
}

VectorField sharp(const Bivector& P, const OneForm& a) {
  same_dim(P.dim(), a.size(), "sharp");
  const std::size_t m = a.size();
  VectorField r = zero_field(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (a[i].is_zero()) continue;
    for (std::size_t j = 0; j < m; ++j) r[j] += a[i] * P.get(i, j);
  }
  return r;
}

OneForm flat_theta(const TwoForm& theta, const VectorField& X) { return interior(X, theta); }

Polynomial p_pair(const Bivector& P, const OneForm& a, const OneForm& b) { return pair(b, sharp(P, a)); }

OneForm p_bracket(const Bivector& P, const OneForm& a, const OneForm& b) {
  const std::size_t m = a.size();
  auto r = sub(lie_derivative_form(sharp(P, a), b), lie_derivative_form(sharp(P, b), a));
  return sub(r, d(p_pair(P, a, b), m));
}

Trivector schouten_PP(const Bivector& P) {
  const std::size_t m = P.dim();
  Trivector T(m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      for (std::size_t k = j + 1; k < m; ++k) {
        Polynomial s(m);
        for (std::size_t l = 0; l < m; ++l) {
          s += P.get(l, i) * P.get(j, k).derivative(l);
          s += P.get(l, j) * P.get(k, i).derivative(l);
          s += P.get(l, k) * P.get(i, j).derivative(l);
        }
        T.set(i, j, k, Rational(2) * s);
      }
  return T;
}

OneForm trivector_contract(const Trivector& T, const OneForm& a, const OneForm& b) {
  const std::size_t m = T.dim();
  OneForm r = zero_form(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (a[i].is_zero()) continue;
    for (std::size_t j = 0; j < m; ++j) {
      if (b[j].is_zero()) continue;
      const auto ab = a[i] * b[j];
      for (std::size_t k = 0; k < m; ++k) r[k] += ab * T.get(i, j, k);
    }
  }
  return r;
}

Polynomial eval_trivector(const Trivector& T, const OneForm& a, const OneForm& b, const OneForm& c) {
  return pair(trivector_contract(T, a, b), c);
}

Polynomial gelfand_dorfman_defect(const Bivector& P, const OneForm& a, const OneForm& b, const OneForm& c) {
  return p_pair(P, p_bracket(P, a, b), c) - pair(c, lie_bracket(sharp(P, a), sharp(P, b))) -
         half(eval_trivector(schouten_PP(P), a, b, c));
}

BigSection graph_P_bracket_defect(const Bivector& P, const OneForm& s, const OneForm& t) {
  const auto lhs = courant_bracket({sharp(P, s), s}, {sharp(P, t), t});
  const auto br = p_bracket(P, s, t);
  auto X = sub(sharp(P, br), scale(Polynomial(Rational(1, 2)), trivector_contract(schouten_PP(P), s, t)));
  return sub(lhs, BigSection{X, br});
}

BigSection graph_theta_bracket_defect(const TwoForm& theta, const VectorField& X, const VectorField& Y) {
  const auto lhs = courant_bracket({X, interior(X, theta)}, {Y, interior(Y, theta)});
  const auto br = lie_bracket(X, Y);
  auto a = add(interior(br, theta), interior(Y, interior(X, d(theta))));
  return sub(lhs, BigSection{br, a});
}

Chart lift_chart(const Chart& base) {
  auto names = base.names;
  for (const auto& n : base.names) names.push_back(n + "dot");
  return Chart(names);
}

namespace {

Polynomial to_lift(const Polynomial& p, std::size_t m) {
  std::vector<std::size_t> pos(m);
  for (std::size_t i = 0; i < m; ++i) pos[i] = i;
  if (p.nvars() == 0) return p.with_nvars(2 * m);
  return p.embed(2 * m, pos);
}

// xdot^j d_j f on the lifted chart
Polynomial dot_derivative(const Polynomial& f, std::size_t m) {
  Polynomial r(2 * m);
  for (std::size_t j = 0; j < m; ++j)
    r += Polynomial::variable(2 * m, m + j) * to_lift(f.derivative(j), m);
  return r;
}

}  // namespace

VectorField vertical_lift(const VectorField& X) {
  const std::size_t m = X.size();
  auto r = zero_field(2 * m);
  for (std::size_t i = 0; i < m; ++i) r[m + i] = to_lift(X[i], m);
  return r;
}

VectorField complete_lift(const VectorField& X) {
  const std::size_t m = X.size();
  auto r = zero_field(2 * m);
  for (std::size_t i = 0; i < m; ++i) {
    r[i] = to_lift(X[i], m);
    r[m + i] = dot_derivative(X[i], m);
  }
  return r;
}

OneForm vertical_lift_form(const OneForm& a) {
  const std::size_t m = a.size();
  auto r = zero_form(2 * m);
  for (std::size_t i = 0; i < m; ++i) r[i] = to_lift(a[i], m);
  return r;
}

OneForm complete_lift_form(const OneForm& a) {
  const std::size_t m = a.size();
  auto r = zero_form(2 * m);
  for (std::size_t i = 0; i < m; ++i) {
    r[i] = dot_derivative(a[i], m);
    r[m + i] = to_lift(a[i], m);
  }
  return r;
}

Polynomial transform_polynomial(const AffineChange& ch, const Polynomial& f) {
  const std::size_t m = ch.dim();
  auto inv = inverse(ch.M);
  if (!inv) throw std::invalid_argument("coordinate change is not invertible");
  // x = M^{-1} (xt - c)
  std::vector<Polynomial> images(m, Polynomial(m));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      const auto& w = (*inv)(i, j);
      if (w.is_zero()) continue;
      images[i] += w * (Polynomial::variable(m, j) - Polynomial(m, ch.c.at(j)));
    }
  if (f.nvars() == 0) return f.with_nvars(m);
  return f.compose(images);
}

BigSection transform_section(const AffineChange& ch, const BigSection& s) {
  const std::size_t m = ch.dim();
  same_dim(m, s.dim(), "transform_section");
  auto inv = inverse(ch.M);
  if (!inv) throw std::invalid_argument("coordinate change is not invertible");
  BigSection r = zero_section(m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      if (!ch.M(i, j).is_zero()) r.X[i] += ch.M(i, j) * transform_polynomial(ch, s.X[j]);
      // alpha_t = M^{-T} alpha
      if (!(*inv)(j, i).is_zero()) r.a[i] += (*inv)(j, i) * transform_polynomial(ch, s.a[j]);
    }
  return r;
}

namespace {

std::string combination(const std::vector<Polynomial>& v, const Chart& chart, const std::string& prefix) {
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i].is_zero()) continue;
    std::string c = v[i].str(chart.names);
    const std::string basis = prefix + chart.names[i];
    if (c == "1") {
      os << (first ? "" : " + ") << basis;
    } else if (c == "-1") {
      os << (first ? "-" : " - ") << basis;
    } else {
      const bool compound = v[i].size() > 1;
      os << (first ? "" : " + ") << (compound ? "(" + c + ")" : c) << "*" << basis;
    }
    first = false;
  }
  return first ? "0" : os.str();
}

}  // namespace

std::string str(const VectorField& X, const Chart& chart) { return combination(X, chart, "d/d"); }
std::string str_form(const OneForm& a, const Chart& chart) { return combination(a, chart, "d"); }

std::string str(const BigSection& s, const Chart& chart) {
  return "(" + str(s.X, chart) + ", " + str_form(s.a, chart) + ")";
}

Polynomial random_polynomial(std::mt19937_64& rng, std::size_t m, unsigned degree, int coeff_range) {
  std::uniform_int_distribution<int> coeff(-coeff_range, coeff_range);
  std::bernoulli_distribution keep(0.5);
  Polynomial p(m);
  // enumerate monomials of total degree <= degree
  std::vector<Monomial> monos{Monomial(m, 0)};
  for (unsigned deg = 1; deg <= degree; ++deg) {
    std::vector<Monomial> next;
    for (const auto& mono : monos) {
      if (monomial_degree(mono) != deg - 1) continue;
      std::size_t last = 0;
      for (std::size_t i = 0; i < m; ++i)
        if (mono[i] != 0) last = i;
      for (std::size_t i = last; i < m; ++i) {
        auto n = mono;
        ++n[i];
        next.push_back(n);
      }
    }
    monos.insert(monos.end(), next.begin(), next.end());
  }
  for (const auto& mono : monos)
    if (keep(rng)) p += Polynomial::monomial(mono, Rational(coeff(rng)));
  return p;
}

VectorField random_field(std::mt19937_64& rng, std::size_t m, unsigned degree) {
  VectorField v(m);
  for (auto& p : v) p = random_polynomial(rng, m, degree);
  return v;
}

OneForm random_form(std::mt19937_64& rng, std::size_t m, unsigned degree) { return random_field(rng, m, degree); }

BigSection random_section(std::mt19937_64& rng, std::size_t m, unsigned degree) {
  auto X = random_field(rng, m, degree);
  return {X, random_form(rng, m, degree)};
}

Skew2 random_skew2(std::mt19937_64& rng, std::size_t m, unsigned degree) {
  Skew2 t(m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) t.set(i, j, random_polynomial(rng, m, degree));
  return t;
}

}  // namespace bigiso
