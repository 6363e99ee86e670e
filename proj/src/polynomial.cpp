#include "bigiso/polynomial.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace bigiso {

std::uint32_t monomial_degree(const Monomial& m) {
  return std::accumulate(m.begin(), m.end(), std::uint32_t{0});
}

bool GrlexGreater::operator()(const Monomial& a, const Monomial& b) const {
  const auto da = monomial_degree(a);
  const auto db = monomial_degree(b);
  if (da != db) return da > db;
  return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

namespace {

bool is_zero_monomial(const Monomial& m) {
  return std::all_of(m.begin(), m.end(), [](std::uint32_t e) { return e == 0; });
}

Monomial add_monomials(const Monomial& a, const Monomial& b) {
  Monomial r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

}  // namespace

Polynomial::Polynomial(std::size_t nvars, const Rational& c) : nvars_(nvars) {
  if (!c.is_zero()) terms_.emplace(Monomial(nvars, 0), c);
}

Polynomial Polynomial::variable(std::size_t nvars, std::size_t index) {
  if (index >= nvars) throw std::out_of_range("variable index out of range");
  Monomial m(nvars, 0);
  m[index] = 1;
  return monomial(std::move(m), Rational(1));
}

Polynomial Polynomial::monomial(Monomial exps, const Rational& c) {
  Polynomial p(exps.size());
  if (!c.is_zero()) p.terms_.emplace(std::move(exps), c);
  return p;
}

bool Polynomial::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && is_zero_monomial(terms_.begin()->first));
}

Rational Polynomial::constant_term() const { return coefficient(Monomial(nvars_, 0)); }

Rational Polynomial::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Rational(0) : it->second;
}

std::uint32_t Polynomial::total_degree() const {
  return terms_.empty() ? 0 : monomial_degree(terms_.begin()->first);
}

std::uint32_t Polynomial::degree_in(std::size_t var) const {
  std::uint32_t d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m.at(var));
  return d;
}

const Polynomial::TermMap::value_type& Polynomial::leading_term() const {
  if (terms_.empty()) throw std::domain_error("leading term of zero polynomial");
  return *terms_.begin();
}

std::size_t Polynomial::common_nvars(const Polynomial& a, const Polynomial& b) {
  if (a.nvars_ == b.nvars_) return a.nvars_;
  if (a.is_constant()) return b.nvars_;
  if (b.is_constant()) return a.nvars_;
  throw std::invalid_argument("polynomials over different variable counts (" +
                              std::to_string(a.nvars_) + " vs " + std::to_string(b.nvars_) + ")");
}

void Polynomial::promote_to(std::size_t nvars) {
  if (nvars == nvars_) return;
  if (!is_constant()) throw std::invalid_argument("cannot change variable count of non-constant");
  TermMap t;
  if (!terms_.empty()) t.emplace(Monomial(nvars, 0), terms_.begin()->second);
  terms_ = std::move(t);
  nvars_ = nvars;
}

Polynomial Polynomial::with_nvars(std::size_t nvars) const {
  Polynomial p = *this;
  p.promote_to(nvars);
  return p;
}

void Polynomial::add_term(const Monomial& m, const Rational& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

Polynomial Polynomial::operator-() const {
  Polynomial r = *this;
  for (auto& [m, c] : r.terms_) c = -c;
  return r;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  const auto n = common_nvars(*this, o);
  promote_to(n);
  if (o.nvars_ == n) {
    for (const auto& [m, c] : o.terms_) add_term(m, c);
  } else {
    add_term(Monomial(n, 0), o.constant_term());
  }
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) { return *this += -o; }

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  const auto n = Polynomial::common_nvars(a, b);
  Polynomial r(n);
  if (a.is_zero() || b.is_zero()) return r;
  const Polynomial pa = a.with_nvars(n);
  const Polynomial pb = b.with_nvars(n);
  for (const auto& [ma, ca] : pa.terms_) {
    for (const auto& [mb, cb] : pb.terms_) r.add_term(add_monomials(ma, mb), ca * cb);
  }
  return r;
}

Polynomial& Polynomial::operator*=(const Polynomial& o) { return *this = *this * o; }

Polynomial& Polynomial::operator*=(const Rational& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, v] : terms_) v *= c;
  return *this;
}

bool operator==(const Polynomial& a, const Polynomial& b) {
  if (a.nvars_ == b.nvars_) return a.terms_ == b.terms_;
  if (a.is_constant() && b.is_constant()) return a.constant_term() == b.constant_term();
  return false;
}

Polynomial Polynomial::pow(unsigned e) const {
  Polynomial result(nvars_, Rational(1));
  Polynomial base = *this;
  while (e > 0) {
    if (e & 1U) result *= base;
    e >>= 1U;
    if (e > 0) base *= base;
  }
  return result;
}

Polynomial Polynomial::derivative(std::size_t var) const {
  Polynomial r(nvars_);
  for (const auto& [m, c] : terms_) {
    if (var >= m.size() || m[var] == 0) continue;
    Monomial d = m;
    d[var] -= 1;
    r.add_term(d, c * Rational(static_cast<long>(m[var])));
  }
  return r;
}

namespace {

Rational rational_pow(const Rational& x, std::uint32_t e) {
  Rational r(1);
  for (std::uint32_t i = 0; i < e; ++i) r *= x;
  return r;
}

}  // namespace

Rational Polynomial::evaluate(std::span<const Rational> point) const {
  if (!is_constant() && point.size() != nvars_) {
    throw std::invalid_argument("evaluation point has wrong dimension");
  }
  Rational sum(0);
  for (const auto& [m, c] : terms_) {
    Rational t = c;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i] != 0) t *= rational_pow(point[i], m[i]);
    }
    sum += t;
  }
  return sum;
}

Polynomial Polynomial::substitute(std::size_t var, const Rational& value) const {
  Polynomial r(nvars_);
  for (const auto& [m, c] : terms_) {
    Monomial d = m;
    const auto e = d.at(var);
    d[var] = 0;
    r.add_term(d, c * rational_pow(value, e));
  }
  return r;
}

Polynomial Polynomial::compose(std::span<const Polynomial> images) const {
  if (!is_constant() && images.size() != nvars_) {
    throw std::invalid_argument("compose needs one image per variable");
  }
  std::size_t n = 0;
  for (const auto& img : images) {
    if (!img.is_constant()) {
      if (n != 0 && img.nvars() != n) throw std::invalid_argument("compose images disagree");
      n = img.nvars();
    }
  }
  if (n == 0 && !images.empty()) n = images.front().nvars();
  Polynomial r(n);
  for (const auto& [m, c] : terms_) {
    Polynomial t(n, c);
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i] != 0) t *= images[i].pow(m[i]);
    }
    r += t;
  }
  return r;
}

Polynomial Polynomial::embed(std::size_t nvars, std::span<const std::size_t> positions) const {
  Polynomial r(nvars);
  for (const auto& [m, c] : terms_) {
    Monomial d(nvars, 0);
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i] == 0) continue;
      d.at(positions[i]) += m[i];
    }
    r.add_term(d, c);
  }
  return r;
}

std::optional<Polynomial> Polynomial::divide_exact(const Polynomial& d) const {
  if (d.is_zero()) throw std::domain_error("division by zero polynomial");
  const auto n = common_nvars(*this, d);
  Polynomial rem = with_nvars(n);
  const Polynomial div = d.with_nvars(n);
  Polynomial q(n);
  const auto& [lm, lc] = div.leading_term();
  while (!rem.is_zero()) {
    const auto& [rm, rc] = rem.leading_term();
    Monomial t(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      if (rm[i] < lm[i]) return std::nullopt;
      t[i] = rm[i] - lm[i];
    }
    const Polynomial step = monomial(t, rc / lc);
    q += step;
    rem -= step * div;
  }
  return q;
}

std::string Polynomial::str(std::span<const std::string> names) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    const bool negative = c.sign() < 0;
    const Rational mag = negative ? -c : c;
    if (first) {
      if (negative) os << '-';
    } else {
      os << (negative ? " - " : " + ");
    }
    first = false;
    std::vector<std::string> factors;
    const bool constant = is_zero_monomial(m);
    if (constant || !mag.is_one()) factors.push_back(mag.str());
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i] == 0) continue;
      const std::string& name = i < names.size() ? names[i] : "x" + std::to_string(i + 1);
      factors.push_back(m[i] == 1 ? name : name + "^" + std::to_string(m[i]));
    }
    for (std::size_t i = 0; i < factors.size(); ++i) os << (i ? "*" : "") << factors[i];
  }
  return os.str();
}

std::string Polynomial::str() const { return str(default_names(nvars_)); }

std::vector<std::string> default_names(std::size_t n) {
  std::vector<std::string> names;
  names.reserve(n);
  for (std::size_t i = 0; i < n; ++i) names.push_back("x" + std::to_string(i + 1));
  return names;
}

}  // namespace bigiso
