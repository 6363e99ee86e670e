#include "bigiso/big_tangent.hpp"

#include <stdexcept>

#include "bigiso/linalg.hpp"

namespace bigiso {

namespace {

std::size_t half_of(std::size_t ambient) {
  if (ambient % 2 != 0) throw std::invalid_argument("big tangent space needs even ambient dimension");
  return ambient / 2;
}

Vec head(const Vec& v, std::size_t m) { return {v.begin(), v.begin() + static_cast<std::ptrdiff_t>(m)}; }
Vec tail(const Vec& v, std::size_t m) { return {v.begin() + static_cast<std::ptrdiff_t>(m), v.end()}; }

Vec concat(const Vec& a, const Vec& b) {
  Vec r = a;
  r.insert(r.end(), b.begin(), b.end());
  return r;
}

std::optional<Vec> solve_right(const Matrix<Rational>& a, const Vec& b) {
  return solve_left(a.transpose(), b);
}

Matrix<Rational> rows_of(const std::vector<Vec>& vs, std::size_t cols) {
  return Matrix<Rational>::from_rows(vs, cols);
}

}  // namespace

Vec BigVector::flat() const { return concat(tangent, cotangent); }

BigVector BigVector::from_flat(const Vec& v) {
  const auto m = half_of(v.size());
  return {head(v, m), tail(v, m)};
}

Rational pairing_g(const BigVector& u, const BigVector& v) {
  if (u.m() != v.m()) throw std::invalid_argument("pairing_g: dimension mismatch");
  return (dot(u.cotangent, v.tangent) + dot(v.cotangent, u.tangent)) / Rational(2);
}

Rational form_omega(const BigVector& u, const BigVector& v) {
  if (u.m() != v.m()) throw std::invalid_argument("form_omega: dimension mismatch");
  return (dot(u.cotangent, v.tangent) - dot(v.cotangent, u.tangent)) / Rational(2);
}

Rational pairing_g(const Vec& u, const Vec& v) {
  return pairing_g(BigVector::from_flat(u), BigVector::from_flat(v));
}

Subspace orthogonal_g(const Subspace& e) {
  const auto m = half_of(e.ambient_dim());
  std::vector<Vec> swapped;
  for (const auto& v : e.vectors()) swapped.push_back(concat(tail(v, m), head(v, m)));
  return Subspace::kernel(rows_of(swapped, 2 * m));
}

bool is_isotropic(const Subspace& e) {
  half_of(e.ambient_dim());
  const auto vs = e.vectors();
  for (std::size_t i = 0; i < vs.size(); ++i)
    for (std::size_t j = i; j < vs.size(); ++j)
      if (!pairing_g(vs[i], vs[j]).is_zero()) return false;
  return true;
}

Subspace tangent_part(const Subspace& e) {
  const auto m = half_of(e.ambient_dim());
  std::vector<Vec> vs;
  for (const auto& v : e.vectors()) vs.push_back(head(v, m));
  return Subspace::span(m, vs);
}

Subspace cotangent_part(const Subspace& e) {
  const auto m = half_of(e.ambient_dim());
  std::vector<Vec> vs;
  for (const auto& v : e.vectors()) vs.push_back(tail(v, m));
  return Subspace::span(m, vs);
}

Subspace as_tangent(const Subspace& s) {
  std::vector<Vec> vs;
  for (const auto& v : s.vectors()) vs.push_back(concat(v, Vec(s.ambient_dim())));
  return Subspace::span(2 * s.ambient_dim(), vs);
}

Subspace as_cotangent(const Subspace& s) {
  std::vector<Vec> vs;
  for (const auto& v : s.vectors()) vs.push_back(concat(Vec(s.ambient_dim()), v));
  return Subspace::span(2 * s.ambient_dim(), vs);
}

Subspace tangent_summand(std::size_t m) { return as_tangent(Subspace::full(m)); }
Subspace cotangent_summand(std::size_t m) { return as_cotangent(Subspace::full(m)); }

IsotropicData IsotropicData::from_E(const Subspace& e) {
  if (!is_isotropic(e)) throw std::invalid_argument("subspace is not g-isotropic");
  return {e.ambient_dim() / 2, e, orthogonal_g(e)};
}

namespace {

void require_valid(const IsotropicData& d) {
  if (d.E.ambient_dim() != 2 * d.m || d.E_prime.ambient_dim() != 2 * d.m)
    throw std::invalid_argument("isotropic data: ambient dimension mismatch");
  if (!is_isotropic(d.E)) throw std::invalid_argument("isotropic data: E is not isotropic");
  if (!(orthogonal_g(d.E) == d.E_prime)) throw std::invalid_argument("isotropic data: E' is not E^perp");
}

/// Lift of x into e: a covector alpha with (x, alpha) in e.
std::optional<Vec> lift(const Subspace& e, std::size_t m, const Vec& x) {
  std::vector<Vec> tangents;
  for (const auto& v : e.vectors()) tangents.push_back(head(v, m));
  auto c = solve_left(rows_of(tangents, m), x);
  if (!c) return std::nullopt;
  Vec alpha(m);
  const auto vs = e.vectors();
  for (std::size_t i = 0; i < vs.size(); ++i)
    for (std::size_t j = 0; j < m; ++j) alpha[j] += (*c)[i] * vs[i][m + j];
  return alpha;
}

}  // namespace

CharacteristicTriple characteristic_triple(const IsotropicData& d) {
  require_valid(d);
  CharacteristicTriple t;
  t.m = d.m;
  t.cal_E = tangent_part(d.E);
  t.cal_E_prime = tangent_part(d.E_prime);
  const auto xs = t.cal_E.vectors();
  const auto ys = t.cal_E_prime.vectors();
  t.varpi = Matrix<Rational>(xs.size(), ys.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const auto alpha = lift(d.E, d.m, xs[i]);
    for (std::size_t j = 0; j < ys.size(); ++j) t.varpi(i, j) = dot(*alpha, ys[j]);
  }
  return t;
}

bool varpi_well_defined(const IsotropicData& d, const CharacteristicTriple& t) {
  const auto xs = t.cal_E.vectors();
  const auto ys = t.cal_E_prime.vectors();
  for (std::size_t j = 0; j < ys.size(); ++j) {
    const auto beta = lift(d.E_prime, d.m, ys[j]);
    if (!beta) return false;
    for (std::size_t i = 0; i < xs.size(); ++i)
      if (t.varpi(i, j) != -dot(*beta, xs[i])) return false;
  }
  return true;
}

IsotropicData reconstruct_from_bases(std::size_t m, const std::vector<Vec>& xs,
                                     const std::vector<Vec>& ys, const Matrix<Rational>& varpi) {
  const auto ymat = rows_of(ys, m);
  const auto cal_e = Subspace::span(m, xs);
  const auto cal_e_prime = Subspace::span(m, ys);
  if (cal_e_prime.dim() != ys.size()) throw std::invalid_argument("reconstruct: dependent cal_E' basis");
  if (!cal_e_prime.contains(cal_e)) throw std::invalid_argument("reconstruct: cal_E not inside cal_E'");
  // Skew-symmetry of varpi on cal_E x cal_E.
  std::vector<Vec> coords;
  for (const auto& x : xs) coords.push_back(*solve_left(ymat, x));
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t l = i; l < xs.size(); ++l) {
      Rational a, b;
      for (std::size_t j = 0; j < ys.size(); ++j) {
        a += coords[l][j] * varpi(i, j);
        b += coords[i][j] * varpi(l, j);
      }
      if (!(a + b).is_zero()) throw std::invalid_argument("reconstruct: varpi not skew on cal_E");
    }
  }
  std::vector<Vec> e_gens;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    auto alpha = solve_right(ymat, varpi.row(i));
    if (!alpha) throw std::invalid_argument("reconstruct: inconsistent varpi");
    e_gens.push_back(concat(xs[i], *alpha));
  }
  for (const auto& k : annihilator(cal_e_prime).vectors()) e_gens.push_back(concat(Vec(m), k));
  const auto xmat = rows_of(xs, m);
  std::vector<Vec> ep_gens;
  for (std::size_t j = 0; j < ys.size(); ++j) {
    Vec rhs(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) rhs[i] = -varpi(i, j);
    auto beta = xs.empty() ? std::optional<Vec>(Vec(m)) : solve_right(xmat, rhs);
    if (!beta) throw std::invalid_argument("reconstruct: inconsistent varpi on cal_E'");
    ep_gens.push_back(concat(ys[j], *beta));
  }
  for (const auto& k : annihilator(cal_e).vectors()) ep_gens.push_back(concat(Vec(m), k));
  return {m, Subspace::span(2 * m, e_gens), Subspace::span(2 * m, ep_gens)};
}

IsotropicData reconstruct(const CharacteristicTriple& t) {
  return reconstruct_from_bases(t.m, t.cal_E.vectors(), t.cal_E_prime.vectors(), t.varpi);
}

Subspace dirac_extension(const IsotropicData& d) {
  return subspace_sum(d.E, as_cotangent(annihilator(tangent_part(d.E))));
}

Subspace flat_varpi_kernel(const IsotropicData& d) {
  const auto t = characteristic_triple(d);
  const auto coeffs = kernel_basis(t.varpi.transpose());
  const auto xs = t.cal_E.vectors();
  std::vector<Vec> out;
  for (const auto& c : coeffs) {
    Vec v(d.m);
    for (std::size_t i = 0; i < xs.size(); ++i)
      for (std::size_t j = 0; j < d.m; ++j) v[j] += c[i] * xs[i][j];
    out.push_back(v);
  }
  return Subspace::span(d.m, out);
}

Subspace tangent_intersection(const IsotropicData& d) {
  return tangent_part(subspace_intersection(d.E, tangent_summand(d.m)));
}

Subspace random_subspace(std::mt19937_64& rng, std::size_t ambient, std::size_t dim,
                         int coeff_range) {
  if (dim > ambient) throw std::invalid_argument("random_subspace: dim exceeds ambient");
  std::uniform_int_distribution<int> coeff(-coeff_range, coeff_range);
  std::bernoulli_distribution sparse(0.3);
  std::vector<Vec> vs;
  Subspace acc(ambient);
  while (acc.dim() < dim) {
    Vec v(ambient);
    for (auto& x : v) x = sparse(rng) ? 0 : coeff(rng);
    if (acc.contains(v)) continue;
    vs.push_back(v);
    acc = Subspace::span(ambient, vs);
  }
  return acc;
}

IsotropicData random_isotropic(std::mt19937_64& rng, std::size_t m, int coeff_range) {
  std::uniform_int_distribution<std::size_t> dprime(0, m);
  const std::size_t d2 = dprime(rng);
  std::uniform_int_distribution<std::size_t> dsub(0, d2);
  const std::size_t d1 = dsub(rng);
  std::uniform_int_distribution<int> coeff(-coeff_range, coeff_range);
  std::bernoulli_distribution sparse(0.3);
  // A random basis of cal_E' whose first d1 vectors span cal_E.
  std::vector<Vec> ys;
  Subspace acc(m);
  while (ys.size() < d2) {
    Vec v(m);
    for (auto& x : v) x = sparse(rng) ? 0 : coeff(rng);
    if (acc.contains(v)) continue;
    ys.push_back(v);
    acc = Subspace::span(m, ys);
  }
  std::vector<Vec> xs(ys.begin(), ys.begin() + static_cast<std::ptrdiff_t>(d1));
  Matrix<Rational> varpi(d1, d2);
  for (std::size_t i = 0; i < d1; ++i) {
    for (std::size_t j = 0; j < d2; ++j) {
      if (j < d1) {
        if (j > i) {
          varpi(i, j) = coeff(rng);
          varpi(j, i) = -varpi(i, j);
        }
      } else {
        varpi(i, j) = coeff(rng);
      }
    }
  }
  return reconstruct_from_bases(m, xs, ys, varpi);
}

IsotropicData random_isotropic(std::mt19937_64& rng, const RandomIsotropicOptions& opt) {
  std::uniform_int_distribution<std::size_t> md(opt.min_m, opt.max_m);
  return random_isotropic(rng, md(rng), opt.coeff_range);
}

}  // namespace bigiso
