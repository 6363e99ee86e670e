#include "bigiso/transport.hpp"

#include <stdexcept>

#include "bigiso/linalg.hpp"

namespace bigiso {

LinearMap LinearMap::from_matrix(Matrix<Rational> a) {
  LinearMap f;
  f.m = a.rows();
  f.n = a.cols();
  f.matrix = std::move(a);
  return f;
}

Vec LinearMap::push(const Vec& x) const {
  if (x.size() != n) throw std::invalid_argument("push: length mismatch");
  Vec y(m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) y[i] += matrix(i, j) * x[j];
  return y;
}

Vec LinearMap::pull(const Vec& alpha) const {
  if (alpha.size() != m) throw std::invalid_argument("pull: length mismatch");
  Vec b(n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < m; ++i) b[j] += matrix(i, j) * alpha[i];
  return b;
}

std::size_t LinearMap::rank() const { return rref(matrix).rank; }

Subspace pullback_subspace(const LinearMap& f, const Subspace& e) {
  if (e.ambient_dim() != 2 * f.m) throw std::invalid_argument("pullback: ambient mismatch");
  const auto ann = annihilator(e).vectors();
  Matrix<Rational> sys(ann.size(), f.n + f.m);
  for (std::size_t r = 0; r < ann.size(); ++r) {
    for (std::size_t j = 0; j < f.n; ++j)
      for (std::size_t i = 0; i < f.m; ++i) sys(r, j) += ann[r][i] * f.matrix(i, j);
    for (std::size_t i = 0; i < f.m; ++i) sys(r, f.n + i) = ann[r][f.m + i];
  }
  std::vector<Vec> gens;
  for (const auto& sol : kernel_basis(sys)) {
    Vec x(sol.begin(), sol.begin() + static_cast<std::ptrdiff_t>(f.n));
    Vec alpha(sol.begin() + static_cast<std::ptrdiff_t>(f.n), sol.end());
    auto v = x;
    const auto b = f.pull(alpha);
    v.insert(v.end(), b.begin(), b.end());
    gens.push_back(std::move(v));
  }
  return Subspace::span(2 * f.n, gens);
}

Subspace pushforward_subspace(const LinearMap& f, const Subspace& e) {
  if (e.ambient_dim() != 2 * f.n) throw std::invalid_argument("pushforward: ambient mismatch");
  const auto ann = annihilator(e).vectors();
  Matrix<Rational> sys(ann.size(), f.n + f.m);
  for (std::size_t r = 0; r < ann.size(); ++r) {
    for (std::size_t j = 0; j < f.n; ++j) sys(r, j) = ann[r][j];
    for (std::size_t i = 0; i < f.m; ++i)
      for (std::size_t j = 0; j < f.n; ++j) sys(r, f.n + i) += f.matrix(i, j) * ann[r][f.n + j];
  }
  std::vector<Vec> gens;
  for (const auto& sol : kernel_basis(sys)) {
    Vec x(sol.begin(), sol.begin() + static_cast<std::ptrdiff_t>(f.n));
    Vec alpha(sol.begin() + static_cast<std::ptrdiff_t>(f.n), sol.end());
    auto v = f.push(x);
    v.insert(v.end(), alpha.begin(), alpha.end());
    gens.push_back(std::move(v));
  }
  return Subspace::span(2 * f.m, gens);
}

Subspace kernel_of_pull(const LinearMap& f) {
  return as_cotangent(Subspace::kernel(f.matrix.transpose()));
}

Subspace kernel_of_push(const LinearMap& f) { return as_tangent(Subspace::kernel(f.matrix)); }

Subspace S_space(const LinearMap& f, const Subspace& e) {
  const auto im = subspace_sum(as_tangent(Subspace::image(f.matrix)), cotangent_summand(f.m));
  return subspace_intersection(e, im);
}

Subspace Sigma_space(const LinearMap& f, const Subspace& e) {
  const auto im = subspace_sum(tangent_summand(f.n), as_cotangent(Subspace::image(f.matrix.transpose())));
  return subspace_intersection(e, im);
}

PullbackTerms pullback_terms(const LinearMap& f, const IsotropicData& d) {
  const auto ker = kernel_of_pull(f);
  PullbackTerms t;
  t.k = d.E.dim();
  t.dim_E_prime_cap_ker = subspace_intersection(d.E_prime, ker).dim();
  t.dim_E_cap_ker = subspace_intersection(d.E, ker).dim();
  t.dim_S = S_space(f, d.E).dim();
  t.dim_S_prime = S_space(f, d.E_prime).dim();
  t.dim_ker_pull = ker.dim();
  return t;
}

PushforwardTerms pushforward_terms(const LinearMap& f, const IsotropicData& d) {
  const auto ker = kernel_of_push(f);
  PushforwardTerms t;
  t.k = d.E.dim();
  t.dim_E_prime_cap_ker = subspace_intersection(d.E_prime, ker).dim();
  t.dim_E_cap_ker = subspace_intersection(d.E, ker).dim();
  t.dim_Sigma = Sigma_space(f, d.E).dim();
  t.dim_Sigma_prime = Sigma_space(f, d.E_prime).dim();
  return t;
}

long predict_pullback_dim(const LinearMap& f, const IsotropicData& d) {
  const auto t = pullback_terms(f, d);
  return static_cast<long>(f.n) - static_cast<long>(f.m) + static_cast<long>(t.k) +
         static_cast<long>(t.dim_E_prime_cap_ker) - static_cast<long>(t.dim_E_cap_ker);
}

long predict_pushforward_dim(const LinearMap& f, const IsotropicData& d) {
  const auto t = pushforward_terms(f, d);
  return static_cast<long>(f.m) - static_cast<long>(f.n) + static_cast<long>(t.k) +
         static_cast<long>(t.dim_E_prime_cap_ker) - static_cast<long>(t.dim_E_cap_ker);
}

long predict_S_difference(const LinearMap& f, const IsotropicData& d) {
  const auto t = pullback_terms(f, d);
  return 2 * (static_cast<long>(f.m) - static_cast<long>(t.k)) -
         (static_cast<long>(t.dim_E_prime_cap_ker) - static_cast<long>(t.dim_E_cap_ker));
}

bool pushpull_roundtrip(const LinearMap& f, const Subspace& e) {
  if (!f.surjective()) throw std::invalid_argument("pushpull roundtrip needs a surjective map");
  return pushforward_subspace(f, pullback_subspace(f, e)) == e;
}

bool pullpush_roundtrip(const LinearMap& f, const Subspace& e) {
  if (!f.injective()) throw std::invalid_argument("pullpush roundtrip needs an injective map");
  return pullback_subspace(f, pushforward_subspace(f, e)) == e;
}

LinearMap random_linear_map(std::mt19937_64& rng, std::size_t n, std::size_t m, int coeff_range) {
  std::uniform_int_distribution<int> coeff(-coeff_range, coeff_range);
  std::bernoulli_distribution sparse(0.4);
  Matrix<Rational> a(m, n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = sparse(rng) ? 0 : coeff(rng);
  return LinearMap::from_matrix(std::move(a));
}

LinearMap random_surjection(std::mt19937_64& rng, std::size_t n, std::size_t m) {
  if (n < m) throw std::invalid_argument("surjection needs n >= m");
  for (;;) {
    auto f = random_linear_map(rng, n, m);
    if (f.surjective()) return f;
  }
}

LinearMap random_injection(std::mt19937_64& rng, std::size_t n, std::size_t m) {
  if (n > m) throw std::invalid_argument("injection needs n <= m");
  for (;;) {
    auto f = random_linear_map(rng, n, m);
    if (f.injective()) return f;
  }
}

}  // namespace bigiso
