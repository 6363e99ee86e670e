#pragma once

#include <random>

#include "bigiso/big_tangent.hpp"

namespace bigiso {

/// Linear map Q^n -> Q^m; the matrix acts as f_* on vectors and its
/// transpose as f^* on covectors.
struct LinearMap {
  std::size_t n = 0;
  std::size_t m = 0;
  Matrix<Rational> matrix;  // m x n

  static LinearMap from_matrix(Matrix<Rational> a);
  Vec push(const Vec& x) const;     // f_* x
  Vec pull(const Vec& alpha) const; // f^* alpha
  std::size_t rank() const;
  bool injective() const { return rank() == n; }
  bool surjective() const { return rank() == m; }
};

/// {(X, f^* alpha) : (f_* X, alpha) in E}
Subspace pullback_subspace(const LinearMap& f, const Subspace& e);
/// {(f_* X, alpha) : (X, f^* alpha) in E}
Subspace pushforward_subspace(const LinearMap& f, const Subspace& e);

/// 0 + ker f^* inside Q^{2m} and ker f_* + 0 inside Q^{2n}.
Subspace kernel_of_pull(const LinearMap& f);
Subspace kernel_of_push(const LinearMap& f);

/// Intermediate spaces of the dimension count.
struct PullbackTerms {
  std::size_t k = 0;
  std::size_t dim_E_prime_cap_ker = 0;
  std::size_t dim_E_cap_ker = 0;
  std::size_t dim_S = 0;        // E cap (im f_* + T*)
  std::size_t dim_S_prime = 0;  // E' cap (im f_* + T*)
  std::size_t dim_ker_pull = 0;
};

struct PushforwardTerms {
  std::size_t k = 0;
  std::size_t dim_E_prime_cap_ker = 0;
  std::size_t dim_E_cap_ker = 0;
  std::size_t dim_Sigma = 0;        // E cap (T + im f^*)
  std::size_t dim_Sigma_prime = 0;  // E' cap (T + im f^*)
};

PullbackTerms pullback_terms(const LinearMap& f, const IsotropicData& d);
PushforwardTerms pushforward_terms(const LinearMap& f, const IsotropicData& d);
Subspace S_space(const LinearMap& f, const Subspace& e);
Subspace Sigma_space(const LinearMap& f, const Subspace& e);

/// n - m + k + dim(E' cap ker f^*) - dim(E cap ker f^*)
long predict_pullback_dim(const LinearMap& f, const IsotropicData& d);
/// m - n + k + dim(E' cap ker f_*) - dim(E cap ker f_*)
long predict_pushforward_dim(const LinearMap& f, const IsotropicData& d);
/// dim S' - dim S as predicted from the intersection dimensions.
long predict_S_difference(const LinearMap& f, const IsotropicData& d);

/// f_* f^* E == E for surjective f; throws if f is not surjective.
bool pushpull_roundtrip(const LinearMap& f, const Subspace& e);
/// f^* f_* E == E for injective f; throws if f is not injective.
bool pullpush_roundtrip(const LinearMap& f, const Subspace& e);

LinearMap random_linear_map(std::mt19937_64& rng, std::size_t n, std::size_t m, int coeff_range = 2);
LinearMap random_surjection(std::mt19937_64& rng, std::size_t n, std::size_t m);
LinearMap random_injection(std::mt19937_64& rng, std::size_t n, std::size_t m);

}  // namespace bigiso
