#pragma once

#include <random>
#include <vector>

#include "bigiso/subspace.hpp"

namespace bigiso {

/// Element (X, alpha) of Q^m + (Q^m)*, flattened as tangent then cotangent.
struct BigVector {
  Vec tangent;
  Vec cotangent;

  std::size_t m() const { return tangent.size(); }
  Vec flat() const;
  static BigVector from_flat(const Vec& v);
};

Rational pairing_g(const BigVector& u, const BigVector& v);
Rational form_omega(const BigVector& u, const BigVector& v);
Rational pairing_g(const Vec& u, const Vec& v);

Subspace orthogonal_g(const Subspace& e);
bool is_isotropic(const Subspace& e);

Subspace tangent_part(const Subspace& e);
Subspace cotangent_part(const Subspace& e);
/// T_xM + 0 and 0 + T*_xM inside Q^{2m}.
Subspace tangent_summand(std::size_t m);
Subspace cotangent_summand(std::size_t m);
/// Embeds a subspace of Q^m as S + 0 or 0 + S inside Q^{2m}.
Subspace as_tangent(const Subspace& s);
Subspace as_cotangent(const Subspace& s);

struct IsotropicData {
  std::size_t m = 0;
  Subspace E;
  Subspace E_prime;

  /// Builds (E, E^perp); throws std::invalid_argument if E is not isotropic.
  static IsotropicData from_E(const Subspace& e);
};

struct CharacteristicTriple {
  std::size_t m = 0;
  Subspace cal_E;
  Subspace cal_E_prime;
  /// varpi(i, j) = varpi(X_i, Y_j) for the RREF bases of cal_E and cal_E_prime.
  Matrix<Rational> varpi;

  friend bool operator==(const CharacteristicTriple&, const CharacteristicTriple&) = default;
};

CharacteristicTriple characteristic_triple(const IsotropicData& d);
/// Checks varpi(X, Y) = -beta(X) for lifts (Y, beta) in E'.
bool varpi_well_defined(const IsotropicData& d, const CharacteristicTriple& t);
IsotropicData reconstruct(const CharacteristicTriple& t);
/// Same construction from arbitrary bases: varpi(i, j) = varpi(xs[i], ys[j]).
IsotropicData reconstruct_from_bases(std::size_t m, const std::vector<Vec>& xs,
                                     const std::vector<Vec>& ys, const Matrix<Rational>& varpi);

Subspace dirac_extension(const IsotropicData& d);
/// Kernel of X -> varpi(X, .) on cal_E.
Subspace flat_varpi_kernel(const IsotropicData& d);
/// pr_TM(E cap (T_xM + 0)).
Subspace tangent_intersection(const IsotropicData& d);

struct RandomIsotropicOptions {
  std::size_t min_m = 1;
  std::size_t max_m = 6;
  int coeff_range = 3;
};

IsotropicData random_isotropic(std::mt19937_64& rng, const RandomIsotropicOptions& opt = {});
IsotropicData random_isotropic(std::mt19937_64& rng, std::size_t m, int coeff_range = 3);
Subspace random_subspace(std::mt19937_64& rng, std::size_t ambient, std::size_t dim,
                         int coeff_range = 3);

}  // namespace bigiso
