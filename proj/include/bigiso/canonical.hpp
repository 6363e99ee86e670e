#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "bigiso/big_tangent.hpp"
#include "bigiso/rational_function.hpp"
#include "bigiso/structures.hpp"

namespace bigiso {

/// Pointwise seed data at x0. Tangent vectors and covectors are plain Q^m vectors.
struct SeedBasis {
  std::vector<Vec> X;      // basis of cal E
  std::vector<Vec> xi;     // (X_a, xi^a) in E
  std::vector<Vec> Y;      // complement of cal E in cal E'
  std::vector<Vec> eta;    // (Y_h, eta^h) in E'
  std::vector<Vec> kappa;  // basis of ann cal E'
  std::vector<Vec> nu;     // completes kappa to a basis of ann cal E
  std::vector<Vec> Z;      // complement of cal E' in T M
};

SeedBasis seed_basis(const IsotropicData& d);

class ChartNotAdaptedError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NormalizationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Coordinates split as (x^a, y^h, z^sigma) around the origin; the leaf through
/// the origin is {y = 0, z = 0}. `twist` holds chi^sigma_h with
/// Y_h = d/dy^h + chi^sigma_h d/dz^sigma; it must vanish on the leaf.
struct AdaptedChart {
  Chart chart;
  std::vector<std::size_t> x;
  std::vector<std::size_t> y;
  std::vector<std::size_t> z;
  std::vector<std::vector<Polynomial>> twist;  // h x sigma, empty means zero

  std::size_t m() const { return chart.dim(); }
  static AdaptedChart from_names(const Chart& chart, const std::vector<std::string>& x,
                                 const std::vector<std::string>& y, const std::vector<std::string>& z);
  Polynomial chi(std::size_t h, std::size_t s) const;
};

using RFMatrix = Matrix<RationalFunction>;

struct RationalSection {
  std::vector<RationalFunction> X;
  std::vector<RationalFunction> a;
  friend bool operator==(const RationalSection&, const RationalSection&) = default;
};

std::string str(const RationalSection& s, const Chart& chart);

struct NormalizeOptions {
  /// Basis of E' alone with alpha' = beta' = A' = B' = 0; the X and Xi rows may leave E.
  bool e_prime_basis = false;
};

/// Coefficients of the canonical local basis, read in the coordinates of the adapted chart:
///   X_a   = (d/dx^a + A1(a,h) d/dy^h + A2(a,s) d/dz^s, alpha(a,b) dx^b + alpha1(a,h) dy^h)
///   Xi_u  = (B1(u,h) d/dy^h + B2(u,s) d/dz^s, beta(u,a) dx^a + beta1(u,h) dy^h + dz^u)
///   Y_h   = (d/dy^h + C2(h,s) d/dz^s, gamma(h,a) dx^a)
///   Th_q  = (L2(q,s) d/dz^s, lambda(q,a) dx^a + dy^q)
struct CanonicalFrame {
  AdaptedChart chart;
  bool e_prime_basis = false;
  RFMatrix A1, A2, alpha, alpha1;
  RFMatrix B1, B2, beta, beta1;
  RFMatrix C2, gamma;
  RFMatrix L2, lambda;
  /// Pivot minors; the frame is valid where both are nonzero.
  Polynomial denominator_E;
  Polynomial denominator_E_prime;
  std::vector<RationalSection> cal_X, Xi, cal_Y, Theta;

  std::size_t p() const { return cal_X.size(); }
  std::size_t u() const { return Xi.size(); }
  std::size_t h() const { return cal_Y.size(); }
  bool valid_at(const Vec& point) const;
  std::vector<RationalSection> e_frame() const;
  std::vector<RationalSection> e_prime_frame() const;
  /// Same coefficients relative to the frame (X_a, Y_h, Z_s) and its dual coframe, which differ from
  /// the coordinate ones only through the twist.
  CanonicalFrame relative_to_twist() const;
};

/// Throws ChartNotAdaptedError if cal E, cal E' at the origin are not span{d/dx}, span{d/dx, d/dy}.
void check_adapted(const BigIsotropicStructure& s, const AdaptedChart& chart);

CanonicalFrame normalize_frame(const BigIsotropicStructure& s, const AdaptedChart& chart,
                               const NormalizeOptions& opt = {});

Verdict check_orthogonality_relations(const CanonicalFrame& cf);
/// A', A'', B', B'', C'', L'' vanish identically on the leaf {y = 0, z = 0}.
Verdict check_leaf_conditions(const CanonicalFrame& cf);

bool is_locally_decomposable(const CanonicalFrame& cf);

/// H(E, F) at a point: tangent parts of E cap (T + ann TF), F the fibers x = const.
Subspace pseudo_normal(const IsotropicData& d, const AdaptedChart& chart);
/// Same space from the canonical coefficients.
Subspace pseudo_normal(const CanonicalFrame& cf, const Vec& point);
/// Covector parts of E' cap (TF + T*).
Subspace pseudo_conormal(const IsotropicData& d, const AdaptedChart& chart);
/// Tangent parts of E' cap (T + ann TF).
Subspace pseudo_normal_prime(const IsotropicData& d, const AdaptedChart& chart);

struct CouplingReport {
  std::size_t points_checked = 0;
  bool equivalences_hold = true;
  bool decomposition_holds = true;
  std::vector<std::string> failures;
  bool passed() const { return equivalences_hold && decomposition_holds; }
};

/// At each grid point where the frame is valid, compares alpha' = 0 with the normal-bundle,
/// conormal and flat-kernel conditions, and checks the splitting of E when they hold.
CouplingReport coupling_equivalences(const BigIsotropicStructure& s, const CanonicalFrame& cf, const Grid& grid);

/// alpha(a, b) restricted to the leaf.
RFMatrix leaf_pullback(const CanonicalFrame& cf);
/// Compares the leaf form with the pointwise pullbacks of E and D(E) at leaf grid points.
Verdict check_leaf_pullback(const BigIsotropicStructure& s, const CanonicalFrame& cf, const Grid& grid);

struct DiracExtensionFrame {
  bool regular = false;  // B' and B'' vanish identically
  std::vector<RationalSection> generators;
};
DiracExtensionFrame dirac_extension_frame(const CanonicalFrame& cf);
Verdict check_dirac_extension(const BigIsotropicStructure& s, const CanonicalFrame& cf,
                              const DiracExtensionFrame& de, const Grid& grid);

class TransversalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TransversalResult {
  BigIsotropicStructure structure;  // on the chart (y, z)
  std::size_t points_checked = 0;
  bool matches_pullback = true;
  bool graph_type = true;
};

/// Structure induced on {x = 0}, framed by Xi_u with denominators cleared; throws TransversalError
/// if dim S or dim S' varies on the sampled transversal.
TransversalResult transversal_structure(const BigIsotropicStructure& s, const CanonicalFrame& cf, const Grid& grid);

}  // namespace bigiso
