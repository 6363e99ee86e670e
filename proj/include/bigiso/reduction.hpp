#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bigiso/structures.hpp"
#include "bigiso/transport.hpp"

namespace bigiso {

/// Affine embedding iota(y) = offset + L y of N (chart of dim n) into M (chart of dim m).
struct SubmanifoldData {
  Chart ambient;
  Chart chart;
  Vec offset;
  LinearMap map;  // n -> m, must be injective

  std::size_t m() const { return ambient.dim(); }
  std::size_t n() const { return chart.dim(); }
  Vec point(const Vec& y) const;
  /// Ambient coordinates as polynomials on N.
  std::vector<Polynomial> images() const;
  /// Throws std::invalid_argument unless the dimensions fit and L is injective.
  void check() const;

  static SubmanifoldData identity(const Chart& ambient);
  /// {x^i = c_i} for the named coordinates; N keeps the remaining names.
  static SubmanifoldData slice(const Chart& ambient, const std::vector<std::pair<std::string, Rational>>& fixed);
};

/// Foliation of a chart by the fibers of the projection onto the base coordinates.
struct FoliationData {
  Chart chart;
  std::vector<std::size_t> leaf;
  std::vector<std::size_t> base;

  std::size_t p() const { return leaf.size(); }
  std::size_t q() const { return base.size(); }
  Chart quotient_chart() const;
  LinearMap projection() const;  // n -> q
  Vec project(const Vec& y) const;
  /// pi^* f for f on the quotient.
  Polynomial pull(const Polynomial& f) const;
  /// f as a function on the quotient, nullopt if it depends on a leaf coordinate.
  std::optional<Polynomial> push(const Polynomial& f) const;
  /// Subspace T F of Q^{2n} at any point.
  Subspace tangent_space() const;

  static FoliationData from_leaf_names(const Chart& chart, const std::vector<std::string>& leaf);
  static FoliationData trivial(const Chart& chart);
};

class ReductionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// dim S or dim S' differs between two sample points of N.
class ProperError : public ReductionError {
 public:
  ProperError(const std::string& what, Vec a, Vec b) : ReductionError(what), a_(std::move(a)), b_(std::move(b)) {}
  const Vec& first() const { return a_; }
  const Vec& second() const { return b_; }

 private:
  Vec a_;
  Vec b_;
};

/// Pointwise iota^*E and iota^*E' at y in N.
IsotropicData pullback_at(const BigIsotropicStructure& s, const SubmanifoldData& N, const Vec& y);

struct RestrictionResult {
  BigIsotropicStructure structure;  // frames of iota^*E, iota^*E' on N
  bool supplied = false;
  std::size_t dim_S = 0;
  std::size_t dim_S_prime = 0;
  std::size_t points_checked = 0;
  std::size_t points_skipped = 0;
  bool frame_matches = true;
  std::vector<Vec> mismatch_points;
};

/// Checks that dim S, dim S' are constant on the grid (throws ProperError otherwise), builds a
/// polynomial frame of iota^*E unless one is supplied, and compares it with the pointwise pullback.
RestrictionResult restrict_to(const BigIsotropicStructure& s, const SubmanifoldData& N, const Grid& grid,
                              const std::optional<BigIsotropicStructure>& supplied = std::nullopt);

struct ReducibilityReport {
  Verdict verdict;
  std::size_t points_checked = 0;
  /// T F in iota^*E agrees with the surjectivity of pr: E cap (T F + ann TN) -> T F at every point.
  bool formulations_agree = true;
};
ReducibilityReport check_reducibility(const BigIsotropicStructure& s, const SubmanifoldData& N,
                                      const FoliationData& F, const Grid& grid);

struct ProjectabilityReport {
  bool contains_leaves = true;  // T F in E
  bool automorphisms = true;    // (L_Y X, L_Y xi) in E for leaf fields Y
  Verdict verdict;
  bool passed() const { return contains_leaves && automorphisms; }
};
ProjectabilityReport check_projectable(const BigIsotropicStructure& s, const FoliationData& F);

/// Base tangent components and all covector components independent of the leaf coordinates,
/// covector components along the leaves zero.
bool is_projectable_section(const BigSection& sec, const FoliationData& F);
/// pi_* of a projectable section.
BigSection push_section(const BigSection& sec, const FoliationData& F);
/// Section on N with base part pi^*(sec) and the given leaf components (zero if empty).
BigSection lift_section(const BigSection& sec, const FoliationData& F, const std::vector<Polynomial>& leaf_part = {});

/// Frame (d/dz^a, 0) plus frame sections with leaf parts dropped and coefficients moved to the
/// slice z = 0, kept only if each lies in the span of `frame` and the ranks agree.
std::optional<std::vector<BigSection>> projectable_frame(const std::vector<BigSection>& frame, const FoliationData& F);

struct ReduceOptions {
  /// Projectable frames of iota^*E and iota^*E'; completed from the restricted frames when absent.
  std::optional<std::vector<BigSection>> frame_E;
  std::optional<std::vector<BigSection>> frame_E_prime;
  /// Frame of iota^*E, iota^*E' to check in restrict_to.
  std::optional<BigIsotropicStructure> restricted;
};

struct ReductionResult {
  RestrictionResult restriction;
  ReducibilityReport reducibility;
  ProjectabilityReport projectability;
  std::string frame_source;  // "supplied" or "completed"
  BigIsotropicStructure structure;  // on F.quotient_chart()
  std::size_t points_checked = 0;
  bool pullback_roundtrip = true;   // pi^* E^red = iota^* E
  bool pushforward_matches = true;  // E^red = pi_* iota^* E
  bool orthogonal_matches = true;   // (E^red)' = reduction of E'
  std::vector<Vec> failure_points;
  bool passed() const { return pullback_roundtrip && pushforward_matches && orthogonal_matches; }
};

/// Reduction via (N, F); F is a foliation of N's chart. Throws ReductionError when the
/// reducibility condition fails or no projectable frame can be verified.
ReductionResult reduce(const BigIsotropicStructure& s, const SubmanifoldData& N, const FoliationData& F,
                       const Grid& grid, const ReduceOptions& opt = {});

/// E cap T = 0 at every valid grid point.
Verdict check_tangent_free(const BigIsotropicStructure& s, const Grid& grid);

/// pi_*[x, y] - [pi_* x, pi_* y] for projectable sections x, y on N; nullopt if [x, y] is not
/// projectable. Throws std::invalid_argument if x or y is not projectable.
std::optional<BigSection> bracket_transport_defect(const BigSection& x, const BigSection& y, const FoliationData& F);

/// D_P = T F + {(sharp alpha, alpha) : alpha in ann T F}, framed by (d/dz^a, 0), (P^{uv} d/dy^v, dy^u).
BigIsotropicStructure dirac_along_foliation_P(const FoliationData& F, const Bivector& P);
/// dP^{uv}/dz^a = 0 for base indices u, v and leaf indices a.
Verdict bivector_projectable(const FoliationData& F, const Bivector& P);

/// D_omega = T F + {(Y, i(Y) omega) : Y in nu F} with nu F spanned by d/dy^u - t^a_u d/dz^a;
/// `normal` holds t (base x leaf), empty means zero. Throws std::invalid_argument unless i(T F) omega = 0.
BigIsotropicStructure dirac_along_foliation_omega(const FoliationData& F, const TwoForm& omega,
                                                  const std::vector<std::vector<Polynomial>>& normal = {});
/// omega_{uv} independent of the leaf coordinates and i(T F) omega = 0.
Verdict form_foliated(const FoliationData& F, const TwoForm& omega);

}  // namespace bigiso
