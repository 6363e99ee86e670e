#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "bigiso/big_tangent.hpp"
#include "bigiso/calculus.hpp"

namespace bigiso {

using PolyRow = std::vector<Polynomial>;

PolyRow flatten(const BigSection& s);
BigSection unflatten(const PolyRow& row);
Vec evaluate_row(const PolyRow& row, const Vec& point);

/// Sample grid: all points with integer coordinates in [lo, hi], thinned to
/// at most `cap` points by a deterministic stride. The origin is always first.
struct Grid {
  long lo = -2;
  long hi = 2;
  std::size_t cap = 256;
  std::vector<Vec> points(std::size_t m) const;
  std::string str() const;
};

/// Pass/fail record with human-readable failure lines.
struct Verdict {
  bool passed = true;
  std::vector<std::string> failures;
  void fail(std::string why);
  void merge(const Verdict& other, const std::string& prefix = "");
};

/// Row span of a polynomial matrix over the field of rational functions.
///
/// The generic rank r and a nonvanishing r-minor (rows R, columns P) are found
/// at pseudo-random sample points; v lies in the span iff every bordered minor
/// with rows R + {v} and columns P + {j} is the zero polynomial. Each bordered
/// minor is linear in v, so its cofactor row is computed once and cached.
class FrameSpan {
 public:
  struct Membership {
    bool member = true;
    Polynomial witness;  // a nonzero bordered minor when !member
    std::size_t column = 0;
  };

  FrameSpan(std::vector<PolyRow> rows, std::size_t width, std::uint64_t seed = 0x5eedULL);
  static FrameSpan of_sections(const std::vector<BigSection>& frame, std::size_t m);

  std::size_t rank() const { return rank_; }
  std::size_t width() const { return width_; }
  std::size_t size() const { return rows_.size(); }
  const std::vector<PolyRow>& rows() const { return rows_; }
  const std::vector<std::size_t>& basis_rows() const { return basis_rows_; }
  const std::vector<std::size_t>& pivot_columns() const { return pivots_; }
  /// det of the chosen r x r block; nonzero polynomial.
  const Polynomial& pivot_minor() const { return minor_; }
  /// True when the chosen minor is a nonzero constant, so the rank never drops.
  bool certified_global() const { return minor_.is_constant(); }
  std::string certification() const;

  Membership test(const PolyRow& v) const;
  bool contains(const PolyRow& v) const { return test(v).member; }
  bool contains(const BigSection& s) const { return contains(flatten(s)); }
  std::size_t rank_at(const Vec& point) const;

 private:
  const std::vector<PolyRow>& cofactors() const;
  std::vector<PolyRow> rows_;
  std::size_t width_ = 0;
  std::size_t nvars_ = 0;
  std::size_t rank_ = 0;
  std::vector<std::size_t> basis_rows_;
  std::vector<std::size_t> pivots_;
  Polynomial minor_;
  std::vector<Vec> samples_;
  std::vector<std::size_t> others_;
  mutable std::vector<PolyRow> cofactors_;
  mutable std::vector<std::vector<Vec>> cofactor_values_;
  mutable bool cofactors_ready_ = false;
};

/// Polynomial frame of the annihilator of a full-rank frame, by Cramer's rule:
/// rows k x n in, n - k rows out, spanning the kernel wherever the pivot minor is nonzero.
std::vector<PolyRow> polynomial_kernel(const std::vector<PolyRow>& rows, std::size_t width, std::size_t nvars = 0);

struct BigIsotropicStructure {
  Chart chart;
  std::vector<BigSection> E;
  std::vector<BigSection> E_prime;
  std::size_t m() const { return chart.dim(); }
  std::size_t k() const { return E.size(); }
};

class DegeneratePointError : public std::runtime_error {
 public:
  DegeneratePointError(const std::string& what, Vec point)
      : std::runtime_error(what), point_(std::move(point)) {}
  const Vec& point() const { return point_; }

 private:
  Vec point_;
};

class MembershipError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

std::string point_str(const Vec& p);

std::vector<Vec> evaluate_frame(const std::vector<BigSection>& frame, const Vec& point);
/// Pointwise (E_x, E'_x); throws DegeneratePointError if a frame loses rank.
IsotropicData evaluate_at(const BigIsotropicStructure& s, const Vec& point);

struct PolyFailure {
  std::size_t i = 0;
  std::size_t j = 0;
  Polynomial value;
};

struct ValidationReport {
  bool frame_counts_ok = true;
  std::vector<PolyFailure> isotropy_failures;
  std::vector<PolyFailure> orthogonality_failures;
  std::size_t generic_rank_E = 0;
  std::size_t generic_rank_E_prime = 0;
  std::vector<std::size_t> E_not_in_E_prime;
  std::vector<Vec> degenerate_points;
  std::vector<Vec> orthogonal_mismatch_points;
  std::size_t points_checked = 0;
  std::string certification;
  bool ok() const;
};

ValidationReport validate(const BigIsotropicStructure& s, const Grid& grid);

struct BracketWitness {
  std::size_t i = 0;
  std::size_t j = 0;
  BigSection bracket;
  Polynomial minor;
  std::size_t column = 0;
};

struct IntegrabilityReport {
  bool passed = true;
  std::size_t pairs_checked = 0;
  std::vector<BracketWitness> failures;
  std::string certification;
};

/// [E_i, E_j] in span E for all frame pairs.
IntegrabilityReport check_integrability(const BigIsotropicStructure& s);
/// [E_i, E'_j] in span E' for all frame pairs.
IntegrabilityReport check_module_property(const BigIsotropicStructure& s);

BigIsotropicStructure graph_theta(const Chart& chart, const std::vector<VectorField>& S, const TwoForm& theta);
Verdict check_theta_condition(const std::vector<VectorField>& S, const TwoForm& theta);

BigIsotropicStructure graph_P(const Chart& chart, const std::vector<OneForm>& S_star, const Bivector& P);
Verdict check_P_conditions(const std::vector<OneForm>& S_star, const Bivector& P);

/// E = F + ann F', E' = F' + ann F; throws if F is not contained in F'.
BigIsotropicStructure foliation_pair(const Chart& chart, const std::vector<VectorField>& F,
                                     const std::vector<VectorField>& F_prime);

BigIsotropicStructure tangent_lift(const BigIsotropicStructure& s);

/// 2 g([a, b], c) for a, b in E and c in E'; throws MembershipError otherwise.
Polynomial d_tr_varpi(const BigIsotropicStructure& s, const BigSection& a, const BigSection& b,
                      const BigSection& c);

/// Coboundary formula for d_tr varpi(X1, X2, Y) with varpi read off the lifts a, b in E and c in E'.
Polynomial d_tr_varpi_formula(const BigSection& a, const BigSection& b, const BigSection& c);

bool is_hamiltonian(const BigIsotropicStructure& s, const Polynomial& f, const VectorField& Xf);
bool is_weak_hamiltonian(const BigIsotropicStructure& s, const Polynomial& f, const VectorField& Xf);
/// {f, h} = X_f h for (X_f, df) in E and (X_h, dh) in E'.
Polynomial poisson_bracket(const BigIsotropicStructure& s, const Polynomial& f, const VectorField& Xf,
                           const Polynomial& h, const VectorField& Xh);

/// Anchor, Leibniz-type and Jacobi-type axioms of E' over E with Courant brackets,
/// using `samples` random polynomial coefficient pairs.
Verdict verify_modular_enlargement(const BigIsotropicStructure& s, std::mt19937_64& rng, int samples = 2);
Verdict verify_coanchor(const BigIsotropicStructure& s);

struct AutomorphismCheck {
  bool preserves_E = false;        // (L_X Y, L_X beta) in E for the E frame
  bool d_alpha_condition = false;  // d alpha(Y, Z) = 0, Y in pr E, Z in pr E'
};
AutomorphismCheck infinitesimal_automorphism(const BigIsotropicStructure& s, const BigSection& section);

struct RegularCheck {
  bool regular = false;
  bool involutive = false;
  bool invariant = false;
  bool dtr_closed = false;
  bool criterion() const { return involutive && invariant && dtr_closed; }
};
/// Characteristic-distribution criterion for regular structures.
RegularCheck regular_criterion(const BigIsotropicStructure& s, const Grid& grid);

}  // namespace bigiso
