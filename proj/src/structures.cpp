#include "bigiso/structures.hpp"

#include <algorithm>
#include <sstream>

#include "bigiso/linalg.hpp"

namespace bigiso {

PolyRow flatten(const BigSection& s) {
  PolyRow r = s.X;
  r.insert(r.end(), s.a.begin(), s.a.end());
  return r;
}

BigSection unflatten(const PolyRow& row) {
  if (row.size() % 2 != 0) throw std::invalid_argument("unflatten: odd length");
  const auto h = static_cast<std::ptrdiff_t>(row.size() / 2);
  return {VectorField(row.begin(), row.begin() + h), OneForm(row.begin() + h, row.end())};
}

Vec evaluate_row(const PolyRow& row, const Vec& point) {
  Vec v;
  v.reserve(row.size());
  for (const auto& p : row) v.push_back(p.evaluate(point));
  return v;
}

std::vector<Vec> Grid::points(std::size_t m) const {
  const long side = hi - lo + 1;
  if (side <= 0) throw std::invalid_argument("empty grid range");
  std::vector<Vec> out;
  Vec origin(m, Rational(0));
  const bool has_origin = lo <= 0 && hi >= 0;
  if (has_origin) out.push_back(origin);
  // total = side^m, capped to avoid overflow
  std::size_t total = 1;
  bool huge = false;
  for (std::size_t i = 0; i < m; ++i) {
    if (total > (1ULL << 40) / static_cast<std::size_t>(side)) {
      huge = true;
      break;
    }
    total *= static_cast<std::size_t>(side);
  }
  if (huge) total = 1ULL << 40;
  const std::size_t want = cap > out.size() ? cap - out.size() : 0;
  const std::size_t stride = total <= cap ? 1 : (total + want - 1) / want;
  for (std::size_t idx = 0; idx < total && out.size() < cap; idx += stride) {
    Vec p(m);
    std::size_t rest = idx;
    for (std::size_t i = 0; i < m; ++i) {
      p[m - 1 - i] = Rational(lo + static_cast<long>(rest % static_cast<std::size_t>(side)));
      rest /= static_cast<std::size_t>(side);
    }
    if (has_origin && p == origin) continue;
    out.push_back(std::move(p));
  }
  return out;
}

std::string Grid::str() const {
  return std::to_string(lo) + ".." + std::to_string(hi) + ":" + std::to_string(cap);
}

void Verdict::fail(std::string why) {
  passed = false;
  failures.push_back(std::move(why));
}

void Verdict::merge(const Verdict& other, const std::string& prefix) {
  if (!other.passed) passed = false;
  for (const auto& f : other.failures) failures.push_back(prefix + f);
}

std::string point_str(const Vec& p) {
  std::string s = "(";
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? ", " : "") + p[i].str();
  return s + ")";
}

namespace {

std::size_t row_nvars(const std::vector<PolyRow>& rows) {
  std::size_t n = 0;
  for (const auto& r : rows)
    for (const auto& p : r) n = std::max(n, p.nvars());
  return n;
}

Matrix<Rational> evaluate_rows(const std::vector<PolyRow>& rows, std::size_t width, const Vec& pt) {
  Matrix<Rational> m(rows.size(), width);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < width; ++j) m(i, j) = rows[i][j].evaluate(pt);
  return m;
}

std::vector<Vec> sample_points(std::size_t nvars, std::uint64_t seed, std::size_t count) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> num(-29, 29), den(1, 7);
  std::vector<Vec> out;
  for (std::size_t c = 0; c < count; ++c) {
    Vec p(nvars);
    for (auto& x : p) x = Rational(num(rng), den(rng));
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace

FrameSpan::FrameSpan(std::vector<PolyRow> rows, std::size_t width, std::uint64_t seed)
    : rows_(std::move(rows)), width_(width) {
  for (const auto& r : rows_)
    if (r.size() != width_) throw std::invalid_argument("FrameSpan: row width mismatch");
  nvars_ = row_nvars(rows_);
  samples_ = sample_points(nvars_, seed, 4);
  if (rows_.empty()) {
    minor_ = Polynomial(1);
    for (std::size_t j = 0; j < width_; ++j) others_.push_back(j);
    return;
  }
  std::size_t best = 0;
  std::optional<Vec> best_pt;
  for (const auto& pt : samples_) {
    const auto r = rref(evaluate_rows(rows_, width_, pt)).rank;
    if (!best_pt || r > best) {
      best = r;
      best_pt = pt;
    }
  }
  const auto at = evaluate_rows(rows_, width_, *best_pt);
  const auto rr = rref(at);
  rank_ = rr.rank;
  pivots_ = rr.pivots;
  const auto rows_pick = rref(at.select_columns(pivots_).transpose());
  basis_rows_ = rows_pick.pivots;
  Matrix<Polynomial> block(rank_, rank_);
  for (std::size_t a = 0; a < rank_; ++a)
    for (std::size_t b = 0; b < rank_; ++b) block(a, b) = rows_[basis_rows_[a]][pivots_[b]];
  minor_ = determinant(block);
  for (std::size_t j = 0; j < width_; ++j)
    if (std::find(pivots_.begin(), pivots_.end(), j) == pivots_.end()) others_.push_back(j);
  // keep only sample points where the chosen minor is nonzero
  std::erase_if(samples_, [&](const Vec& p) { return minor_.evaluate(p).is_zero(); });
}

FrameSpan FrameSpan::of_sections(const std::vector<BigSection>& frame, std::size_t m) {
  std::vector<PolyRow> rows;
  for (const auto& s : frame) rows.push_back(flatten(s));
  return FrameSpan(std::move(rows), 2 * m);
}

std::string FrameSpan::certification() const {
  return certified_global() ? "certified globally" : "certified on sampled locus";
}

// Row j holds the coefficients of the bordered minor for column j as a linear form in v.
const std::vector<PolyRow>& FrameSpan::cofactors() const {
  if (cofactors_ready_) return cofactors_;
  const std::size_t r = rank_;
  Matrix<Polynomial> block(r, r);
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t b = 0; b < r; ++b) block(a, b) = rows_[basis_rows_[a]][pivots_[b]];
  for (std::size_t j : others_) {
    PolyRow w(width_, Polynomial(nvars_));
    w[j] = minor_.with_nvars(nvars_);
    for (std::size_t i = 0; i < r; ++i) {
      auto Bi = block;
      for (std::size_t a = 0; a < r; ++a) Bi(a, i) = rows_[basis_rows_[a]][j];
      w[pivots_[i]] = (-determinant(Bi)).with_nvars(nvars_);
    }
    cofactors_.push_back(std::move(w));
  }
  for (const auto& pt : samples_) {
    std::vector<Vec> vals;
    for (const auto& w : cofactors_) vals.push_back(evaluate_row(w, pt));
    cofactor_values_.push_back(std::move(vals));
  }
  cofactors_ready_ = true;
  return cofactors_;
}

FrameSpan::Membership FrameSpan::test(const PolyRow& v) const {
  if (v.size() != width_) throw std::invalid_argument("FrameSpan::test: width mismatch");
  Membership out;
  if (is_zero(v)) return out;
  const auto& cof = cofactors();
  auto witness = [&](std::size_t c) {
    Polynomial w(std::max(nvars_, row_nvars({v})));
    for (std::size_t j = 0; j < width_; ++j)
      if (!cof[c][j].is_zero() && !v[j].is_zero()) w += cof[c][j] * v[j];
    return w;
  };
  // fast rejection at sample points
  if (row_nvars({v}) <= nvars_) {
    for (std::size_t s = 0; s < samples_.size(); ++s) {
      const auto vv = evaluate_row(v, samples_[s]);
      for (std::size_t c = 0; c < cof.size(); ++c) {
        Rational acc(0);
        for (std::size_t j = 0; j < width_; ++j) acc += cofactor_values_[s][c][j] * vv[j];
        if (!acc.is_zero()) {
          out.member = false;
          out.column = others_[c];
          out.witness = witness(c);
          return out;
        }
      }
    }
  }
  for (std::size_t c = 0; c < cof.size(); ++c) {
    auto w = witness(c);
    if (!w.is_zero()) {
      out.member = false;
      out.column = others_[c];
      out.witness = std::move(w);
      return out;
    }
  }
  return out;
}

std::size_t FrameSpan::rank_at(const Vec& point) const {
  if (rows_.empty()) return 0;
  return rref(evaluate_rows(rows_, width_, point)).rank;
}

std::vector<PolyRow> polynomial_kernel(const std::vector<PolyRow>& rows, std::size_t width, std::size_t nvars) {
  const FrameSpan span(rows, width);
  if (span.rank() != rows.size()) throw std::invalid_argument("polynomial_kernel: frame is not of full rank");
  const std::size_t k = rows.size();
  const auto& P = span.pivot_columns();
  const std::size_t nv = std::max(row_nvars(rows), nvars);
  Matrix<Polynomial> FP(k, k);
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b) FP(a, b) = rows[a][P[b]];
  const Polynomial D = determinant(FP);
  std::vector<PolyRow> out;
  for (std::size_t j = 0; j < width; ++j) {
    if (std::find(P.begin(), P.end(), j) != P.end()) continue;
    PolyRow v(width, Polynomial(nv));
    v[j] = D.with_nvars(nv);
    for (std::size_t i = 0; i < k; ++i) {
      auto Fi = FP;
      for (std::size_t a = 0; a < k; ++a) Fi(a, i) = rows[a][j];
      v[P[i]] = (-determinant(Fi)).with_nvars(nv);
    }
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<Vec> evaluate_frame(const std::vector<BigSection>& frame, const Vec& point) {
  std::vector<Vec> out;
  for (const auto& s : frame) out.push_back(evaluate_row(flatten(s), point));
  return out;
}

IsotropicData evaluate_at(const BigIsotropicStructure& s, const Vec& point) {
  if (point.size() != s.m()) throw std::invalid_argument("evaluate_at: point has wrong dimension");
  const auto e = Subspace::span(2 * s.m(), evaluate_frame(s.E, point));
  const auto ep = Subspace::span(2 * s.m(), evaluate_frame(s.E_prime, point));
  if (e.dim() != s.k() || ep.dim() != 2 * s.m() - s.k())
    throw DegeneratePointError("frame rank drops at " + point_str(point), point);
  IsotropicData d;
  d.m = s.m();
  d.E = e;
  d.E_prime = ep;
  return d;
}

bool ValidationReport::ok() const {
  return frame_counts_ok && isotropy_failures.empty() && orthogonality_failures.empty() &&
         E_not_in_E_prime.empty() && degenerate_points.empty() && orthogonal_mismatch_points.empty();
}

ValidationReport validate(const BigIsotropicStructure& s, const Grid& grid) {
  ValidationReport r;
  const std::size_t m = s.m();
  for (const auto& sec : s.E)
    if (sec.dim() != m) throw std::invalid_argument("E frame section has wrong dimension");
  for (const auto& sec : s.E_prime)
    if (sec.dim() != m) throw std::invalid_argument("E' frame section has wrong dimension");
  r.frame_counts_ok = s.E.size() <= m && s.E.size() + s.E_prime.size() == 2 * m;
  for (std::size_t i = 0; i < s.E.size(); ++i)
    for (std::size_t j = i; j < s.E.size(); ++j) {
      auto v = g_poly(s.E[i], s.E[j]);
      if (!v.is_zero()) r.isotropy_failures.push_back({i, j, v});
    }
  for (std::size_t i = 0; i < s.E.size(); ++i)
    for (std::size_t j = 0; j < s.E_prime.size(); ++j) {
      auto v = g_poly(s.E[i], s.E_prime[j]);
      if (!v.is_zero()) r.orthogonality_failures.push_back({i, j, v});
    }
  const auto fe = FrameSpan::of_sections(s.E, m);
  const auto fep = FrameSpan::of_sections(s.E_prime, m);
  r.generic_rank_E = fe.rank();
  r.generic_rank_E_prime = fep.rank();
  if (fe.rank() != s.E.size() || fep.rank() != s.E_prime.size()) r.frame_counts_ok = false;
  for (std::size_t i = 0; i < s.E.size(); ++i)
    if (!fep.contains(s.E[i])) r.E_not_in_E_prime.push_back(i);
  for (const auto& pt : grid.points(m)) {
    ++r.points_checked;
    const auto e = Subspace::span(2 * m, evaluate_frame(s.E, pt));
    const auto ep = Subspace::span(2 * m, evaluate_frame(s.E_prime, pt));
    if (e.dim() != s.E.size() || ep.dim() != s.E_prime.size()) {
      r.degenerate_points.push_back(pt);
      continue;
    }
    if (r.frame_counts_ok && orthogonal_g(e) != ep) r.orthogonal_mismatch_points.push_back(pt);
  }
  const bool global = fe.certified_global() && fep.certified_global();
  r.certification = global ? "certified globally" : "certified on sampled locus";
  return r;
}

namespace {

IntegrabilityReport closure(const std::vector<BigSection>& left, const std::vector<BigSection>& right,
                            const FrameSpan& target, bool triangular) {
  IntegrabilityReport r;
  r.certification = target.certification();
  for (std::size_t i = 0; i < left.size(); ++i)
    for (std::size_t j = triangular ? i + 1 : 0; j < right.size(); ++j) {
      ++r.pairs_checked;
      auto br = courant_bracket(left[i], right[j]);
      auto t = target.test(flatten(br));
      if (!t.member) {
        r.passed = false;
        r.failures.push_back({i, j, br, t.witness, t.column});
      }
    }
  return r;
}

std::vector<PolyRow> as_rows(const std::vector<std::vector<Polynomial>>& v) { return v; }

void require_full_rank(const std::vector<PolyRow>& rows, std::size_t width, const char* what) {
  if (rows.empty()) return;
  if (FrameSpan(rows, width).rank() != rows.size())
    throw std::invalid_argument(std::string(what) + ": frame is degenerate");
}

}  // namespace

IntegrabilityReport check_integrability(const BigIsotropicStructure& s) {
  return closure(s.E, s.E, FrameSpan::of_sections(s.E, s.m()), true);
}

IntegrabilityReport check_module_property(const BigIsotropicStructure& s) {
  return closure(s.E, s.E_prime, FrameSpan::of_sections(s.E_prime, s.m()), false);
}

BigIsotropicStructure graph_theta(const Chart& chart, const std::vector<VectorField>& S, const TwoForm& theta) {
  const std::size_t m = chart.dim();
  if (theta.dim() != m) throw std::invalid_argument("graph_theta: form dimension mismatch");
  require_full_rank(as_rows(S), m, "graph_theta");
  BigIsotropicStructure s;
  s.chart = chart;
  for (const auto& X : S) s.E.push_back({X, interior(X, theta)});
  for (std::size_t i = 0; i < m; ++i) {
    const auto Y = coordinate_field(m, i);
    s.E_prime.push_back({Y, interior(Y, theta)});
  }
  const auto ann = S.empty() ? std::vector<PolyRow>{} : polynomial_kernel(as_rows(S), m, m);
  if (S.empty())
    for (std::size_t i = 0; i < m; ++i) s.E_prime.push_back({zero_field(m), coordinate_form(m, i)});
  for (const auto& g : ann) s.E_prime.push_back({zero_field(m), g});
  return s;
}

Verdict check_theta_condition(const std::vector<VectorField>& S, const TwoForm& theta) {
  Verdict v;
  if (S.empty()) return v;
  const std::size_t m = S.front().size();
  const FrameSpan span(as_rows(S), m);
  const auto dth = d(theta);
  for (std::size_t i = 0; i < S.size(); ++i)
    for (std::size_t j = i + 1; j < S.size(); ++j) {
      if (!span.contains(lie_bracket(S[i], S[j])))
        v.fail("S not involutive: [S" + std::to_string(i + 1) + ", S" + std::to_string(j + 1) + "] not in S");
      for (std::size_t l = 0; l < m; ++l) {
        auto val = eval3(dth, S[i], S[j], coordinate_field(m, l));
        if (!val.is_zero())
          v.fail("dtheta(S" + std::to_string(i + 1) + ", S" + std::to_string(j + 1) + ", d/dx" +
                 std::to_string(l + 1) + ") = " + val.str());
      }
    }
  return v;
}

BigIsotropicStructure graph_P(const Chart& chart, const std::vector<OneForm>& S_star, const Bivector& P) {
  const std::size_t m = chart.dim();
  if (P.dim() != m) throw std::invalid_argument("graph_P: bivector dimension mismatch");
  require_full_rank(as_rows(S_star), m, "graph_P");
  BigIsotropicStructure s;
  s.chart = chart;
  for (const auto& sg : S_star) s.E.push_back({sharp(P, sg), sg});
  for (std::size_t i = 0; i < m; ++i) {
    const auto b = coordinate_form(m, i);
    s.E_prime.push_back({sharp(P, b), b});
  }
  if (S_star.empty())
    for (std::size_t i = 0; i < m; ++i) s.E_prime.push_back({coordinate_field(m, i), zero_form(m)});
  else
    for (const auto& Y : polynomial_kernel(as_rows(S_star), m, m)) s.E_prime.push_back({Y, zero_form(m)});
  return s;
}

Verdict check_P_conditions(const std::vector<OneForm>& S_star, const Bivector& P) {
  Verdict v;
  if (S_star.empty()) return v;
  const std::size_t m = P.dim();
  const FrameSpan span(as_rows(S_star), m);
  const auto T = schouten_PP(P);
  for (std::size_t i = 0; i < S_star.size(); ++i)
    for (std::size_t j = i + 1; j < S_star.size(); ++j) {
      if (!span.contains(p_bracket(P, S_star[i], S_star[j])))
        v.fail("S* not closed: {s" + std::to_string(i + 1) + ", s" + std::to_string(j + 1) + "}_P not in S*");
      const auto c = trivector_contract(T, S_star[i], S_star[j]);
      for (std::size_t l = 0; l < m; ++l)
        if (!c[l].is_zero())
          v.fail("[P,P](s" + std::to_string(i + 1) + ", s" + std::to_string(j + 1) + ", dx" + std::to_string(l + 1) +
                 ") = " + c[l].str());
    }
  return v;
}

BigIsotropicStructure foliation_pair(const Chart& chart, const std::vector<VectorField>& F,
                                     const std::vector<VectorField>& F_prime) {
  const std::size_t m = chart.dim();
  require_full_rank(as_rows(F), m, "foliation_pair F");
  require_full_rank(as_rows(F_prime), m, "foliation_pair F'");
  if (!F.empty()) {
    if (F_prime.empty()) throw std::invalid_argument("foliation_pair: F is not contained in F'");
    const FrameSpan fp(as_rows(F_prime), m);
    for (const auto& X : F)
      if (!fp.contains(X)) throw std::invalid_argument("foliation_pair: F is not contained in F'");
  }
  auto ann = [&](const std::vector<VectorField>& fr) {
    std::vector<PolyRow> out;
    if (fr.empty()) {
      for (std::size_t i = 0; i < m; ++i) out.push_back(coordinate_form(m, i));
      return out;
    }
    return polynomial_kernel(as_rows(fr), m, m);
  };
  BigIsotropicStructure s;
  s.chart = chart;
  for (const auto& X : F) s.E.push_back({X, zero_form(m)});
  for (const auto& g : ann(F_prime)) s.E.push_back({zero_field(m), g});
  for (const auto& X : F_prime) s.E_prime.push_back({X, zero_form(m)});
  for (const auto& g : ann(F)) s.E_prime.push_back({zero_field(m), g});
  return s;
}

BigIsotropicStructure tangent_lift(const BigIsotropicStructure& s) {
  BigIsotropicStructure t;
  t.chart = lift_chart(s.chart);
  auto lift = [](const std::vector<BigSection>& frame) {
    std::vector<BigSection> out;
    for (const auto& x : frame) out.push_back({complete_lift(x.X), complete_lift_form(x.a)});
    for (const auto& x : frame) out.push_back({vertical_lift(x.X), vertical_lift_form(x.a)});
    return out;
  };
  t.E = lift(s.E);
  t.E_prime = lift(s.E_prime);
  return t;
}

Polynomial d_tr_varpi(const BigIsotropicStructure& s, const BigSection& a, const BigSection& b,
                      const BigSection& c) {
  const auto fe = FrameSpan::of_sections(s.E, s.m());
  if (!fe.contains(a) || !fe.contains(b)) throw MembershipError("d_tr varpi: first two arguments must lie in E");
  if (!FrameSpan::of_sections(s.E_prime, s.m()).contains(c))
    throw MembershipError("d_tr varpi: third argument must lie in E'");
  return Rational(2) * g_poly(courant_bracket(a, b), c);
}

bool is_hamiltonian(const BigIsotropicStructure& s, const Polynomial& f, const VectorField& Xf) {
  return FrameSpan::of_sections(s.E, s.m()).contains(BigSection{Xf, d(f, s.m())});
}

bool is_weak_hamiltonian(const BigIsotropicStructure& s, const Polynomial& f, const VectorField& Xf) {
  return FrameSpan::of_sections(s.E_prime, s.m()).contains(BigSection{Xf, d(f, s.m())});
}

Polynomial poisson_bracket(const BigIsotropicStructure& s, const Polynomial& f, const VectorField& Xf,
                           const Polynomial& h, const VectorField& Xh) {
  if (!is_hamiltonian(s, f, Xf)) throw MembershipError("poisson_bracket: (X_f, df) is not in E");
  if (!is_weak_hamiltonian(s, h, Xh)) throw MembershipError("poisson_bracket: (X_h, dh) is not in E'");
  return act(Xf, h);
}

Verdict verify_modular_enlargement(const BigIsotropicStructure& s, std::mt19937_64& rng, int samples) {
  Verdict v;
  const std::size_t m = s.m();
  for (std::size_t i = 0; i < s.E.size(); ++i)
    for (std::size_t j = 0; j < s.E_prime.size(); ++j) {
      const auto& a = s.E[i];
      const auto& b = s.E_prime[j];
      const std::string tag = "(E" + std::to_string(i + 1) + ", E'" + std::to_string(j + 1) + ")";
      const auto br = courant_bracket(a, b);
      if (br.X != lie_bracket(a.X, b.X)) v.fail("axiom 1 fails on " + tag);
      for (int t = 0; t < samples; ++t) {
        const auto f = random_polynomial(rng, m, 1), h = random_polynomial(rng, m, 1);
        auto lhs = courant_bracket(scale(f, a), scale(h, b));
        auto rhs = add(scale(f * h, br), scale(f * act(a.X, h), b));
        rhs = sub(rhs, scale(h * act(b.X, f), a));
        if (!sub(lhs, rhs).is_zero()) {
          v.fail("axiom 2 fails on " + tag);
          break;
        }
      }
    }
  for (std::size_t i = 0; i < s.E.size(); ++i)
    for (std::size_t l = 0; l < s.E.size(); ++l)
      for (std::size_t j = 0; j < s.E_prime.size(); ++j) {
        const auto& a1 = s.E[i];
        const auto& a2 = s.E[l];
        const auto& b = s.E_prime[j];
        auto lhs = courant_bracket(a1, courant_bracket(a2, b));
        auto rhs = add(courant_bracket(courant_bracket(a1, a2), b), courant_bracket(a2, courant_bracket(a1, b)));
        if (!sub(lhs, rhs).is_zero())
          v.fail("axiom 3 fails on (E" + std::to_string(i + 1) + ", E" + std::to_string(l + 1) + ", E'" +
                 std::to_string(j + 1) + ")");
      }
  return v;
}

Verdict verify_coanchor(const BigIsotropicStructure& s) {
  Verdict v;
  for (std::size_t i = 0; i < s.E.size(); ++i)
    for (std::size_t j = 0; j < s.E_prime.size(); ++j) {
      const auto& a = s.E[i];
      const auto& b = s.E_prime[j];
      const std::string tag = "(E" + std::to_string(i + 1) + ", E'" + std::to_string(j + 1) + ")";
      if (!(pair(a.a, b.X) + pair(b.a, a.X)).is_zero()) v.fail("condition i) fails on " + tag);
      auto expect = sub(lie_derivative_form(a.X, b.a), lie_derivative_form(b.X, a.a));
      expect = add(expect, d(pair(a.a, b.X), s.m()));
      if (courant_bracket(a, b).a != expect) v.fail("condition ii) fails on " + tag);
    }
  return v;
}

AutomorphismCheck infinitesimal_automorphism(const BigIsotropicStructure& s, const BigSection& section) {
  AutomorphismCheck c;
  const auto fe = FrameSpan::of_sections(s.E, s.m());
  if (!fe.contains(section)) throw MembershipError("infinitesimal_automorphism: section is not in E");
  c.preserves_E = true;
  for (const auto& e : s.E) {
    BigSection l{lie_bracket(section.X, e.X), lie_derivative_form(section.X, e.a)};
    if (!fe.contains(l)) {
      c.preserves_E = false;
      break;
    }
  }
  c.d_alpha_condition = true;
  const auto da = d(section.a);
  for (const auto& y : s.E)
    for (const auto& z : s.E_prime)
      if (!eval2(da, y.X, z.X).is_zero()) c.d_alpha_condition = false;
  return c;
}

RegularCheck regular_criterion(const BigIsotropicStructure& s, const Grid& grid) {
  RegularCheck c;
  const std::size_t m = s.m();
  std::vector<PolyRow> ex, epx;
  for (const auto& e : s.E) ex.push_back(e.X);
  for (const auto& e : s.E_prime) epx.push_back(e.X);
  const FrameSpan cal_e(ex, m), cal_ep(epx, m);
  c.regular = true;
  for (const auto& pt : grid.points(m)) {
    if (cal_e.rank_at(pt) != cal_e.rank() || cal_ep.rank_at(pt) != cal_ep.rank()) {
      c.regular = false;
      break;
    }
  }
  c.involutive = true;
  for (std::size_t i = 0; i < ex.size(); ++i)
    for (std::size_t j = i + 1; j < ex.size(); ++j)
      if (!cal_e.contains(lie_bracket(ex[i], ex[j]))) c.involutive = false;
  c.invariant = true;
  for (const auto& X : ex)
    for (const auto& Y : epx)
      if (!cal_ep.contains(lie_bracket(X, Y))) c.invariant = false;
  c.dtr_closed = true;
  for (std::size_t i = 0; i < s.E.size(); ++i)
    for (std::size_t j = i + 1; j < s.E.size(); ++j)
      for (const auto& e : s.E_prime)
        if (!d_tr_varpi_formula(s.E[i], s.E[j], e).is_zero()) c.dtr_closed = false;
  return c;
}

Polynomial d_tr_varpi_formula(const BigSection& a, const BigSection& b, const BigSection& c) {
  const auto& X1 = a.X;
  const auto& X2 = b.X;
  const auto& Y = c.X;
  return act(X1, pair(b.a, Y)) - act(X2, pair(a.a, Y)) + act(Y, pair(a.a, X2)) + pair(c.a, lie_bracket(X1, X2)) -
         pair(b.a, lie_bracket(X1, Y)) + pair(a.a, lie_bracket(X2, Y));
}

}  // namespace bigiso
