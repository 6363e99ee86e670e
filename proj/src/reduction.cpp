#include "bigiso/reduction.hpp"

#include <algorithm>

#include "bigiso/linalg.hpp"

namespace bigiso {

namespace {

std::vector<PolyRow> as_rows(const std::vector<BigSection>& frame) {
  std::vector<PolyRow> rows;
  for (const auto& s : frame) rows.push_back(flatten(s));
  return rows;
}

std::vector<BigSection> as_sections(const std::vector<PolyRow>& rows) {
  std::vector<BigSection> out;
  for (const auto& r : rows) out.push_back(unflatten(r));
  return out;
}

// Indices of a maximal independent subset, scanning in order.
std::vector<std::size_t> greedy_basis(const std::vector<PolyRow>& rows, std::size_t width) {
  std::vector<PolyRow> sel;
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    sel.push_back(rows[i]);
    if (FrameSpan(sel, width).rank() == sel.size())
      idx.push_back(i);
    else
      sel.pop_back();
  }
  return idx;
}

std::vector<PolyRow> pick(const std::vector<PolyRow>& rows, const std::vector<std::size_t>& idx) {
  std::vector<PolyRow> out;
  for (std::size_t i : idx) out.push_back(rows[i]);
  return out;
}

Polynomial move_to(const Polynomial& p, std::size_t from, const std::vector<Polynomial>& images, std::size_t to) {
  return p.with_nvars(from).compose(images).with_nvars(to);
}

Subspace frame_span_at(const std::vector<BigSection>& frame, std::size_t m, const Vec& pt) {
  return Subspace::span(2 * m, evaluate_frame(frame, pt));
}

// Frame of iota^* of the span of `frame`: sections of E|_N with tangent part in TN, read on N.
std::vector<BigSection> pullback_frame(const std::vector<BigSection>& frame, const SubmanifoldData& N) {
  const std::size_t m = N.m(), n = N.n(), k = frame.size();
  const auto images = N.images();
  std::vector<BigSection> on_n;
  for (const auto& s : frame) {
    BigSection t{zero_field(m), zero_form(m)};
    for (std::size_t i = 0; i < m; ++i) {
      t.X[i] = move_to(s.X[i], m, images, n);
      t.a[i] = move_to(s.a[i], m, images, n);
    }
    on_n.push_back(std::move(t));
  }

  std::vector<PolyRow> cond;
  for (const auto& nu : annihilator(Subspace::image(N.map.matrix)).vectors()) {
    PolyRow row(k, Polynomial(n));
    bool nonzero = false;
    for (std::size_t j = 0; j < k; ++j) {
      for (std::size_t i = 0; i < m; ++i)
        if (!nu[i].is_zero()) row[j] += on_n[j].X[i] * nu[i];
      nonzero = nonzero || !row[j].is_zero();
    }
    if (nonzero) cond.push_back(std::move(row));
  }
  std::vector<PolyRow> coeffs;
  if (cond.empty()) {
    for (std::size_t j = 0; j < k; ++j) {
      PolyRow e(k, Polynomial(n));
      e[j] = Polynomial(n, Rational(1));
      coeffs.push_back(std::move(e));
    }
  } else {
    const auto basis = pick(cond, greedy_basis(cond, k));
    if (basis.size() < k) coeffs = polynomial_kernel(basis, k, n);
  }

  // Left inverse of L on a set of pivot rows.
  const auto& L = N.map.matrix;
  std::vector<std::size_t> R;
  for (std::size_t i = 0; i < m && R.size() < n; ++i) {
    Matrix<Rational> sub(R.size() + 1, n);
    for (std::size_t a = 0; a < R.size(); ++a)
      for (std::size_t c = 0; c < n; ++c) sub(a, c) = L(R[a], c);
    for (std::size_t c = 0; c < n; ++c) sub(R.size(), c) = L(i, c);
    if (rank_of(sub) == R.size() + 1) R.push_back(i);
  }
  Matrix<Rational> LR(n, n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t c = 0; c < n; ++c) LR(a, c) = L(R[a], c);
  const auto Linv = inverse(LR);
  if (!Linv) throw std::logic_error("pullback_frame: embedding is not injective");

  std::vector<PolyRow> rows;
  for (const auto& f : coeffs) {
    VectorField X(m, Polynomial(n));
    OneForm a(m, Polynomial(n));
    for (std::size_t j = 0; j < k; ++j) {
      if (f[j].is_zero()) continue;
      for (std::size_t i = 0; i < m; ++i) {
        X[i] += f[j] * on_n[j].X[i];
        a[i] += f[j] * on_n[j].a[i];
      }
    }
    BigSection t{VectorField(n, Polynomial(n)), OneForm(n, Polynomial(n))};
    for (std::size_t c = 0; c < n; ++c) {
      for (std::size_t r = 0; r < n; ++r)
        if (!(*Linv)(c, r).is_zero()) t.X[c] += X[R[r]] * (*Linv)(c, r);
      for (std::size_t i = 0; i < m; ++i)
        if (!L(i, c).is_zero()) t.a[c] += a[i] * L(i, c);
    }
    if (!t.is_zero()) rows.push_back(flatten(t));
  }
  return as_sections(pick(rows, greedy_basis(rows, 2 * n)));
}

std::string leaf_name(const FoliationData& F, std::size_t a) { return F.chart.names[a]; }

}  // namespace

Vec SubmanifoldData::point(const Vec& y) const {
  auto x = map.push(y);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] += offset[i];
  return x;
}

std::vector<Polynomial> SubmanifoldData::images() const {
  std::vector<Polynomial> out;
  for (std::size_t i = 0; i < m(); ++i) {
    Polynomial p(n(), offset[i]);
    for (std::size_t j = 0; j < n(); ++j)
      if (!map.matrix(i, j).is_zero()) p += Polynomial::variable(n(), j) * map.matrix(i, j);
    out.push_back(std::move(p));
  }
  return out;
}

void SubmanifoldData::check() const {
  if (offset.size() != m() || map.m != m() || map.n != n())
    throw std::invalid_argument("submanifold: dimensions of chart, offset and map disagree");
  if (!map.injective()) throw std::invalid_argument("submanifold: differential of the embedding is not injective");
}

SubmanifoldData SubmanifoldData::identity(const Chart& ambient) {
  const std::size_t m = ambient.dim();
  return {ambient, ambient, Vec(m, Rational(0)), LinearMap::from_matrix(Matrix<Rational>::identity(m))};
}

SubmanifoldData SubmanifoldData::slice(const Chart& ambient,
                                       const std::vector<std::pair<std::string, Rational>>& fixed) {
  const std::size_t m = ambient.dim();
  Vec offset(m, Rational(0));
  std::vector<bool> is_fixed(m, false);
  for (const auto& [name, c] : fixed) {
    auto i = ambient.index_of(name);
    if (!i) throw std::invalid_argument("submanifold: unknown coordinate " + name);
    is_fixed[*i] = true;
    offset[*i] = c;
  }
  std::vector<std::string> names;
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < m; ++i)
    if (!is_fixed[i]) {
      names.push_back(ambient.names[i]);
      kept.push_back(i);
    }
  Matrix<Rational> L(m, kept.size());
  for (std::size_t j = 0; j < kept.size(); ++j) L(kept[j], j) = Rational(1);
  return {ambient, Chart(names), offset, LinearMap::from_matrix(std::move(L))};
}

Chart FoliationData::quotient_chart() const {
  std::vector<std::string> names;
  for (std::size_t u : base) names.push_back(chart.names[u]);
  return Chart(names);
}

LinearMap FoliationData::projection() const {
  Matrix<Rational> a(q(), chart.dim());
  for (std::size_t j = 0; j < q(); ++j) a(j, base[j]) = Rational(1);
  return LinearMap::from_matrix(std::move(a));
}

Vec FoliationData::project(const Vec& y) const {
  Vec out;
  for (std::size_t u : base) out.push_back(y[u]);
  return out;
}

Polynomial FoliationData::pull(const Polynomial& f) const {
  return f.with_nvars(q()).embed(chart.dim(), base);
}

std::optional<Polynomial> FoliationData::push(const Polynomial& f) const {
  const std::size_t n = chart.dim();
  const auto g = f.with_nvars(n);
  for (std::size_t a : leaf)
    if (!g.derivative(a).is_zero()) return std::nullopt;
  std::vector<Polynomial> images(n, Polynomial(q()));
  for (std::size_t j = 0; j < q(); ++j) images[base[j]] = Polynomial::variable(q(), j);
  return g.compose(images).with_nvars(q());
}

Subspace FoliationData::tangent_space() const {
  const std::size_t n = chart.dim();
  std::vector<Vec> vs;
  for (std::size_t a : leaf) {
    Vec v(2 * n, Rational(0));
    v[a] = Rational(1);
    vs.push_back(std::move(v));
  }
  return Subspace::span(2 * n, vs);
}

FoliationData FoliationData::from_leaf_names(const Chart& chart, const std::vector<std::string>& leaf) {
  FoliationData F;
  F.chart = chart;
  std::vector<bool> is_leaf(chart.dim(), false);
  for (const auto& name : leaf) {
    auto i = chart.index_of(name);
    if (!i) throw std::invalid_argument("foliation: unknown coordinate " + name);
    if (is_leaf[*i]) throw std::invalid_argument("foliation: repeated coordinate " + name);
    is_leaf[*i] = true;
  }
  for (std::size_t i = 0; i < chart.dim(); ++i) (is_leaf[i] ? F.leaf : F.base).push_back(i);
  return F;
}

FoliationData FoliationData::trivial(const Chart& chart) { return from_leaf_names(chart, {}); }

IsotropicData pullback_at(const BigIsotropicStructure& s, const SubmanifoldData& N, const Vec& y) {
  const auto d = evaluate_at(s, N.point(y));
  IsotropicData out;
  out.m = N.n();
  out.E = pullback_subspace(N.map, d.E);
  out.E_prime = pullback_subspace(N.map, d.E_prime);
  return out;
}

RestrictionResult restrict_to(const BigIsotropicStructure& s, const SubmanifoldData& N, const Grid& grid,
                              const std::optional<BigIsotropicStructure>& supplied) {
  N.check();
  if (s.m() != N.m()) throw std::invalid_argument("restrict_to: structure and submanifold live on different charts");
  RestrictionResult r;
  std::vector<std::pair<Vec, IsotropicData>> pulled;
  std::optional<Vec> first;
  for (const auto& y : grid.points(N.n())) {
    IsotropicData d;
    try {
      d = evaluate_at(s, N.point(y));
    } catch (const DegeneratePointError&) {
      ++r.points_skipped;
      continue;
    }
    const auto dS = S_space(N.map, d.E).dim();
    const auto dSp = S_space(N.map, d.E_prime).dim();
    if (!first) {
      first = y;
      r.dim_S = dS;
      r.dim_S_prime = dSp;
    } else if (dS != r.dim_S || dSp != r.dim_S_prime) {
      throw ProperError("submanifold is not proper: (dim S, dim S') = (" + std::to_string(r.dim_S) + ", " +
                            std::to_string(r.dim_S_prime) + ") at " + point_str(*first) + " but (" +
                            std::to_string(dS) + ", " + std::to_string(dSp) + ") at " + point_str(y),
                        *first, y);
    }
    IsotropicData p;
    p.m = N.n();
    p.E = pullback_subspace(N.map, d.E);
    p.E_prime = pullback_subspace(N.map, d.E_prime);
    pulled.emplace_back(y, std::move(p));
  }
  if (!first) throw ReductionError("restrict_to: every sample point of N is degenerate");

  if (supplied) {
    if (supplied->m() != N.n()) throw std::invalid_argument("restrict_to: supplied frame has the wrong dimension");
    r.structure = *supplied;
    r.supplied = true;
  } else {
    r.structure.chart = N.chart;
    r.structure.E = pullback_frame(s.E, N);
    r.structure.E_prime = pullback_frame(s.E_prime, N);
  }
  for (const auto& [y, p] : pulled) {
    ++r.points_checked;
    const auto e = frame_span_at(r.structure.E, N.n(), y);
    const auto ep = frame_span_at(r.structure.E_prime, N.n(), y);
    if (e.dim() != r.structure.E.size() || ep.dim() != r.structure.E_prime.size() || !(e == p.E) ||
        !(ep == p.E_prime)) {
      r.frame_matches = false;
      r.mismatch_points.push_back(y);
    }
  }
  return r;
}

ReducibilityReport check_reducibility(const BigIsotropicStructure& s, const SubmanifoldData& N,
                                      const FoliationData& F, const Grid& grid) {
  N.check();
  if (F.chart.dim() != N.n()) throw std::invalid_argument("check_reducibility: foliation is not on N");
  const std::size_t m = N.m();
  const auto& L = N.map.matrix;
  std::vector<Vec> w;
  for (std::size_t a : F.leaf) {
    Vec v(2 * m, Rational(0));
    for (std::size_t i = 0; i < m; ++i) v[i] = L(i, a);
    w.push_back(std::move(v));
  }
  for (const auto& nu : annihilator(Subspace::image(L)).vectors()) {
    Vec v(2 * m, Rational(0));
    for (std::size_t i = 0; i < m; ++i) v[m + i] = nu[i];
    w.push_back(std::move(v));
  }
  const auto W = Subspace::span(2 * m, w);
  const auto TF = F.tangent_space();

  ReducibilityReport r;
  for (const auto& y : grid.points(N.n())) {
    IsotropicData d;
    try {
      d = evaluate_at(s, N.point(y));
    } catch (const DegeneratePointError&) {
      continue;
    }
    ++r.points_checked;
    const bool surjective = tangent_part(subspace_intersection(d.E, W)).dim() == F.p();
    const bool contained = pullback_subspace(N.map, d.E).contains(TF);
    if (surjective != contained) r.formulations_agree = false;
    if (!contained) r.verdict.fail("T F is not contained in iota^*E at " + point_str(y));
  }
  return r;
}

ProjectabilityReport check_projectable(const BigIsotropicStructure& s, const FoliationData& F) {
  if (F.chart.dim() != s.m()) throw std::invalid_argument("check_projectable: foliation is on another chart");
  const std::size_t n = s.m();
  const auto span = FrameSpan::of_sections(s.E, n);
  ProjectabilityReport r;
  for (std::size_t a : F.leaf) {
    if (!span.contains(BigSection{coordinate_field(n, a), zero_form(n)})) {
      r.contains_leaves = false;
      r.verdict.fail("(d/d" + leaf_name(F, a) + ", 0) is not in E");
    }
  }
  for (std::size_t a : F.leaf) {
    for (std::size_t i = 0; i < s.E.size(); ++i) {
      BigSection t{zero_field(n), zero_form(n)};
      for (std::size_t c = 0; c < n; ++c) {
        t.X[c] = s.E[i].X[c].with_nvars(n).derivative(a);
        t.a[c] = s.E[i].a[c].with_nvars(n).derivative(a);
      }
      if (!span.contains(t)) {
        r.automorphisms = false;
        r.verdict.fail("L_{d/d" + leaf_name(F, a) + "} of E[" + std::to_string(i) + "] is not in E");
      }
    }
  }
  r.verdict.passed = r.passed();
  return r;
}

bool is_projectable_section(const BigSection& sec, const FoliationData& F) {
  const std::size_t n = F.chart.dim();
  if (sec.dim() != n) return false;
  for (std::size_t a : F.leaf)
    if (!sec.a[a].is_zero()) return false;
  for (std::size_t u : F.base)
    if (!F.push(sec.X[u]) || !F.push(sec.a[u])) return false;
  return true;
}

BigSection push_section(const BigSection& sec, const FoliationData& F) {
  if (!is_projectable_section(sec, F)) throw std::invalid_argument("push_section: section is not projectable");
  BigSection out{zero_field(F.q()), zero_form(F.q())};
  for (std::size_t j = 0; j < F.q(); ++j) {
    out.X[j] = *F.push(sec.X[F.base[j]]);
    out.a[j] = *F.push(sec.a[F.base[j]]);
  }
  return out;
}

BigSection lift_section(const BigSection& sec, const FoliationData& F, const std::vector<Polynomial>& leaf_part) {
  const std::size_t n = F.chart.dim();
  if (sec.dim() != F.q()) throw std::invalid_argument("lift_section: section is not on the quotient");
  if (!leaf_part.empty() && leaf_part.size() != F.p()) throw std::invalid_argument("lift_section: leaf part size");
  BigSection out{zero_field(n), zero_form(n)};
  for (std::size_t j = 0; j < F.q(); ++j) {
    out.X[F.base[j]] = F.pull(sec.X[j]);
    out.a[F.base[j]] = F.pull(sec.a[j]);
  }
  for (std::size_t i = 0; i < leaf_part.size(); ++i) out.X[F.leaf[i]] = leaf_part[i].with_nvars(n);
  return out;
}

std::optional<std::vector<BigSection>> projectable_frame(const std::vector<BigSection>& frame, const FoliationData& F) {
  const std::size_t n = F.chart.dim();
  const FrameSpan orig(as_rows(frame), 2 * n);
  std::vector<PolyRow> cand;
  for (std::size_t a : F.leaf) cand.push_back(flatten(BigSection{coordinate_field(n, a), zero_form(n)}));
  auto on_slice = [&](Polynomial p) {
    p = p.with_nvars(n);
    for (std::size_t a : F.leaf) p = p.substitute(a, Rational(0));
    return p;
  };
  for (const auto& s : frame) {
    BigSection t{zero_field(n), zero_form(n)};
    for (std::size_t c = 0; c < n; ++c) {
      t.X[c] = on_slice(s.X[c]);
      t.a[c] = on_slice(s.a[c]);
    }
    for (std::size_t a : F.leaf) {
      if (!t.a[a].is_zero()) return std::nullopt;
      t.X[a] = Polynomial(n);
    }
    if (!t.is_zero()) cand.push_back(flatten(t));
  }
  const auto idx = greedy_basis(cand, 2 * n);
  if (idx.size() != orig.rank()) return std::nullopt;
  auto chosen = pick(cand, idx);
  for (const auto& row : chosen)
    if (!orig.contains(row)) return std::nullopt;
  return as_sections(chosen);
}

ReductionResult reduce(const BigIsotropicStructure& s, const SubmanifoldData& N, const FoliationData& F,
                       const Grid& grid, const ReduceOptions& opt) {
  if (F.chart.dim() != N.n()) throw std::invalid_argument("reduce: foliation is not on N");
  ReductionResult res;
  res.restriction = restrict_to(s, N, grid, opt.restricted);
  res.reducibility = check_reducibility(s, N, F, grid);
  if (!res.reducibility.verdict.passed)
    throw ReductionError("reducibility condition fails: " + res.reducibility.verdict.failures.front());
  if (!res.restriction.frame_matches)
    throw ReductionError("frame of iota^*E does not match the pullback at " +
                         point_str(res.restriction.mismatch_points.front()));
  const auto& R = res.restriction.structure;
  res.projectability = check_projectable(R, F);
  res.frame_source = opt.frame_E ? "supplied" : "completed";

  const std::size_t n = N.n(), q = F.q();
  auto build = [&](const std::vector<BigSection>& restricted, const std::optional<std::vector<BigSection>>& given,
                   const std::string& which) {
    const FrameSpan span(as_rows(restricted), 2 * n);
    std::vector<BigSection> pf;
    if (given) {
      pf = *given;
      for (std::size_t i = 0; i < pf.size(); ++i) {
        if (!is_projectable_section(pf[i], F))
          throw ReductionError("supplied frame of " + which + ": section " + std::to_string(i) + " is not projectable");
        if (!span.contains(pf[i]))
          throw ReductionError("supplied frame of " + which + ": section " + std::to_string(i) + " is not in the span");
      }
      const FrameSpan own(as_rows(pf), 2 * n);
      if (own.rank() != span.rank()) throw ReductionError("supplied frame of " + which + " has the wrong rank");
      for (std::size_t a : F.leaf)
        if (!own.contains(BigSection{coordinate_field(n, a), zero_form(n)}))
          throw ReductionError("supplied frame of " + which + " does not contain T F");
    } else {
      auto c = projectable_frame(restricted, F);
      if (!c) throw ReductionError("no projectable frame of " + which + " found");
      pf = std::move(*c);
    }
    std::vector<PolyRow> rows;
    for (const auto& sec : pf) {
      auto p = push_section(sec, F);
      if (!p.is_zero()) rows.push_back(flatten(p));
    }
    auto basis = pick(rows, greedy_basis(rows, 2 * q));
    if (basis.size() + F.p() != span.rank())
      throw ReductionError("projected frame of " + which + " has rank " + std::to_string(basis.size()) +
                           ", expected " + std::to_string(span.rank() - F.p()));
    return as_sections(basis);
  };
  res.structure.chart = F.quotient_chart();
  res.structure.E = build(R.E, opt.frame_E, "iota^*E");
  res.structure.E_prime = build(R.E_prime, opt.frame_E_prime, "iota^*E'");

  const auto pi = F.projection();
  for (const auto& y : grid.points(n)) {
    IsotropicData I;
    try {
      I = pullback_at(s, N, y);
    } catch (const DegeneratePointError&) {
      continue;
    }
    ++res.points_checked;
    IsotropicData D;
    try {
      D = evaluate_at(res.structure, F.project(y));
    } catch (const DegeneratePointError&) {
      res.pullback_roundtrip = false;
      res.failure_points.push_back(y);
      continue;
    }
    bool ok = true;
    if (!(pullback_subspace(pi, D.E) == I.E)) res.pullback_roundtrip = ok = false;
    if (!(pushforward_subspace(pi, I.E) == D.E)) res.pushforward_matches = ok = false;
    if (!(D.E_prime == pushforward_subspace(pi, I.E_prime)) || !(D.E_prime == orthogonal_g(D.E)))
      res.orthogonal_matches = ok = false;
    if (!ok) res.failure_points.push_back(y);
  }
  return res;
}

Verdict check_tangent_free(const BigIsotropicStructure& s, const Grid& grid) {
  Verdict v;
  const auto T = tangent_summand(s.m());
  for (const auto& pt : grid.points(s.m())) {
    IsotropicData d;
    try {
      d = evaluate_at(s, pt);
    } catch (const DegeneratePointError&) {
      continue;
    }
    if (!subspace_intersection(d.E, T).is_zero()) v.fail("E meets T at " + point_str(pt));
  }
  return v;
}

std::optional<BigSection> bracket_transport_defect(const BigSection& x, const BigSection& y, const FoliationData& F) {
  if (!is_projectable_section(x, F) || !is_projectable_section(y, F))
    throw std::invalid_argument("bracket_transport_defect: sections are not projectable");
  const auto br = courant_bracket(x, y);
  if (!is_projectable_section(br, F)) return std::nullopt;
  return sub(push_section(br, F), courant_bracket(push_section(x, F), push_section(y, F)));
}

BigIsotropicStructure dirac_along_foliation_P(const FoliationData& F, const Bivector& P) {
  const std::size_t n = F.chart.dim();
  if (P.dim() != n) throw std::invalid_argument("dirac_along_foliation_P: bivector on another chart");
  BigIsotropicStructure s;
  s.chart = F.chart;
  for (std::size_t a : F.leaf) s.E.push_back({coordinate_field(n, a), zero_form(n)});
  for (std::size_t u : F.base) {
    BigSection t{zero_field(n), coordinate_form(n, u)};
    for (std::size_t v : F.base) t.X[v] = P.get(u, v).with_nvars(n);
    s.E.push_back(std::move(t));
  }
  s.E_prime = s.E;
  return s;
}

Verdict bivector_projectable(const FoliationData& F, const Bivector& P) {
  Verdict v;
  const std::size_t n = F.chart.dim();
  for (std::size_t i = 0; i < F.q(); ++i)
    for (std::size_t j = i + 1; j < F.q(); ++j)
      for (std::size_t a : F.leaf) {
        const auto dp = P.get(F.base[i], F.base[j]).with_nvars(n).derivative(a);
        if (!dp.is_zero())
          v.fail("dP(" + F.chart.names[F.base[i]] + ", " + F.chart.names[F.base[j]] + ")/d" + leaf_name(F, a) +
                 " = " + dp.str(F.chart.names));
      }
  return v;
}

BigIsotropicStructure dirac_along_foliation_omega(const FoliationData& F, const TwoForm& omega,
                                                  const std::vector<std::vector<Polynomial>>& normal) {
  const std::size_t n = F.chart.dim();
  if (omega.dim() != n) throw std::invalid_argument("dirac_along_foliation_omega: form on another chart");
  if (!normal.empty() && normal.size() != F.q()) throw std::invalid_argument("dirac_along_foliation_omega: normal size");
  for (std::size_t a : F.leaf)
    if (!is_zero(interior(coordinate_field(n, a), omega)))
      throw std::invalid_argument("dirac_along_foliation_omega: i(d/d" + leaf_name(F, a) + ") omega is not zero");
  BigIsotropicStructure s;
  s.chart = F.chart;
  for (std::size_t a : F.leaf) s.E.push_back({coordinate_field(n, a), zero_form(n)});
  for (std::size_t j = 0; j < F.q(); ++j) {
    auto Y = coordinate_field(n, F.base[j]);
    if (!normal.empty()) {
      if (normal[j].size() != F.p()) throw std::invalid_argument("dirac_along_foliation_omega: normal size");
      for (std::size_t i = 0; i < F.p(); ++i) Y[F.leaf[i]] = -normal[j][i].with_nvars(n);
    }
    auto a = flat_theta(omega, Y);
    s.E.push_back({std::move(Y), std::move(a)});
  }
  s.E_prime = s.E;
  return s;
}

Verdict form_foliated(const FoliationData& F, const TwoForm& omega) {
  Verdict v;
  const std::size_t n = F.chart.dim();
  for (std::size_t a : F.leaf)
    if (!is_zero(interior(coordinate_field(n, a), omega))) v.fail("i(d/d" + leaf_name(F, a) + ") omega is not zero");
  for (std::size_t i = 0; i < F.q(); ++i)
    for (std::size_t j = i + 1; j < F.q(); ++j)
      for (std::size_t a : F.leaf) {
        const auto dw = omega.get(F.base[i], F.base[j]).with_nvars(n).derivative(a);
        if (!dw.is_zero())
          v.fail("d omega(" + F.chart.names[F.base[i]] + ", " + F.chart.names[F.base[j]] + ")/d" + leaf_name(F, a) +
                 " = " + dw.str(F.chart.names));
      }
  return v;
}

}  // namespace bigiso
