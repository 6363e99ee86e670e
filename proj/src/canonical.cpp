#include "bigiso/canonical.hpp"

#include <algorithm>

#include "bigiso/linalg.hpp"
#include "bigiso/transport.hpp"

namespace bigiso {

namespace {

Vec concat(const Vec& a, const Vec& b) {
  Vec r = a;
  r.insert(r.end(), b.begin(), b.end());
  return r;
}

Vec unit(std::size_t n, std::size_t i) {
  Vec v(n, Rational(0));
  v[i] = Rational(1);
  return v;
}

// Reduces v modulo an RREF-stored subspace.
Vec reduce_mod(Vec v, const Subspace& s) {
  const auto rows = s.vectors();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Rational c = v[s.pivots()[i]];
    if (c.is_zero()) continue;
    for (std::size_t j = 0; j < v.size(); ++j) v[j] -= c * rows[i][j];
  }
  return v;
}

// Covector alpha with (X, alpha) in e.
Vec lift(const Subspace& e, const Vec& X) {
  const std::size_t m = X.size();
  const auto rows = e.vectors();
  Matrix<Rational> tang(rows.size(), m);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < m; ++j) tang(i, j) = rows[i][j];
  auto c = solve_left(tang, X);
  if (!c) throw std::logic_error("lift: vector is not in the tangent projection");
  Vec a(m, Rational(0));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < m; ++j) a[j] += (*c)[i] * rows[i][m + j];
  return a;
}

}  // namespace

SeedBasis seed_basis(const IsotropicData& d) {
  SeedBasis b;
  const std::size_t m = d.m;
  const auto cal_e = tangent_part(d.E);
  const auto cal_ep = tangent_part(d.E_prime);
  const auto ann_e = annihilator(cal_e);
  const auto ann_ep = annihilator(cal_ep);
  b.X = cal_e.vectors();
  for (const auto& x : b.X) b.xi.push_back(reduce_mod(lift(d.E, x), ann_ep));
  b.Y = complement_in(cal_e, cal_ep).vectors();
  for (const auto& y : b.Y) b.eta.push_back(reduce_mod(lift(d.E_prime, y), ann_e));
  b.kappa = ann_ep.vectors();
  b.nu = complement_in(ann_ep, ann_e).vectors();
  b.Z = complement_in(cal_ep, Subspace::full(m)).vectors();
  return b;
}

AdaptedChart AdaptedChart::from_names(const Chart& chart, const std::vector<std::string>& x,
                                      const std::vector<std::string>& y, const std::vector<std::string>& z) {
  AdaptedChart a;
  a.chart = chart;
  auto look = [&](const std::vector<std::string>& names, std::vector<std::size_t>& out) {
    for (const auto& n : names) {
      auto i = chart.index_of(n);
      if (!i) throw std::invalid_argument("adapted chart: unknown coordinate " + n);
      out.push_back(*i);
    }
  };
  look(x, a.x);
  look(y, a.y);
  look(z, a.z);
  return a;
}

Polynomial AdaptedChart::chi(std::size_t h, std::size_t s) const {
  if (twist.empty()) return Polynomial(m());
  return twist.at(h).at(s).with_nvars(m());
}

std::string str(const RationalSection& s, const Chart& chart) {
  auto term = [&](const RationalFunction& c, const std::string& unit_name) -> std::string {
    if (c.is_zero()) return "";
    if (c == RationalFunction(1)) return unit_name;
    if (c == RationalFunction(-1)) return "-" + unit_name;
    std::string cs = c.str(chart.names);
    const bool simple = c.is_polynomial() && c.numerator().size() == 1;
    return (simple ? cs : "(" + cs + ")") + "*" + unit_name;
  };
  auto join = [](const std::vector<std::string>& parts) {
    std::string out;
    for (const auto& p : parts) {
      if (p.empty()) continue;
      if (out.empty())
        out = p;
      else if (p[0] == '-')
        out += " - " + p.substr(1);
      else
        out += " + " + p;
    }
    return out.empty() ? std::string("0") : out;
  };
  std::vector<std::string> t, a;
  for (std::size_t i = 0; i < s.X.size(); ++i) t.push_back(term(s.X[i], "d/d" + chart.names[i]));
  for (std::size_t i = 0; i < s.a.size(); ++i) a.push_back(term(s.a[i], "d" + chart.names[i]));
  return "(" + join(t) + ", " + join(a) + ")";
}

bool CanonicalFrame::valid_at(const Vec& point) const {
  return !denominator_E.evaluate(point).is_zero() && !denominator_E_prime.evaluate(point).is_zero();
}

std::vector<RationalSection> CanonicalFrame::e_frame() const {
  auto out = cal_X;
  out.insert(out.end(), Xi.begin(), Xi.end());
  return out;
}

std::vector<RationalSection> CanonicalFrame::e_prime_frame() const {
  auto out = e_frame();
  out.insert(out.end(), cal_Y.begin(), cal_Y.end());
  out.insert(out.end(), Theta.begin(), Theta.end());
  return out;
}

CanonicalFrame CanonicalFrame::relative_to_twist() const {
  CanonicalFrame f = *this;
  const std::size_t P = p(), H = h(), S = u();
  auto chi = [&](std::size_t hh, std::size_t s) { return RationalFunction(chart.chi(hh, s)); };
  for (std::size_t s = 0; s < S; ++s)
    for (std::size_t hh = 0; hh < H; ++hh) {
      for (std::size_t a = 0; a < P; ++a) f.A2(a, s) -= chi(hh, s) * A1(a, hh);
      for (std::size_t v = 0; v < S; ++v) f.B2(v, s) -= chi(hh, s) * B1(v, hh);
      f.C2(hh, s) -= chi(hh, s);
      f.beta1(s, hh) += chi(hh, s);
    }
  return f;
}

void check_adapted(const BigIsotropicStructure& s, const AdaptedChart& chart) {
  const std::size_t m = s.m();
  if (!(chart.chart == s.chart)) throw ChartNotAdaptedError("adapted chart does not match the structure's chart");
  std::vector<std::size_t> all = chart.x;
  all.insert(all.end(), chart.y.begin(), chart.y.end());
  all.insert(all.end(), chart.z.begin(), chart.z.end());
  std::sort(all.begin(), all.end());
  for (std::size_t i = 0; i < all.size(); ++i)
    if (all.size() != m || all[i] != i) throw ChartNotAdaptedError("x, y, z must partition the coordinates");
  if (!chart.twist.empty()) {
    if (chart.twist.size() != chart.y.size()) throw ChartNotAdaptedError("twist must have one row per y coordinate");
    for (const auto& row : chart.twist) {
      if (row.size() != chart.z.size()) throw ChartNotAdaptedError("twist must have one column per z coordinate");
      for (auto c : row) {
        c = c.with_nvars(m);
        for (std::size_t i : chart.y) c = c.substitute(i, Rational(0));
        for (std::size_t i : chart.z) c = c.substitute(i, Rational(0));
        if (!c.is_zero()) throw ChartNotAdaptedError("twist does not vanish on the leaf");
      }
    }
  }
  const Vec origin(m, Rational(0));
  IsotropicData d;
  try {
    d = evaluate_at(s, origin);
  } catch (const DegeneratePointError& e) {
    throw ChartNotAdaptedError(std::string("structure degenerates at the origin: ") + e.what());
  }
  std::vector<Vec> xs, xys;
  for (std::size_t i : chart.x) xs.push_back(unit(m, i));
  xys = xs;
  for (std::size_t i : chart.y) xys.push_back(unit(m, i));
  if (tangent_part(d.E) != Subspace::span(m, xs))
    throw ChartNotAdaptedError("pr_TM E at the origin is not spanned by the x coordinate fields");
  if (tangent_part(d.E_prime) != Subspace::span(m, xys))
    throw ChartNotAdaptedError("pr_TM E' at the origin is not spanned by the x and y coordinate fields");
}

namespace {

struct Reduced {
  Polynomial D;
  std::vector<std::vector<RationalFunction>> rows;  // one per pivot, full width
};

// Rows of F_P^{-1} F by Cramer's rule over the polynomial ring.
Reduced cramer_reduce(const std::vector<PolyRow>& F, std::size_t width, const std::vector<std::size_t>& P,
                      std::size_t nvars, const char* what) {
  const std::size_t k = F.size();
  Matrix<Polynomial> FP(k, k);
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b) FP(a, b) = F[a][P[b]];
  Reduced r;
  r.D = determinant(FP).with_nvars(nvars);
  if (r.D.is_zero())
    throw NormalizationError(std::string(what) + ": pivot matrix is singular, the frame cannot be normalized in this chart");
  r.rows.assign(k, std::vector<RationalFunction>(width, RationalFunction(Polynomial(nvars))));
  for (std::size_t i = 0; i < k; ++i) r.rows[i][P[i]] = RationalFunction(1);
  for (std::size_t j = 0; j < width; ++j) {
    if (std::find(P.begin(), P.end(), j) != P.end()) continue;
    for (std::size_t i = 0; i < k; ++i) {
      auto Fi = FP;
      for (std::size_t a = 0; a < k; ++a) Fi(a, i) = F[a][j];
      auto num = determinant(Fi).with_nvars(nvars);
      r.rows[i][j] = num.is_zero() ? RationalFunction(Polynomial(nvars)) : RationalFunction(num, r.D);
    }
  }
  return r;
}

RationalSection to_section(const std::vector<RationalFunction>& row, std::size_t m) {
  RationalSection s;
  s.X.assign(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(m));
  s.a.assign(row.begin() + static_cast<std::ptrdiff_t>(m), row.end());
  return s;
}

RFMatrix rf_matrix(std::size_t r, std::size_t c, std::size_t nvars) {
  return RFMatrix(r, c, RationalFunction(Polynomial(nvars)));
}

}  // namespace

CanonicalFrame normalize_frame(const BigIsotropicStructure& s, const AdaptedChart& chart, const NormalizeOptions& opt) {
  check_adapted(s, chart);
  const std::size_t m = s.m();
  const std::size_t P = chart.x.size(), H = chart.y.size(), S = chart.z.size();
  if (s.k() != P + S) throw ChartNotAdaptedError("rank of E does not match dim x + dim z");
  if (s.E_prime.size() != 2 * m - s.k()) throw ChartNotAdaptedError("E' frame has the wrong size");

  CanonicalFrame cf;
  cf.chart = chart;
  cf.e_prime_basis = opt.e_prime_basis;

  std::vector<std::size_t> piv;
  for (std::size_t i : chart.x) piv.push_back(i);
  for (std::size_t i : chart.z) piv.push_back(m + i);
  std::vector<PolyRow> FE, FEp;
  for (const auto& e : s.E) FE.push_back(flatten(e));
  for (const auto& e : s.E_prime) FEp.push_back(flatten(e));
  auto piv_p = piv;
  for (std::size_t i : chart.y) piv_p.push_back(i);
  for (std::size_t i : chart.y) piv_p.push_back(m + i);

  const auto rp = cramer_reduce(FEp, 2 * m, piv_p, m, "E'");
  cf.denominator_E_prime = rp.D;
  if (opt.e_prime_basis) {
    cf.denominator_E = Polynomial(m, Rational(1));
    for (std::size_t i = 0; i < P + S; ++i)
      (i < P ? cf.cal_X : cf.Xi).push_back(to_section(rp.rows[i], m));
  } else {
    const auto re = cramer_reduce(FE, 2 * m, piv, m, "E");
    cf.denominator_E = re.D;
    for (std::size_t i = 0; i < P + S; ++i)
      (i < P ? cf.cal_X : cf.Xi).push_back(to_section(re.rows[i], m));
  }
  for (std::size_t i = 0; i < H; ++i) cf.cal_Y.push_back(to_section(rp.rows[P + S + i], m));
  for (std::size_t i = 0; i < H; ++i) cf.Theta.push_back(to_section(rp.rows[P + S + H + i], m));

  cf.A1 = rf_matrix(P, H, m);
  cf.A2 = rf_matrix(P, S, m);
  cf.alpha = rf_matrix(P, P, m);
  cf.alpha1 = rf_matrix(P, H, m);
  cf.B1 = rf_matrix(S, H, m);
  cf.B2 = rf_matrix(S, S, m);
  cf.beta = rf_matrix(S, P, m);
  cf.beta1 = rf_matrix(S, H, m);
  cf.C2 = rf_matrix(H, S, m);
  cf.gamma = rf_matrix(H, P, m);
  cf.L2 = rf_matrix(H, S, m);
  cf.lambda = rf_matrix(H, P, m);
  for (std::size_t a = 0; a < P; ++a) {
    const auto& x = cf.cal_X[a];
    for (std::size_t h = 0; h < H; ++h) cf.A1(a, h) = x.X[chart.y[h]];
    for (std::size_t h = 0; h < H; ++h) cf.alpha1(a, h) = x.a[chart.y[h]];
    for (std::size_t t = 0; t < S; ++t) cf.A2(a, t) = x.X[chart.z[t]];
    for (std::size_t b = 0; b < P; ++b) cf.alpha(a, b) = x.a[chart.x[b]];
  }
  for (std::size_t v = 0; v < S; ++v) {
    const auto& x = cf.Xi[v];
    for (std::size_t h = 0; h < H; ++h) cf.B1(v, h) = x.X[chart.y[h]];
    for (std::size_t h = 0; h < H; ++h) cf.beta1(v, h) = x.a[chart.y[h]];
    for (std::size_t t = 0; t < S; ++t) cf.B2(v, t) = x.X[chart.z[t]];
    for (std::size_t b = 0; b < P; ++b) cf.beta(v, b) = x.a[chart.x[b]];
  }
  for (std::size_t h = 0; h < H; ++h) {
    for (std::size_t t = 0; t < S; ++t) cf.C2(h, t) = cf.cal_Y[h].X[chart.z[t]];
    for (std::size_t b = 0; b < P; ++b) cf.gamma(h, b) = cf.cal_Y[h].a[chart.x[b]];
    for (std::size_t t = 0; t < S; ++t) cf.L2(h, t) = cf.Theta[h].X[chart.z[t]];
    for (std::size_t b = 0; b < P; ++b) cf.lambda(h, b) = cf.Theta[h].a[chart.x[b]];
  }
  return cf;
}

Verdict check_orthogonality_relations(const CanonicalFrame& cf) {
  Verdict v;
  const std::size_t P = cf.p(), H = cf.h(), S = cf.u();
  const auto& names = cf.chart.chart.names;
  auto need_zero = [&](const RationalFunction& f, const std::string& what) {
    if (!f.is_zero()) v.fail(what + " = " + f.str(names));
  };
  auto idx = [](std::size_t i) { return std::to_string(i + 1); };
  for (std::size_t a = 0; a < P; ++a)
    for (std::size_t h = 0; h < H; ++h) need_zero(cf.alpha1(a, h) + cf.gamma(h, a), "alpha'^" + idx(a) + "_" + idx(h) + " + gamma^" + idx(h) + "_" + idx(a));
  for (std::size_t q = 0; q < H; ++q)
    for (std::size_t a = 0; a < P; ++a) need_zero(cf.lambda(q, a) + cf.A1(a, q), "lambda^" + idx(q) + "_" + idx(a) + " + A'^" + idx(q) + "_" + idx(a));
  for (std::size_t u = 0; u < S; ++u)
    for (std::size_t h = 0; h < H; ++h) need_zero(cf.beta1(u, h) + cf.C2(h, u), "beta'^" + idx(u) + "_" + idx(h) + " + C''^" + idx(u) + "_" + idx(h));
  for (std::size_t u = 0; u < S; ++u)
    for (std::size_t q = 0; q < H; ++q) need_zero(cf.L2(q, u) + cf.B1(u, q), "L''^" + idx(u) + "_" + idx(q) + " + B'^" + idx(q) + "_" + idx(u));
  for (std::size_t u = 0; u < S; ++u)
    for (std::size_t a = 0; a < P; ++a) {
      RationalFunction f = cf.beta(u, a) + cf.A2(a, u);
      for (std::size_t h = 0; h < H; ++h) f += cf.alpha1(a, h) * cf.B1(u, h) + cf.beta1(u, h) * cf.A1(a, h);
      need_zero(f, "relation (beta, A'') at u=" + idx(u) + ", a=" + idx(a));
    }
  for (std::size_t u = 0; u < S; ++u)
    for (std::size_t w = u; w < S; ++w) {
      RationalFunction f = cf.B2(w, u) + cf.B2(u, w);
      for (std::size_t h = 0; h < H; ++h) f += cf.beta1(u, h) * cf.B1(w, h) + cf.beta1(w, h) * cf.B1(u, h);
      need_zero(f, "relation (B'') at u=" + idx(u) + ", v=" + idx(w));
    }
  for (std::size_t a = 0; a < P; ++a)
    for (std::size_t b = a; b < P; ++b) {
      RationalFunction f = cf.alpha(a, b) + cf.alpha(b, a);
      for (std::size_t h = 0; h < H; ++h) f += cf.alpha1(a, h) * cf.A1(b, h) + cf.alpha1(b, h) * cf.A1(a, h);
      need_zero(f, "relation (alpha) at a=" + idx(a) + ", b=" + idx(b));
    }
  return v;
}

namespace {

Polynomial on_leaf(const Polynomial& p, const AdaptedChart& chart) {
  Polynomial q = p.with_nvars(chart.m());
  for (std::size_t i : chart.y) q = q.substitute(i, Rational(0));
  for (std::size_t i : chart.z) q = q.substitute(i, Rational(0));
  return q;
}

}  // namespace

Verdict check_leaf_conditions(const CanonicalFrame& cf) {
  Verdict v;
  auto check = [&](const RFMatrix& M, const std::string& name) {
    for (std::size_t i = 0; i < M.rows(); ++i)
      for (std::size_t j = 0; j < M.cols(); ++j)
        if (!on_leaf(M(i, j).numerator(), cf.chart).is_zero())
          v.fail(name + "(" + std::to_string(i + 1) + ", " + std::to_string(j + 1) + ") does not vanish on the leaf");
  };
  check(cf.A1, "A'");
  check(cf.A2, "A''");
  check(cf.B1, "B'");
  check(cf.B2, "B''");
  check(cf.C2, "C''");
  check(cf.L2, "L''");
  if (on_leaf(cf.denominator_E, cf.chart).is_zero() || on_leaf(cf.denominator_E_prime, cf.chart).is_zero())
    v.fail("the frame is not defined along the leaf");
  return v;
}

bool is_locally_decomposable(const CanonicalFrame& cf) {
  for (std::size_t a = 0; a < cf.alpha1.rows(); ++a)
    for (std::size_t h = 0; h < cf.alpha1.cols(); ++h)
      if (!cf.alpha1(a, h).is_zero()) return false;
  return true;
}

namespace {

Subspace tangent_fiber(const AdaptedChart& chart) {
  std::vector<Vec> vs;
  for (std::size_t i : chart.y) vs.push_back(unit(chart.m(), i));
  for (std::size_t i : chart.z) vs.push_back(unit(chart.m(), i));
  return Subspace::span(chart.m(), vs);
}

Subspace ann_fiber(const AdaptedChart& chart) {
  std::vector<Vec> vs;
  for (std::size_t i : chart.x) vs.push_back(unit(chart.m(), i));
  return Subspace::span(chart.m(), vs);
}

Subspace direct(const Subspace& t, const Subspace& c) { return subspace_sum(as_tangent(t), as_cotangent(c)); }

std::optional<Vec> evaluate_rf_row(const std::vector<RationalFunction>& row, const Vec& pt) {
  Vec v;
  for (const auto& f : row) {
    auto x = f.evaluate(pt);
    if (!x) return std::nullopt;
    v.push_back(*x);
  }
  return v;
}

std::optional<Vec> evaluate_section(const RationalSection& s, const Vec& pt) {
  auto t = evaluate_rf_row(s.X, pt);
  auto a = evaluate_rf_row(s.a, pt);
  if (!t || !a) return std::nullopt;
  return concat(*t, *a);
}

std::optional<Subspace> span_at(const std::vector<RationalSection>& frame, std::size_t m, const Vec& pt) {
  std::vector<Vec> vs;
  for (const auto& s : frame) {
    auto v = evaluate_section(s, pt);
    if (!v) return std::nullopt;
    vs.push_back(*v);
  }
  return Subspace::span(2 * m, vs);
}

Rational eval_rf(const RationalFunction& f, const Vec& pt) {
  auto v = f.evaluate(pt);
  if (!v) throw std::domain_error("denominator vanishes at " + point_str(pt));
  return *v;
}

}  // namespace

Subspace pseudo_normal(const IsotropicData& d, const AdaptedChart& chart) {
  return tangent_part(subspace_intersection(d.E, direct(Subspace::full(d.m), ann_fiber(chart))));
}

Subspace pseudo_normal(const CanonicalFrame& cf, const Vec& point) {
  const std::size_t P = cf.p(), H = cf.h(), m = cf.chart.m();
  Matrix<Rational> a1(P, H);
  for (std::size_t a = 0; a < P; ++a)
    for (std::size_t h = 0; h < H; ++h) a1(a, h) = eval_rf(cf.alpha1(a, h), point);
  // f with sum_a f^a alpha'^a_h = 0
  const auto fs = Subspace::kernel(a1.transpose()).vectors();
  std::vector<Vec> out;
  for (const auto& f : fs) {
    Vec v(m, Rational(0));
    for (std::size_t a = 0; a < P; ++a)
      for (std::size_t j = 0; j < m; ++j) v[j] += f[a] * eval_rf(cf.cal_X[a].X[j], point);
    out.push_back(std::move(v));
  }
  return Subspace::span(m, out);
}

Subspace pseudo_conormal(const IsotropicData& d, const AdaptedChart& chart) {
  return cotangent_part(subspace_intersection(d.E_prime, direct(tangent_fiber(chart), Subspace::full(d.m))));
}

Subspace pseudo_normal_prime(const IsotropicData& d, const AdaptedChart& chart) {
  return tangent_part(subspace_intersection(d.E_prime, direct(Subspace::full(d.m), ann_fiber(chart))));
}

CouplingReport coupling_equivalences(const BigIsotropicStructure& s, const CanonicalFrame& cf, const Grid& grid) {
  CouplingReport r;
  const std::size_t m = s.m();
  const auto TF = tangent_fiber(cf.chart);
  const auto annTF = ann_fiber(cf.chart);
  for (const auto& pt : grid.points(m)) {
    if (!cf.valid_at(pt)) continue;
    IsotropicData d;
    try {
      d = evaluate_at(s, pt);
    } catch (const DegeneratePointError&) {
      continue;
    }
    ++r.points_checked;
    bool a0 = true;
    for (std::size_t a = 0; a < cf.p(); ++a)
      for (std::size_t h = 0; h < cf.h(); ++h)
        if (!eval_rf(cf.alpha1(a, h), pt).is_zero()) a0 = false;
    const auto H = pseudo_normal(d, cf.chart);
    if (H != pseudo_normal(cf, pt)) {
      r.equivalences_hold = false;
      r.failures.push_back("pseudo-normal bundle disagrees with the canonical formula at " + point_str(pt));
    }
    const bool normal = subspace_intersection(H, TF).is_zero() && H.dim() + TF.dim() == m;
    const auto Hc = pseudo_conormal(d, cf.chart);
    const bool conormal = subspace_intersection(Hc, annTF).is_zero() && subspace_sum(Hc, annTF).dim() == m;
    bool flat = true;
    const auto W = subspace_intersection(pseudo_normal_prime(d, cf.chart), TF);
    const auto cal_e = tangent_part(d.E);
    for (const auto& w : W.vectors()) {
      const auto beta = lift(d.E_prime, w);
      for (const auto& x : cal_e.vectors())
        if (!dot(beta, x).is_zero()) flat = false;
    }
    if (normal != a0 || conormal != a0 || flat != a0) {
      r.equivalences_hold = false;
      r.failures.push_back("coupling conditions disagree at " + point_str(pt) + " (alpha'=0: " + (a0 ? "yes" : "no") +
                           ", normal: " + (normal ? "yes" : "no") + ", conormal: " + (conormal ? "yes" : "no") +
                           ", flat kernel: " + (flat ? "yes" : "no") + ")");
    }
    if (!a0) continue;
    const auto A = subspace_intersection(d.E, direct(TF, annihilator(H)));
    const auto B = subspace_intersection(d.E, direct(H, annTF));
    const auto xi = span_at(cf.Xi, m, pt);
    const auto xs = span_at(cf.cal_X, m, pt);
    const bool split = A.dim() + B.dim() == d.E.dim() && subspace_sum(A, B) == d.E && xi && *xi == A && xs && *xs == B;
    if (!split) {
      r.decomposition_holds = false;
      r.failures.push_back("E does not split along the fibers and H(E, F) at " + point_str(pt));
    }
  }
  return r;
}

RFMatrix leaf_pullback(const CanonicalFrame& cf) {
  const std::size_t P = cf.p();
  RFMatrix out(P, P);
  for (std::size_t a = 0; a < P; ++a)
    for (std::size_t b = 0; b < P; ++b) {
      const auto& f = cf.alpha(a, b);
      const auto den = on_leaf(f.denominator(), cf.chart);
      if (den.is_zero()) throw NormalizationError("canonical frame is undefined along the leaf");
      out(a, b) = RationalFunction(on_leaf(f.numerator(), cf.chart), den);
    }
  return out;
}

Verdict check_leaf_pullback(const BigIsotropicStructure& s, const CanonicalFrame& cf, const Grid& grid) {
  Verdict v;
  const std::size_t m = s.m(), P = cf.p();
  const auto form = leaf_pullback(cf);
  Matrix<Rational> inc(m, P);
  for (std::size_t a = 0; a < P; ++a) inc(cf.chart.x[a], a) = Rational(1);
  const auto iota = LinearMap::from_matrix(inc);
  for (const auto& lp : grid.points(P)) {
    Vec pt(m, Rational(0));
    for (std::size_t a = 0; a < P; ++a) pt[cf.chart.x[a]] = lp[a];
    if (!cf.valid_at(pt)) continue;
    IsotropicData d;
    try {
      d = evaluate_at(s, pt);
    } catch (const DegeneratePointError&) {
      continue;
    }
    Matrix<Rational> w(P, P);
    for (std::size_t a = 0; a < P; ++a)
      for (std::size_t b = 0; b < P; ++b) w(a, b) = eval_rf(form(a, b), pt);
    std::vector<Vec> graph;
    for (std::size_t a = 0; a < P; ++a) graph.push_back(concat(unit(P, a), w.row(a)));
    const auto G = Subspace::span(2 * P, graph);
    for (std::size_t a = 0; a < P; ++a)
      for (std::size_t b = 0; b < P; ++b) {
        if (!(w(a, b) + w(b, a)).is_zero()) v.fail("leaf form is not skew at " + point_str(pt));
        // varpi(d/dx^a, d/dx^b) = -beta(d/dx^a) for (d/dx^b, beta) in E'
        const auto beta = lift(d.E_prime, unit(m, cf.chart.x[b]));
        if (-beta[cf.chart.x[a]] != w(a, b)) v.fail("leaf form differs from varpi at " + point_str(pt));
      }
    if (pullback_subspace(iota, d.E) != G) v.fail("pullback of E differs from the leaf form at " + point_str(pt));
    if (pullback_subspace(iota, dirac_extension(d)) != G)
      v.fail("pullback of D(E) differs from the leaf form at " + point_str(pt));
  }
  return v;
}

DiracExtensionFrame dirac_extension_frame(const CanonicalFrame& cf) {
  DiracExtensionFrame de;
  const std::size_t P = cf.p(), H = cf.h(), S = cf.u(), m = cf.chart.m();
  const std::size_t w = H + S;
  de.generators = cf.e_frame();
  bool regular = true;
  for (std::size_t u = 0; u < S; ++u) {
    for (std::size_t h = 0; h < H; ++h) regular = regular && cf.B1(u, h).is_zero();
    for (std::size_t t = 0; t < S; ++t) regular = regular && cf.B2(u, t).is_zero();
  }
  de.regular = regular;
  std::vector<std::vector<RationalFunction>> coeffs;
  if (regular) {
    for (std::size_t i = 0; i < w; ++i) {
      std::vector<RationalFunction> c(w, RationalFunction(Polynomial(m)));
      c[i] = RationalFunction(1);
      coeffs.push_back(std::move(c));
    }
  } else {
    // phi_h B'^h_u + psi_s B''^s_u = 0, denominators cleared with the E pivot minor
    const RationalFunction D(cf.denominator_E);
    std::vector<PolyRow> K;
    for (std::size_t u = 0; u < S; ++u) {
      PolyRow row;
      for (std::size_t h = 0; h < H; ++h) row.push_back((cf.B1(u, h) * D).as_polynomial().with_nvars(m));
      for (std::size_t t = 0; t < S; ++t) row.push_back((cf.B2(u, t) * D).as_polynomial().with_nvars(m));
      K.push_back(std::move(row));
    }
    const FrameSpan span(K, w);
    std::vector<PolyRow> basis;
    for (std::size_t i : span.basis_rows()) basis.push_back(K[i]);
    for (const auto& kv : polynomial_kernel(basis, w, m)) {
      std::vector<RationalFunction> c;
      for (const auto& p : kv) c.emplace_back(p);
      coeffs.push_back(std::move(c));
    }
  }
  for (const auto& c : coeffs) {
    RationalSection g;
    g.X.assign(m, RationalFunction(Polynomial(m)));
    g.a.assign(m, RationalFunction(Polynomial(m)));
    for (std::size_t h = 0; h < H; ++h) {
      g.a[cf.chart.y[h]] += c[h];
      for (std::size_t a = 0; a < P; ++a) g.a[cf.chart.x[a]] -= c[h] * cf.A1(a, h);
    }
    for (std::size_t t = 0; t < S; ++t) {
      g.a[cf.chart.z[t]] += c[H + t];
      for (std::size_t a = 0; a < P; ++a) g.a[cf.chart.x[a]] -= c[H + t] * cf.A2(a, t);
    }
    de.generators.push_back(std::move(g));
  }
  return de;
}

Verdict check_dirac_extension(const BigIsotropicStructure& s, const CanonicalFrame& cf, const DiracExtensionFrame& de,
                              const Grid& grid) {
  Verdict v;
  const std::size_t m = s.m();
  for (const auto& pt : grid.points(m)) {
    if (!cf.valid_at(pt)) continue;
    IsotropicData d;
    try {
      d = evaluate_at(s, pt);
    } catch (const DegeneratePointError&) {
      continue;
    }
    auto sp = span_at(de.generators, m, pt);
    if (!sp) continue;
    const auto expect = dirac_extension(d);
    // generic kernel frames may drop rank on a subvariety
    if (sp->dim() < expect.dim() && !de.regular) continue;
    if (*sp != expect) v.fail("D(E) frame differs from the pointwise Dirac extension at " + point_str(pt));
  }
  return v;
}

TransversalResult transversal_structure(const BigIsotropicStructure& s, const CanonicalFrame& cf, const Grid& grid) {
  if (cf.e_prime_basis) throw std::invalid_argument("transversal_structure needs the canonical basis of (E, E')");
  const std::size_t m = s.m(), H = cf.h(), S = cf.u();
  const std::size_t n = H + S;
  const auto& ch = cf.chart;
  std::vector<std::size_t> q_index;  // chart coordinate behind each transversal coordinate
  q_index.insert(q_index.end(), ch.y.begin(), ch.y.end());
  q_index.insert(q_index.end(), ch.z.begin(), ch.z.end());
  std::vector<std::string> names;
  for (std::size_t i : q_index) names.push_back(ch.chart.names[i]);

  std::vector<Polynomial> images(m, Polynomial(n));
  for (std::size_t j = 0; j < n; ++j) images[q_index[j]] = Polynomial::variable(n, j);
  auto restrict_poly = [&](const Polynomial& p) { return p.with_nvars(m).compose(images).with_nvars(n); };

  auto pull = [&](const RationalSection& sec) {
    for (std::size_t i : ch.x)
      if (!sec.X[i].is_zero()) throw std::logic_error("transversal frame has a component along the leaf");
    std::vector<Polynomial> dens;
    std::vector<std::pair<Polynomial, Polynomial>> parts;
    auto add = [&](const RationalFunction& f) {
      const auto num = restrict_poly(f.numerator());
      const auto den = restrict_poly(f.denominator());
      if (den.is_zero()) throw TransversalError("canonical frame is undefined on the transversal");
      parts.emplace_back(num, den);
      if (!den.is_constant() && std::find(dens.begin(), dens.end(), den) == dens.end()) dens.push_back(den);
    };
    for (std::size_t i : q_index) add(sec.X[i]);
    for (std::size_t i : q_index) add(sec.a[i]);
    Polynomial L(n, Rational(1));
    for (const auto& d : dens) L *= d;
    PolyRow row;
    for (const auto& [num, den] : parts) {
      auto q = (num * L).divide_exact(den);
      if (!q) throw std::logic_error("transversal_structure: inexact denominator");
      row.push_back(q->with_nvars(n));
    }
    return unflatten(row);
  };

  TransversalResult r;
  r.structure.chart = Chart(names);
  for (const auto& x : cf.Xi) r.structure.E.push_back(pull(x));
  r.structure.E_prime = r.structure.E;
  for (const auto& y : cf.cal_Y) r.structure.E_prime.push_back(pull(y));
  for (const auto& t : cf.Theta) r.structure.E_prime.push_back(pull(t));

  Matrix<Rational> inc(m, n);
  for (std::size_t j = 0; j < n; ++j) inc(q_index[j], j) = Rational(1);
  const auto iota = LinearMap::from_matrix(inc);
  std::optional<std::size_t> dim_S, dim_Sp;
  for (const auto& qp : grid.points(n)) {
    Vec pt(m, Rational(0));
    for (std::size_t j = 0; j < n; ++j) pt[q_index[j]] = qp[j];
    if (!cf.valid_at(pt)) continue;
    IsotropicData d;
    try {
      d = evaluate_at(s, pt);
    } catch (const DegeneratePointError&) {
      continue;
    }
    ++r.points_checked;
    const auto sd = S_space(iota, d.E).dim(), spd = S_space(iota, d.E_prime).dim();
    if (!dim_S) {
      dim_S = sd;
      dim_Sp = spd;
    } else if (*dim_S != sd || *dim_Sp != spd) {
      throw TransversalError("dim S or dim S' is not constant along the transversal (at " + point_str(qp) + ")");
    }
    std::vector<Vec> e, ep;
    for (const auto& sec : r.structure.E) e.push_back(evaluate_row(flatten(sec), qp));
    for (const auto& sec : r.structure.E_prime) ep.push_back(evaluate_row(flatten(sec), qp));
    const auto Etr = Subspace::span(2 * n, e);
    if (Etr != pullback_subspace(iota, d.E) || Subspace::span(2 * n, ep) != pullback_subspace(iota, d.E_prime))
      r.matches_pullback = false;
    if (!subspace_intersection(Etr, tangent_summand(n)).is_zero()) r.graph_type = false;
  }
  return r;
}

}  // namespace bigiso
