#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bigiso/canonical.hpp"

using namespace bigiso;

namespace {

Polynomial X(std::size_t m, std::size_t i) { return Polynomial::variable(m, i); }
Polynomial one(std::size_t m) { return Polynomial(m, Rational(1)); }
Polynomial cst(std::size_t m, long c) { return Polynomial(m, Rational(c)); }

BigSection tangent(std::size_t m, std::size_t i) { return {coordinate_field(m, i), zero_form(m)}; }
BigSection cotangent(std::size_t m, std::size_t i) { return {zero_field(m), coordinate_form(m, i)}; }

Vec unit(std::size_t n, std::size_t i) {
  Vec v(n, Rational(0));
  v[i] = Rational(1);
  return v;
}

RationalSection rs(const BigSection& s) {
  RationalSection r;
  for (const auto& p : s.X) r.X.emplace_back(p);
  for (const auto& p : s.a) r.a.emplace_back(p);
  return r;
}

BigIsotropicStructure example_strong() {
  BigIsotropicStructure s;
  s.chart = Chart({"x", "y", "z"});
  s.E = {tangent(3, 0), cotangent(3, 2)};
  s.E_prime = {tangent(3, 0), cotangent(3, 2), tangent(3, 1), cotangent(3, 1)};
  return s;
}

BigIsotropicStructure example_not_strong(const Chart& chart = Chart({"x1", "x2", "y1", "y2", "z"})) {
  const std::size_t m = 5;
  BigIsotropicStructure s;
  s.chart = chart;
  BigSection X1{coordinate_field(m, 0), add(coordinate_form(m, 1), coordinate_form(m, 2))};
  BigSection X2{coordinate_field(m, 1), sub(coordinate_form(m, 3), coordinate_form(m, 0))};
  BigSection Y1{coordinate_field(m, 2), scale(cst(m, -1), coordinate_form(m, 0))};
  BigSection Y2{coordinate_field(m, 3), scale(cst(m, -1), coordinate_form(m, 1))};
  s.E = {X1, X2, cotangent(m, 4)};
  s.E_prime = {X1, X2, cotangent(m, 4), Y1, Y2, cotangent(m, 2), cotangent(m, 3)};
  return s;
}

AdaptedChart adapted_5(const Chart& c) {
  return AdaptedChart::from_names(c, {c.names[0], c.names[1]}, {c.names[2], c.names[3]}, {c.names[4]});
}

RationalFunction rf(long c) { return RationalFunction(c); }

// B-field transform of a foliation pair, adapted to x = first p, y = next h, z = rest.
BigIsotropicStructure random_adapted(std::mt19937_64& rng, std::size_t p, std::size_t h, std::size_t s) {
  const std::size_t m = p + h + s;
  auto vanishing = [&](unsigned deg) {
    Polynomial q = random_polynomial(rng, m, deg);
    return q - Polynomial(m, q.constant_term());
  };
  std::vector<VectorField> F, Fp;
  for (std::size_t a = 0; a < p; ++a) {
    auto v = coordinate_field(m, a);
    for (std::size_t j = 0; j < m; ++j)
      if (j != a) v[j] = vanishing(1);
    F.push_back(v);
  }
  Fp = F;
  for (std::size_t k = 0; k < h; ++k) {
    auto v = coordinate_field(m, p + k);
    for (std::size_t j = 0; j < p; ++j) v[j] = vanishing(1);
    for (std::size_t j = p + h; j < m; ++j) v[j] = vanishing(1);
    Fp.push_back(v);
  }
  auto base = foliation_pair(Chart::standard(m), F, Fp);
  auto theta = random_skew2(rng, m, 1);
  auto bt = [&](std::vector<BigSection> fr) {
    for (auto& e : fr) e.a = add(e.a, interior(e.X, theta));
    return fr;
  };
  base.E = bt(base.E);
  base.E_prime = bt(base.E_prime);
  return base;
}

AdaptedChart standard_adapted(std::size_t p, std::size_t h, std::size_t s) {
  AdaptedChart a;
  a.chart = Chart::standard(p + h + s);
  for (std::size_t i = 0; i < p; ++i) a.x.push_back(i);
  for (std::size_t i = 0; i < h; ++i) a.y.push_back(p + i);
  for (std::size_t i = 0; i < s; ++i) a.z.push_back(p + h + i);
  return a;
}

}  // namespace

TEST_CASE("seed basis") {
  auto d = evaluate_at(example_strong(), Vec(3, Rational(0)));
  auto b = seed_basis(d);
  CHECK(b.X == std::vector<Vec>{unit(3, 0)});
  CHECK(b.xi == std::vector<Vec>{Vec(3, Rational(0))});
  CHECK(b.Y == std::vector<Vec>{unit(3, 1)});
  CHECK(b.eta == std::vector<Vec>{Vec(3, Rational(0))});
  CHECK(b.kappa == std::vector<Vec>{unit(3, 2)});
  CHECK(b.nu == std::vector<Vec>{unit(3, 1)});
  CHECK(b.Z == std::vector<Vec>{unit(3, 2)});

  // E = 0 + T*M
  auto co = IsotropicData::from_E(cotangent_summand(2));
  auto c = seed_basis(co);
  CHECK(c.X.empty());
  CHECK(c.kappa.size() == 2);
  CHECK(c.Y.empty());
  CHECK(c.Z.size() == 2);

  std::mt19937_64 rng(9);
  for (int t = 0; t < 60; ++t) {
    const std::size_t m = 1 + static_cast<std::size_t>(t % 5);
    auto r = random_isotropic(rng, m);
    auto sb = seed_basis(r);
    const std::size_t k = r.E.dim();
    CHECK(sb.Y.size() == m - k);
    CHECK(sb.nu.size() == m - k);
    CHECK(sb.kappa.size() == sb.Z.size());
    std::vector<Vec> e, ep;
    for (std::size_t a = 0; a < sb.X.size(); ++a) e.push_back([&] {
        Vec v = sb.X[a];
        v.insert(v.end(), sb.xi[a].begin(), sb.xi[a].end());
        return v;
      }());
    for (const auto& kap : sb.kappa) {
      Vec v(m, Rational(0));
      v.insert(v.end(), kap.begin(), kap.end());
      e.push_back(v);
    }
    CHECK(e.size() == k);
    CHECK(Subspace::span(2 * m, e) == r.E);
    ep = e;
    for (std::size_t h = 0; h < sb.Y.size(); ++h) {
      Vec v = sb.Y[h];
      v.insert(v.end(), sb.eta[h].begin(), sb.eta[h].end());
      ep.push_back(v);
    }
    for (const auto& nu : sb.nu) {
      Vec v(m, Rational(0));
      v.insert(v.end(), nu.begin(), nu.end());
      ep.push_back(v);
    }
    CHECK(ep.size() == 2 * m - k);
    CHECK(Subspace::span(2 * m, ep) == r.E_prime);
  }
}

TEST_CASE("canonical basis of the three-dimensional example") {
  auto s = example_strong();
  auto ch = AdaptedChart::from_names(s.chart, {"x"}, {"y"}, {"z"});
  auto cf = normalize_frame(s, ch);
  CHECK(cf.cal_X == std::vector<RationalSection>{rs(s.E[0])});
  CHECK(cf.Xi == std::vector<RationalSection>{rs(s.E[1])});
  CHECK(cf.cal_Y == std::vector<RationalSection>{rs(s.E_prime[2])});
  CHECK(cf.Theta == std::vector<RationalSection>{rs(s.E_prime[3])});
  CHECK(check_orthogonality_relations(cf).passed);
  CHECK(check_leaf_conditions(cf).passed);
  CHECK(is_locally_decomposable(cf));
  CHECK(coupling_equivalences(s, cf, Grid{}).passed());

  auto form = leaf_pullback(cf);
  CHECK(form.rows() == 1);
  CHECK(form(0, 0).is_zero());
  CHECK(check_leaf_pullback(s, cf, Grid{}).passed);

  auto de = dirac_extension_frame(cf);
  CHECK(de.regular);
  auto d0 = Subspace::span(6, {unit(6, 0), unit(6, 5), unit(6, 4)});
  std::vector<Vec> gens;
  for (const auto& g : de.generators) {
    Vec v;
    for (const auto& f : g.X) v.push_back(*f.evaluate(Vec(3, Rational(0))));
    for (const auto& f : g.a) v.push_back(*f.evaluate(Vec(3, Rational(0))));
    gens.push_back(v);
  }
  CHECK(Subspace::span(6, gens) == d0);
  CHECK(check_dirac_extension(s, cf, de, Grid{}).passed);

  auto tr = transversal_structure(s, cf, Grid{});
  CHECK(tr.structure.chart.names == std::vector<std::string>{"y", "z"});
  REQUIRE(tr.structure.E.size() == 1);
  CHECK(tr.structure.E[0] == cotangent(2, 1));
  CHECK(tr.matches_pullback);
  CHECK(tr.graph_type);
  CHECK(check_integrability(tr.structure).passed);
  CHECK(validate(tr.structure, Grid{}).ok());

  CHECK(str(cf.cal_X[0], s.chart) == "(d/dx, 0)");
  CHECK(str(cf.Xi[0], s.chart) == "(0, dz)");
}

TEST_CASE("canonical basis of the five-dimensional example") {
  auto s = example_not_strong();
  auto cf = normalize_frame(s, adapted_5(s.chart));
  CHECK(cf.p() == 2);
  CHECK(cf.h() == 2);
  CHECK(cf.u() == 1);
  CHECK(cf.alpha1(0, 0) == rf(1));
  CHECK(cf.alpha1(1, 1) == rf(1));
  CHECK(cf.alpha1(0, 1).is_zero());
  CHECK(cf.alpha1(1, 0).is_zero());
  CHECK(cf.gamma(0, 0) == rf(-1));
  CHECK(cf.gamma(1, 1) == rf(-1));
  CHECK(cf.gamma(0, 1).is_zero());
  CHECK(cf.alpha(0, 1) == rf(1));
  CHECK(cf.alpha(1, 0) == rf(-1));
  for (const auto* M : {&cf.A1, &cf.A2, &cf.B1, &cf.B2, &cf.C2, &cf.L2, &cf.beta, &cf.beta1, &cf.lambda})
    for (std::size_t i = 0; i < M->rows(); ++i)
      for (std::size_t j = 0; j < M->cols(); ++j) CHECK((*M)(i, j).is_zero());
  // the given frame is already canonical
  CHECK(cf.cal_X == std::vector<RationalSection>{rs(s.E[0]), rs(s.E[1])});
  CHECK(cf.cal_Y == std::vector<RationalSection>{rs(s.E_prime[3]), rs(s.E_prime[4])});
  CHECK(check_orthogonality_relations(cf).passed);
  CHECK(check_leaf_conditions(cf).passed);
  CHECK_FALSE(is_locally_decomposable(cf));
  auto cp = coupling_equivalences(s, cf, Grid{});
  CHECK(cp.passed());
  CHECK(cp.points_checked > 0);

  auto form = leaf_pullback(cf);
  CHECK(form(0, 1) == rf(1));
  CHECK(form(1, 0) == rf(-1));
  CHECK(check_leaf_pullback(s, cf, Grid{}).passed);

  auto de = dirac_extension_frame(cf);
  CHECK(de.regular);
  CHECK(check_dirac_extension(s, cf, de, Grid{}).passed);

  auto tr = transversal_structure(s, cf, Grid{-1, 1, 64});
  CHECK(tr.structure.chart.names == std::vector<std::string>{"y1", "y2", "z"});
  REQUIRE(tr.structure.E.size() == 1);
  CHECK(tr.structure.E[0] == cotangent(3, 2));
  CHECK(tr.matches_pullback);
  CHECK(tr.graph_type);
  CHECK(check_integrability(tr.structure).passed);

  // E' basis with the supplementary conditions
  auto cp2 = normalize_frame(s, adapted_5(s.chart), NormalizeOptions{true});
  for (const auto* M : {&cp2.alpha1, &cp2.beta1, &cp2.A1, &cp2.B1})
    for (std::size_t i = 0; i < M->rows(); ++i)
      for (std::size_t j = 0; j < M->cols(); ++j) CHECK((*M)(i, j).is_zero());
  CHECK_FALSE(check_orthogonality_relations(cp2).passed);
}

TEST_CASE("coordinate change makes the five-dimensional example decomposable") {
  // xt1 = x1 - y2, xt2 = x2 + y1
  AffineChange ch{Matrix<Rational>::from_rows({{1, 0, 0, -1, 0},
                                               {0, 1, 1, 0, 0},
                                               {0, 0, 1, 0, 0},
                                               {0, 0, 0, 1, 0},
                                               {0, 0, 0, 0, 1}}),
                  {0, 0, 0, 0, 0}};
  auto s = example_not_strong();
  BigIsotropicStructure t;
  t.chart = Chart({"xt1", "xt2", "yt1", "yt2", "zt"});
  for (const auto& e : s.E) t.E.push_back(transform_section(ch, e));
  for (const auto& e : s.E_prime) t.E_prime.push_back(transform_section(ch, e));
  auto cf = normalize_frame(t, adapted_5(t.chart));
  const std::size_t m = 5;
  CHECK(cf.cal_X[0] == rs({coordinate_field(m, 0), coordinate_form(m, 1)}));
  CHECK(cf.cal_X[1] == rs({coordinate_field(m, 1), scale(cst(m, -1), coordinate_form(m, 0))}));
  CHECK(cf.Xi[0] == rs(cotangent(m, 4)));
  CHECK(cf.cal_Y[0] == rs(tangent(m, 2)));
  CHECK(cf.cal_Y[1] == rs(tangent(m, 3)));
  CHECK(cf.Theta[0] == rs(cotangent(m, 2)));
  CHECK(cf.Theta[1] == rs(cotangent(m, 3)));
  CHECK(str(cf.cal_X[0], t.chart) == "(d/dxt1, dxt2)");
  CHECK(str(cf.cal_X[1], t.chart) == "(d/dxt2, -dxt1)");
  CHECK(is_locally_decomposable(cf));
  auto cp = coupling_equivalences(t, cf, Grid{});
  CHECK(cp.passed());
  CHECK(check_integrability(t).passed);
}

TEST_CASE("Dirac fixture") {
  // P = d1^d2 + x3 d3^d4
  const std::size_t m = 4;
  Bivector P(m);
  P.set(0, 1, one(m));
  P.set(2, 3, X(m, 2));
  std::vector<OneForm> all;
  for (std::size_t i = 0; i < m; ++i) all.push_back(coordinate_form(m, i));
  auto s = graph_P(Chart::standard(m), all, P);
  auto cf = normalize_frame(s, standard_adapted(2, 0, 2));
  CHECK(cf.h() == 0);
  // alpha^a_b + alpha^b_a = 0, B''^s_u + B''^u_s = 0, beta^u_a + A''^u_a = 0
  CHECK(check_orthogonality_relations(cf).passed);
  CHECK(cf.alpha(0, 1) == rf(-1));
  CHECK(cf.B2(0, 1) == RationalFunction(X(m, 2)));
  CHECK(cf.B2(1, 0) == RationalFunction(-X(m, 2)));
  CHECK(is_locally_decomposable(cf));
  CHECK(coupling_equivalences(s, cf, Grid{}).passed());
  CHECK(check_leaf_pullback(s, cf, Grid{}).passed);
  auto de = dirac_extension_frame(cf);
  CHECK_FALSE(de.regular);
  CHECK(check_dirac_extension(s, cf, de, Grid{}).passed);

  auto tr = transversal_structure(s, cf, Grid{});
  REQUIRE(tr.structure.E.size() == 2);
  const std::size_t n = 2;
  CHECK(tr.structure.E[0] == BigSection{VectorField{Polynomial(n), X(n, 0)}, coordinate_form(n, 0)});
  CHECK(tr.structure.E_prime.size() == 2);
  CHECK(tr.matches_pullback);
  CHECK(check_integrability(tr.structure).passed);
}

TEST_CASE("uniqueness of the canonical basis") {
  auto s = example_not_strong();
  auto cf = normalize_frame(s, adapted_5(s.chart));
  CHECK(normalize_frame(s, adapted_5(s.chart)).cal_X == cf.cal_X);
  // another frame of the same (E, E')
  const std::size_t m = 5;
  auto t = s;
  t.E[0] = add(s.E[0], scale(X(m, 2), s.E[2]));
  t.E[1] = add(scale(cst(m, 2), s.E[1]), s.E[0]);
  t.E_prime = {s.E_prime[6], add(s.E_prime[3], scale(X(m, 0), s.E_prime[0])), s.E_prime[1], s.E_prime[2],
               s.E_prime[4], add(s.E_prime[5], s.E_prime[2]), s.E_prime[0]};
  auto cg = normalize_frame(t, adapted_5(t.chart));
  CHECK(cg.cal_X == cf.cal_X);
  CHECK(cg.Xi == cf.Xi);
  CHECK(cg.cal_Y == cf.cal_Y);
  CHECK(cg.Theta == cf.Theta);
}

TEST_CASE("twisted frames") {
  auto s = example_not_strong();
  auto ch = adapted_5(s.chart);
  const std::size_t m = 5;
  ch.twist = {{X(m, 2)}, {X(m, 2) * X(m, 0)}};
  auto cf = normalize_frame(s, ch);
  auto fr = cf.relative_to_twist();
  CHECK(fr.C2(0, 0) == RationalFunction(-X(m, 2)));
  CHECK(fr.beta1(0, 1) == RationalFunction(X(m, 2) * X(m, 0)));
  CHECK(check_orthogonality_relations(fr).passed);
  auto bad = adapted_5(s.chart);
  bad.twist = {{X(m, 0)}, {Polynomial(m)}};
  CHECK_THROWS_AS(normalize_frame(s, bad), ChartNotAdaptedError);
}

TEST_CASE("chart errors") {
  auto s = example_strong();
  CHECK_THROWS_AS(normalize_frame(s, AdaptedChart::from_names(s.chart, {"y"}, {"x"}, {"z"})), ChartNotAdaptedError);
  CHECK_THROWS_AS(normalize_frame(s, AdaptedChart::from_names(s.chart, {"x"}, {"y"}, {})), ChartNotAdaptedError);
  CHECK_THROWS(AdaptedChart::from_names(s.chart, {"w"}, {"y"}, {"z"}));
}

TEST_CASE("random adapted structures") {
  std::mt19937_64 rng(31);
  int nonconstant = 0;
  for (int t = 0; t < 12; ++t) {
    const std::size_t p = 1 + static_cast<std::size_t>(t % 2), h = static_cast<std::size_t>(t % 3) % 2 + (t % 5 == 0),
                      sg = 1 + static_cast<std::size_t>(t % 4 == 0);
    auto s = random_adapted(rng, p, h, sg);
    auto ch = standard_adapted(p, h, sg);
    CHECK(validate(s, Grid{-1, 1, 32}).isotropy_failures.empty());
    auto cf = normalize_frame(s, ch);
    if (!cf.denominator_E.is_constant() || !cf.denominator_E_prime.is_constant()) ++nonconstant;
    auto ortho = check_orthogonality_relations(cf);
    CHECK(ortho.passed);
    for (const auto& f : ortho.failures) MESSAGE(f);
    // canonical sections lie in E and E'
    const auto fe = FrameSpan::of_sections(s.E, s.m()), fep = FrameSpan::of_sections(s.E_prime, s.m());
    auto clear = [&](const RationalSection& r, const Polynomial& D) {
      BigSection b;
      for (const auto& f : r.X) b.X.push_back((f * RationalFunction(D)).as_polynomial().with_nvars(s.m()));
      for (const auto& f : r.a) b.a.push_back((f * RationalFunction(D)).as_polynomial().with_nvars(s.m()));
      return b;
    };
    for (const auto& r : cf.e_frame()) CHECK(fe.contains(clear(r, cf.denominator_E)));
    for (const auto& r : cf.cal_Y) CHECK(fep.contains(clear(r, cf.denominator_E_prime)));
    for (const auto& r : cf.Theta) CHECK(fep.contains(clear(r, cf.denominator_E_prime)));
    CHECK(coupling_equivalences(s, cf, Grid{-1, 1, 32}).passed());
    auto de = dirac_extension_frame(cf);
    CHECK(check_dirac_extension(s, cf, de, Grid{-1, 1, 32}).passed);
    auto twice = normalize_frame(s, ch);
    CHECK(twice.cal_X == cf.cal_X);
    CHECK(twice.Theta == cf.Theta);
  }
  CHECK(nonconstant > 0);
}
