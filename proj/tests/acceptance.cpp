#include <chrono>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>

#include "bigiso/document.hpp"
#include "bigiso/transport.hpp"

using namespace bigiso;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail << "first failure: " << what << "; ";
    pass = pass && ok;
  }
};

std::string fixture(const std::string& name) { return std::string(BIGISO_FIXTURES) + "/" + name + ".bis"; }

std::vector<std::pair<std::string, StructureDocument>> all_fixtures() {
  std::vector<std::string> paths;
  for (const auto& e : std::filesystem::directory_iterator(BIGISO_FIXTURES))
    if (e.path().extension() == ".bis") paths.push_back(e.path().string());
  std::sort(paths.begin(), paths.end());
  std::vector<std::pair<std::string, StructureDocument>> out;
  for (const auto& p : paths) out.emplace_back(std::filesystem::path(p).stem().string(), load_document(p));
  return out;
}

std::vector<IsotropicData> random_cases(std::size_t count) {
  std::mt19937_64 rng(1);
  std::vector<IsotropicData> out;
  for (std::size_t t = 0; t < count; ++t) out.push_back(random_isotropic(rng));
  return out;
}

template <class S>
std::vector<std::string> strs(const std::vector<S>& frame, const Chart& c) {
  std::vector<std::string> out;
  for (const auto& s : frame) out.push_back(str(s, c));
  return out;
}

bool same_span(const std::vector<BigSection>& a, const std::vector<BigSection>& b, std::size_t m) {
  const auto A = FrameSpan::of_sections(a, m), B = FrameSpan::of_sections(b, m);
  if (A.rank() != B.rank()) return false;
  for (const auto& s : a)
    if (!B.contains(s)) return false;
  for (const auto& s : b)
    if (!A.contains(s)) return false;
  return true;
}

bool rf_is(const RFMatrix& M, const std::vector<std::vector<long>>& want) {
  for (std::size_t i = 0; i < M.rows(); ++i)
    for (std::size_t j = 0; j < M.cols(); ++j)
      if (!(M(i, j) == RationalFunction(want[i][j]))) return false;
  return true;
}

bool rf_zero(const RFMatrix& M) {
  for (std::size_t i = 0; i < M.rows(); ++i)
    for (std::size_t j = 0; j < M.cols(); ++j)
      if (!M(i, j).is_zero()) return false;
  return true;
}

std::vector<BigIsotropicStructure> random_graphs;  // shared by criteria 7 and 8

Outcome orthogonality_algebra() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const auto cases = random_cases(200);
  for (const auto& d : cases) {
    o.require(d.m <= 6, "m <= 6");
    o.require(d.E.dim() + d.E_prime.dim() == 2 * d.m, "dim E + dim E' = 2m");
    o.require(orthogonal_g(d.E_prime) == d.E, "E'' = E");
    const auto back = reconstruct(characteristic_triple(d));
    o.require(back.E == d.E && back.E_prime == d.E_prime, "reconstruct of characteristic triple");
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.require(s < 5.0, "time under 5 s");
  o.detail << cases.size() << " random subspaces in " << s << " s";
  return o;
}

Outcome dirac_extension_check() {
  Outcome o;
  std::size_t n = 0;
  for (const auto& d : random_cases(200)) {
    const auto D = dirac_extension(d);
    o.require(D.dim() == d.m && D.contains(d.E) && d.E_prime.contains(D), "random case");
    ++n;
  }
  std::size_t pts = 0;
  for (const auto& [name, doc] : all_fixtures()) {
    for (const auto& p : Grid{-1, 1, 81}.points(doc.structure.m())) {
      IsotropicData d;
      try {
        d = evaluate_at(doc.structure, p);
      } catch (const DegeneratePointError&) {
        continue;
      }
      const auto D = dirac_extension(d);
      o.require(D.dim() == d.m && D.contains(d.E) && d.E_prime.contains(D), name + " at " + point_str(p));
      ++pts;
    }
  }
  o.detail << n << " random cases, " << pts << " fixture points";
  return o;
}

Outcome transport() {
  Outcome o;
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::size_t> dim(1, 5);
  for (int t = 0; t < 200; ++t) {
    const auto n = dim(rng), m = dim(rng);
    const auto d = random_isotropic(rng, m);
    const auto f = random_linear_map(rng, n, m);
    const auto pb = pullback_subspace(f, d.E);
    o.require(static_cast<long>(pb.dim()) == predict_pullback_dim(f, d), "pullback dimension");
    o.require(orthogonal_g(pb) == pullback_subspace(f, d.E_prime), "(f^*E)' = f^*E'");
    const auto e = random_isotropic(rng, n);
    o.require(static_cast<long>(pushforward_subspace(f, e.E).dim()) == predict_pushforward_dim(f, e),
              "pushforward dimension");
  }
  for (int t = 0; t < 50; ++t) {
    const auto m = dim(rng), n = std::min<std::size_t>(5, m + dim(rng) % 3);
    o.require(pushpull_roundtrip(random_surjection(rng, n, m), random_isotropic(rng, m).E), "surjective roundtrip");
    o.require(pullpush_roundtrip(random_injection(rng, m, n), random_isotropic(rng, m).E), "injective roundtrip");
  }
  o.detail << "200 random pairs, 50 surjective and 50 injective roundtrips";
  return o;
}

Outcome courant_algebra() {
  Outcome o;
  std::mt19937_64 rng(4);
  for (int t = 0; t < 50; ++t) {
    const std::size_t m = 1 + t % 3;
    auto a = random_section(rng, m, 2), b = random_section(rng, m, 2), c = random_section(rng, m, 2);
    o.require(axiom_v_check(a, b, c).is_zero(), "axiom (v)");
    o.require(is_zero(flatten(leibniz_defect(a, random_polynomial(rng, m, 2), b))), "bracket with f b");
  }
  for (int t = 0; t < 30; ++t) {
    const std::size_t m = 2 + t % 3;
    auto theta = random_skew2(rng, m, 1);
    o.require(is_zero(flatten(graph_theta_bracket_defect(theta, random_field(rng, m, 1), random_field(rng, m, 1)))),
              "graph of theta bracket");
    auto P = random_skew2(rng, m, 1);
    auto a = random_form(rng, m, 1), b = random_form(rng, m, 1), c = random_form(rng, m, 1);
    o.require(gelfand_dorfman_defect(P, a, b, c).is_zero(), "Gelfand-Dorfman");
  }
  o.detail << "50 section triples, 30 theta and P samples";
  return o;
}

Outcome example_3d() {
  Outcome o;
  const auto doc = load_document(fixture("ex4_1"));
  const auto& s = doc.structure;
  o.require(check_integrability(s).passed, "integrable");
  const auto cf = normalize_frame(s, *doc.adapted);
  const auto& C = s.chart;
  o.require(strs(cf.cal_X, C) == strs(std::vector{s.E[0]}, C) && strs(cf.Xi, C) == strs(std::vector{s.E[1]}, C) &&
                strs(cf.cal_Y, C) == strs(std::vector{s.E_prime[2]}, C) &&
                strs(cf.Theta, C) == strs(std::vector{s.E_prime[3]}, C),
            "given frame is canonical");
  o.require(check_orthogonality_relations(cf).passed && check_leaf_conditions(cf).passed, "canonical relations");
  o.require(is_locally_decomposable(cf), "decomposable");
  const auto tr = transversal_structure(s, cf, Grid{});
  o.require(tr.structure.chart.names == std::vector<std::string>{"y", "z"}, "transversal chart");
  o.require(strs(tr.structure.E, tr.structure.chart) == std::vector<std::string>{"(0, dz)"}, "transversal = (0, dz)");
  o.require(evaluate_at(tr.structure, Vec(2, Rational(0))).E == Subspace::span(4, {Vec{0, 0, 0, 1}}), "at origin");
  o.require(tr.matches_pullback, "matches pullback");
  o.detail << "transversal E = " << str(tr.structure.E[0], tr.structure.chart);
  return o;
}

Outcome example_5d() {
  Outcome o;
  const auto doc = load_document(fixture("ex4_2"));
  const auto& s = doc.structure;
  const auto& C = s.chart;
  o.require(check_integrability(s).passed, "integrable");
  const auto cf = normalize_frame(s, *doc.adapted);
  o.require(rf_is(cf.alpha, {{0, 1}, {-1, 0}}), "alpha");
  o.require(rf_is(cf.alpha1, {{1, 0}, {0, 1}}), "alpha1");
  o.require(rf_is(cf.gamma, {{-1, 0}, {0, -1}}), "gamma");
  for (const auto* M : {&cf.A1, &cf.A2, &cf.B1, &cf.B2, &cf.beta, &cf.beta1, &cf.C2, &cf.L2, &cf.lambda})
    o.require(rf_zero(*M), "vanishing coefficients");
  o.require(strs(cf.cal_X, C) == strs(std::vector{s.E[0], s.E[1]}, C) && strs(cf.Xi, C) == strs(std::vector{s.E[2]}, C) &&
                strs(cf.cal_Y, C) == strs(std::vector{s.E_prime[3], s.E_prime[4]}, C) &&
                strs(cf.Theta, C) == strs(std::vector{s.E_prime[5], s.E_prime[6]}, C),
            "given frame is canonical");
  o.require(!is_locally_decomposable(cf), "not decomposable in the original chart");

  const auto tdoc = load_document(fixture("ex4_2_tilde"));
  const auto& t = tdoc.structure;
  o.require(check_integrability(t).passed, "tilde integrable");
  const auto tf = normalize_frame(t, *tdoc.adapted);
  const auto& T = t.chart;
  o.require(strs(tf.cal_X, T) == std::vector<std::string>{"(d/dxt1, dxt2)", "(d/dxt2, -dxt1)"}, "tilde X");
  o.require(strs(tf.Xi, T) == std::vector<std::string>{"(0, dzt)"}, "tilde Xi");
  o.require(strs(tf.cal_Y, T) == std::vector<std::string>{"(d/dyt1, 0)", "(d/dyt2, 0)"}, "tilde Y");
  o.require(strs(tf.Theta, T) == std::vector<std::string>{"(0, dyt1)", "(0, dyt2)"}, "tilde Theta");
  o.require(is_locally_decomposable(tf), "decomposable in the tilde chart");
  o.detail << "tilde X = " << str(tf.cal_X[0], T) << ", " << str(tf.cal_X[1], T);
  return o;
}

Outcome criteria_equivalence() {
  Outcome o;
  std::mt19937_64 rng(7);
  int theta = 0, P = 0, theta_no = 0, P_no = 0;
  for (int t = 0; t < 200 && (theta < 30 || P < 30); ++t) {
    const std::size_t m = 2 + static_cast<std::size_t>(t % 3);
    const std::size_t k = 1 + static_cast<std::size_t>(rng() % m);
    const Chart c = Chart::standard(m);
    std::vector<VectorField> S;
    std::vector<OneForm> Ss;
    for (std::size_t i = 0; i < k; ++i) {
      S.push_back(random_field(rng, m, 1));
      Ss.push_back(random_form(rng, m, 1));
    }
    const auto th = random_skew2(rng, m, 1), Pb = random_skew2(rng, m, 1);
    if (theta < 30) try {
        auto s = graph_theta(c, S, th);
        const bool a = check_integrability(s).passed;
        o.require(a == check_theta_condition(S, th).passed, "theta condition");
        theta_no += a ? 0 : 1;
        ++theta;
        random_graphs.push_back(std::move(s));
      } catch (const std::invalid_argument&) {
      }
    if (P < 30) try {
        auto s = graph_P(c, Ss, Pb);
        const bool a = check_integrability(s).passed;
        o.require(a == check_P_conditions(Ss, Pb).passed, "P conditions");
        P_no += a ? 0 : 1;
        ++P;
        random_graphs.push_back(std::move(s));
      } catch (const std::invalid_argument&) {
      }
  }
  o.require(theta + P >= 50, "at least 50 instances");
  o.detail << theta << " theta graphs (" << theta_no << " non-integrable), " << P << " P graphs (" << P_no
           << " non-integrable)";
  return o;
}

Outcome module_property() {
  Outcome o;
  std::size_t n = 0;
  std::vector<BigIsotropicStructure> suite = random_graphs;
  for (auto& [name, doc] : all_fixtures()) suite.push_back(doc.structure);
  for (const auto& s : suite)
    if (check_integrability(s).passed) {
      o.require(check_module_property(s).passed, "module property on structure " + std::to_string(n));
      ++n;
    }
  o.require(n > 0, "some integrable structures");
  o.detail << n << " integrable structures";
  return o;
}

Outcome hamiltonian() {
  Outcome o;
  const auto doc = load_document(fixture("symplectic_hamiltonians"));
  const auto& s = doc.structure;
  const auto& P = *doc.P;
  const std::size_t m = s.m();
  auto br = [&](const Polynomial& a, const Polynomial& b) {
    return poisson_bracket(s, a, sharp(P, d(a, m)), b, sharp(P, d(b, m)));
  };
  std::mt19937_64 rng(9);
  for (int t = 0; t < 20; ++t) {
    auto f = random_polynomial(rng, m, 2), h = random_polynomial(rng, m, 2), l = random_polynomial(rng, m, 2);
    o.require(is_hamiltonian(s, f, sharp(P, d(f, m))), "Hamiltonian field");
    o.require(br(f, br(h, l)) == br(br(f, h), l) + br(h, br(f, l)), "Leibniz identity");
    o.require((br(f, h) + br(h, f)).is_zero(), "skew symmetry");
  }
  o.detail << "20 random triples";
  return o;
}

Outcome reduction() {
  Outcome o;
  const auto doc = load_document(fixture("ex5_1_poisson_reduction"));
  const auto res = reduce(doc.structure, *doc.submanifold, *doc.foliation, Grid{});
  const auto& q = res.structure;
  Bivector P(2);
  P.set(0, 1, Polynomial(2, Rational(1)));
  const auto want = graph_P(Chart({"x1", "x2"}), {coordinate_form(2, 0), coordinate_form(2, 1)}, P);
  o.require(q.chart.names == want.chart.names, "quotient chart");
  o.require(same_span(q.E, want.E, 2), "E^red = graph(d1^d2)");
  o.require(check_tangent_free(q, Grid{}).passed, "E^red cap TQ = 0");
  o.require(res.pullback_roundtrip, "pi^* E^red = iota^* E");
  o.require(res.pushforward_matches && res.orthogonal_matches, "pushforward checks");
  o.require(check_integrability(q).passed, "integrable");
  o.detail << res.points_checked << " grid points, E^red = {" << str(q.E[0], q.chart) << ", " << str(q.E[1], q.chart)
           << "}";
  return o;
}

Outcome tangent_lift_check() {
  Outcome o;
  const auto base = load_document(fixture("ex4_1")).structure;
  const auto s = tangent_lift(base);
  const auto v = validate(s, Grid{-1, 1, 64});
  o.require(v.isotropy_failures.empty() && v.ok(), "isotropic");
  o.require(check_integrability(s).passed, "integrable");
  o.require(s.m() == 6 && s.k() == 4, "dimensions");
  o.detail << "tg(E) of rank " << s.k() << " on a " << s.m() << "-dimensional chart";
  return o;
}

Outcome regular_cross_check() {
  Outcome o;
  std::size_t n = 0;
  for (const auto& [name, doc] : all_fixtures()) {
    const auto rc = regular_criterion(doc.structure, Grid{-1, 1, 81});
    if (!rc.regular) continue;
    o.require(rc.criterion() == check_integrability(doc.structure).passed, name);
    ++n;
  }
  o.require(n > 0, "regular fixtures exist");
  o.detail << n << " regular fixtures";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"orthogonality algebra", orthogonality_algebra},
      {"Dirac extension", dirac_extension_check},
      {"transport formulas", transport},
      {"Courant algebra", courant_algebra},
      {"three-dimensional example", example_3d},
      {"five-dimensional example", example_5d},
      {"integrability criteria equivalence", criteria_equivalence},
      {"integrable implies module property", module_property},
      {"Hamiltonian formalism", hamiltonian},
      {"Poisson reduction", reduction},
      {"tangent lift", tangent_lift_check},
      {"regular criterion", regular_cross_check},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "exception: " << e.what();
    }
    failed += o.pass ? 0 : 1;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << i + 1 << "  " << criteria[i].first << "  ("
              << o.detail.str() << ")" << std::endl;
  }
  std::cout << criteria.size() - failed << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
