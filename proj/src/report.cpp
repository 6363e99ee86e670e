#include "bigiso/report.hpp"

#include <chrono>
#include <functional>
#include <map>
#include <optional>

namespace bigiso {

namespace {

std::string pstr(const Polynomial& p, const Chart& c) { return p.with_nvars(c.dim()).str(c.names); }

Json points_json(const std::vector<Vec>& pts) {
  Json a = Json::array();
  for (const auto& p : pts) a.push_back(point_str(p));
  return a;
}

Json sections_json(const std::vector<BigSection>& frame, const Chart& c) {
  Json a = Json::array();
  for (const auto& s : frame) a.push_back(str(s, c));
  return a;
}

Json sections_json(const std::vector<RationalSection>& frame, const Chart& c) {
  Json a = Json::array();
  for (const auto& s : frame) a.push_back(str(s, c));
  return a;
}

Json matrix_json(const RFMatrix& M, const Chart& c) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < M.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < M.cols(); ++j) row.push_back(M(i, j).str(c.names));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json verdict_json(const Verdict& v) {
  Json j;
  j["passed"] = v.passed;
  j["failures"] = v.failures;
  return j;
}

Json names_json(const Chart& c, const std::vector<std::size_t>& idx) {
  Json a = Json::array();
  for (std::size_t i : idx) a.push_back(c.names[i]);
  return a;
}

struct Context {
  const StructureDocument& doc;
  const BigIsotropicStructure& s;
  Grid grid;
  std::uint64_t seed;

  std::optional<bool> integrable_;
  std::optional<CanonicalFrame> cf_;
  std::optional<std::string> cf_error_;
  std::map<std::string, bool> verdicts;

  const Chart& chart() const { return s.chart; }
  bool integrable() {
    if (!integrable_) integrable_ = check_integrability(s).passed;
    return *integrable_;
  }
  const CanonicalFrame* frame() {
    if (!doc.adapted) throw MissingBlockError("this command needs an 'adapted:' block");
    if (!cf_ && !cf_error_) {
      try {
        cf_ = normalize_frame(s, *doc.adapted);
      } catch (const ChartNotAdaptedError& e) {
        cf_error_ = std::string("chart not adapted: ") + e.what();
      } catch (const NormalizationError& e) {
        cf_error_ = std::string("normalization failed: ") + e.what();
      }
    }
    return cf_ ? &*cf_ : nullptr;
  }
  SubmanifoldData submanifold() const {
    return doc.submanifold ? *doc.submanifold : SubmanifoldData::identity(s.chart);
  }
  const FoliationData& foliation() const {
    if (!doc.foliation) throw MissingBlockError("this command needs a 'foliation:' block");
    return *doc.foliation;
  }
};

Json failed_with(Json j, const std::string& error) {
  j["passed"] = false;
  j["error"] = error;
  return j;
}

Json check_valid(Context& c) {
  const auto r = validate(c.s, c.grid);
  Json j;
  j["passed"] = r.ok();
  j["frame_counts_ok"] = r.frame_counts_ok;
  j["generic_rank_E"] = r.generic_rank_E;
  j["generic_rank_E_prime"] = r.generic_rank_E_prime;
  j["certification"] = r.certification;
  j["points_checked"] = r.points_checked;
  auto fails = [&](const std::vector<PolyFailure>& fs) {
    Json a = Json::array();
    for (const auto& f : fs) a.push_back(Json{{"i", f.i}, {"j", f.j}, {"value", pstr(f.value, c.chart())}});
    return a;
  };
  j["isotropy_failures"] = fails(r.isotropy_failures);
  j["orthogonality_failures"] = fails(r.orthogonality_failures);
  j["E_not_in_E_prime"] = r.E_not_in_E_prime;
  j["degenerate_points"] = points_json(r.degenerate_points);
  j["orthogonal_mismatch_points"] = points_json(r.orthogonal_mismatch_points);
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> table;
  for (const auto& pt : c.grid.points(c.s.m())) {
    try {
      const auto d = evaluate_at(c.s, pt);
      const auto t = characteristic_triple(d);
      ++table[{t.cal_E.dim(), t.cal_E_prime.dim()}];
    } catch (const std::exception&) {
    }
  }
  Json dims = Json::array();
  for (const auto& [k, n] : table) dims.push_back(Json{{"dim_cal_E", k.first}, {"dim_cal_E_prime", k.second}, {"points", n}});
  j["dimension_table"] = dims;
  return j;
}

Json closure_json(const IntegrabilityReport& r, const Chart& c) {
  Json j;
  j["passed"] = r.passed;
  j["pairs_checked"] = r.pairs_checked;
  j["certification"] = r.certification;
  Json a = Json::array();
  for (const auto& w : r.failures)
    a.push_back(Json{{"pair", {w.i, w.j}}, {"bracket", str(w.bracket, c)}, {"minor", pstr(w.minor, c)}, {"column", w.column}});
  j["failures"] = a;
  return j;
}

Json check_integrable(Context& c) {
  const auto r = check_integrability(c.s);
  c.integrable_ = r.passed;
  return closure_json(r, c.chart());
}

Json check_module(Context& c) {
  Json j = closure_json(check_module_property(c.s), c.chart());
  if (c.integrable()) {
    std::mt19937_64 rng(c.seed);
    const auto v = verify_modular_enlargement(c.s, rng);
    j["modular_enlargement"] = verdict_json(v);
    j["passed"] = j["passed"].get<bool>() && v.passed;
  }
  return j;
}

Json check_dirac(Context& c) {
  Json j;
  std::size_t n = 0;
  std::vector<Vec> bad;
  for (const auto& pt : c.grid.points(c.s.m())) {
    IsotropicData d;
    try {
      d = evaluate_at(c.s, pt);
    } catch (const DegeneratePointError&) {
      continue;
    }
    ++n;
    const auto D = dirac_extension(d);
    if (D.dim() != c.s.m() || !D.contains(d.E) || !d.E_prime.contains(D)) bad.push_back(pt);
  }
  j["passed"] = bad.empty();
  j["points_checked"] = n;
  j["failure_points"] = points_json(bad);
  return j;
}

Json check_regular(const RegularCheck& rc) {
  Json j;
  j["passed"] = rc.criterion();
  j["involutive"] = rc.involutive;
  j["invariant"] = rc.invariant;
  j["dtr_closed"] = rc.dtr_closed;
  return j;
}

Json check_hamiltonian(Context& c) {
  Json j;
  Json fs = Json::array();
  bool ok = true;
  for (const auto& h : c.doc.hamiltonians) {
    const bool ham = is_hamiltonian(c.s, h.f, h.X);
    ok = ok && ham;
    fs.push_back(Json{{"name", h.name}, {"hamiltonian", ham}, {"weak", is_weak_hamiltonian(c.s, h.f, h.X)}});
  }
  Json br = Json::array();
  const auto& hs = c.doc.hamiltonians;
  for (std::size_t a = 0; a < hs.size(); ++a)
    for (std::size_t b = a + 1; b < hs.size(); ++b) {
      if (!is_hamiltonian(c.s, hs[a].f, hs[a].X) || !is_hamiltonian(c.s, hs[b].f, hs[b].X)) continue;
      const auto fg = poisson_bracket(c.s, hs[a].f, hs[a].X, hs[b].f, hs[b].X);
      const auto gf = poisson_bracket(c.s, hs[b].f, hs[b].X, hs[a].f, hs[a].X);
      const bool skew = (fg + gf).is_zero();
      ok = ok && skew;
      br.push_back(Json{{"pair", {hs[a].name, hs[b].name}}, {"bracket", pstr(fg, c.chart())}, {"skew", skew}});
    }
  j["passed"] = ok;
  j["functions"] = fs;
  j["brackets"] = br;
  return j;
}

Json check_canonical(Context& c) {
  Json j;
  const auto* cf = c.frame();
  if (!cf) return failed_with(j, *c.cf_error_);
  const auto& ch = cf->chart;
  const auto& C = ch.chart;
  const auto rel = check_orthogonality_relations(*cf);
  const auto leaf = check_leaf_conditions(*cf);
  j["passed"] = rel.passed && leaf.passed;
  j["adapted"] = Json{{"x", names_json(C, ch.x)}, {"y", names_json(C, ch.y)}, {"z", names_json(C, ch.z)}};
  j["denominator_E"] = pstr(cf->denominator_E, C);
  j["denominator_E_prime"] = pstr(cf->denominator_E_prime, C);
  Json co;
  co["A1"] = matrix_json(cf->A1, C);
  co["A2"] = matrix_json(cf->A2, C);
  co["alpha"] = matrix_json(cf->alpha, C);
  co["alpha1"] = matrix_json(cf->alpha1, C);
  co["B1"] = matrix_json(cf->B1, C);
  co["B2"] = matrix_json(cf->B2, C);
  co["beta"] = matrix_json(cf->beta, C);
  co["beta1"] = matrix_json(cf->beta1, C);
  co["C2"] = matrix_json(cf->C2, C);
  co["gamma"] = matrix_json(cf->gamma, C);
  co["L2"] = matrix_json(cf->L2, C);
  co["lambda"] = matrix_json(cf->lambda, C);
  j["coefficients"] = co;
  j["sections"] = Json{{"X", sections_json(cf->cal_X, C)},
                       {"Xi", sections_json(cf->Xi, C)},
                       {"Y", sections_json(cf->cal_Y, C)},
                       {"Theta", sections_json(cf->Theta, C)}};
  j["orthogonality_relations"] = verdict_json(rel);
  j["leaf_conditions"] = verdict_json(leaf);
  return j;
}

Json check_decomposable(Context& c) {
  Json j;
  const auto* cf = c.frame();
  if (!cf) return failed_with(j, *c.cf_error_);
  j["passed"] = is_locally_decomposable(*cf);
  j["alpha1"] = matrix_json(cf->alpha1, cf->chart.chart);
  return j;
}

Json check_coupling(Context& c) {
  Json j;
  const auto* cf = c.frame();
  if (!cf) return failed_with(j, *c.cf_error_);
  const auto r = coupling_equivalences(c.s, *cf, c.grid);
  j["passed"] = r.passed();
  j["points_checked"] = r.points_checked;
  j["equivalences_hold"] = r.equivalences_hold;
  j["decomposition_holds"] = r.decomposition_holds;
  j["failures"] = r.failures;
  return j;
}

Json check_transversal(Context& c) {
  Json j;
  const auto* cf = c.frame();
  if (!cf) return failed_with(j, *c.cf_error_);
  try {
    const auto t = transversal_structure(c.s, *cf, c.grid);
    const bool integ = check_integrability(t.structure).passed;
    j["passed"] = t.matches_pullback && (integ || !c.integrable());
    j["chart"] = t.structure.chart.names;
    j["E"] = sections_json(t.structure.E, t.structure.chart);
    j["E_prime"] = sections_json(t.structure.E_prime, t.structure.chart);
    j["points_checked"] = t.points_checked;
    j["matches_pullback"] = t.matches_pullback;
    j["graph_type"] = t.graph_type;
    j["integrable"] = integ;
  } catch (const TransversalError& e) {
    return failed_with(j, e.what());
  }
  return j;
}

Json check_reducible(Context& c) {
  const auto N = c.submanifold();
  const auto r = check_reducibility(c.s, N, c.foliation(), c.grid);
  Json j;
  j["passed"] = r.verdict.passed;
  j["submanifold"] = N.chart.names;
  j["leaves"] = names_json(c.foliation().chart, c.foliation().leaf);
  j["points_checked"] = r.points_checked;
  j["formulations_agree"] = r.formulations_agree;
  j["failures"] = r.verdict.failures;
  return j;
}

Json proper_error_json(Json j, const ProperError& e) {
  j = failed_with(std::move(j), e.what());
  j["points"] = {point_str(e.first()), point_str(e.second())};
  return j;
}

Json check_projectable_restricted(Context& c) {
  Json j;
  try {
    const auto r = restrict_to(c.s, c.submanifold(), c.grid);
    const auto p = check_projectable(r.structure, c.foliation());
    j["passed"] = p.passed();
    j["restricted_E"] = sections_json(r.structure.E, r.structure.chart);
    j["dim_S"] = r.dim_S;
    j["dim_S_prime"] = r.dim_S_prime;
    j["contains_leaves"] = p.contains_leaves;
    j["automorphisms"] = p.automorphisms;
    j["failures"] = p.verdict.failures;
  } catch (const ProperError& e) {
    return proper_error_json(j, e);
  }
  return j;
}

Json check_reduction(Context& c) {
  Json j;
  try {
    const auto res = reduce(c.s, c.submanifold(), c.foliation(), c.grid);
    const auto& q = res.structure;
    const bool integ = check_integrability(q).passed;
    j["passed"] = res.passed() && (integ || !c.integrable());
    j["frame_source"] = res.frame_source;
    j["chart"] = q.chart.names;
    j["E"] = sections_json(q.E, q.chart);
    j["E_prime"] = sections_json(q.E_prime, q.chart);
    j["points_checked"] = res.points_checked;
    j["pullback_roundtrip"] = res.pullback_roundtrip;
    j["pushforward_matches"] = res.pushforward_matches;
    j["orthogonal_matches"] = res.orthogonal_matches;
    j["integrable"] = integ;
    j["tangent_free"] = check_tangent_free(q, c.grid).passed;
    j["failure_points"] = points_json(res.failure_points);
  } catch (const ProperError& e) {
    return proper_error_json(j, e);
  } catch (const ReductionError& e) {
    return failed_with(j, e.what());
  }
  return j;
}

struct Runner {
  Context& ctx;
  bool timing;
  Json checks = Json::array();

  void run(const std::string& name, const std::function<Json(Context&)>& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    Json body;
    try {
      body = fn(ctx);
    } catch (const MissingBlockError&) {
      throw;
    } catch (const std::exception& e) {
      body = failed_with(Json::object(), e.what());
    }
    Json j;
    j["check"] = name;
    j["passed"] = body.value("passed", false);
    for (auto it = body.begin(); it != body.end(); ++it)
      if (it.key() != "passed") j[it.key()] = it.value();
    if (timing)
      j["timing_ms"] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    ctx.verdicts[name] = j["passed"].get<bool>();
    checks.push_back(std::move(j));
  }
};

void run_consistency(Runner& r) {
  auto& c = r.ctx;
  r.run("consistency", [&](Context&) {
    Json rel = Json::array();
    bool ok = true;
    auto add = [&](const std::string& text, bool holds) {
      rel.push_back(Json{{"relation", text}, {"holds", holds}});
      ok = ok && holds;
    };
    const auto& v = c.verdicts;
    auto has = [&](const std::string& k) { return v.count(k) > 0; };
    const bool integ = c.integrable();
    if (has("module_property")) add("integrable implies module property", !integ || v.at("module_property"));
    if (has("theta_condition")) add("theta condition equals integrability", v.at("theta_condition") == integ);
    if (has("P_conditions")) add("P conditions equal integrability", v.at("P_conditions") == integ);
    if (has("regular_criterion")) add("regular criterion equals integrability", v.at("regular_criterion") == integ);
    if (c.doc.foliation && (c.doc.construct == "dirac_P" || c.doc.construct == "dirac_omega")) {
      const bool proj = check_projectable(c.s, *c.doc.foliation).passed();
      const std::string key = c.doc.construct == "dirac_P" ? "P_projectable" : "omega_foliated";
      if (has(key)) add("projectability of the structure equals " + key, proj == v.at(key));
    }
    if (has("reducible") && has("reduction"))
      add("integrable and reducible implies reduction", !(integ && v.at("reducible")) || v.at("reduction"));
    if (has("decomposable") && has("coupling")) add("coupling equivalences hold", v.at("coupling"));
    Json j;
    j["passed"] = ok;
    j["relations"] = rel;
    return j;
  });
}

}  // namespace

const std::vector<std::string>& commands() {
  static const std::vector<std::string> names = {"validate", "integrability", "canonical", "decomposable",
                                                 "transversal", "reduce", "report-all"};
  return names;
}

Json input_error_report(const std::string& command, const std::string& source, const std::string& message,
                        std::size_t line, std::size_t column) {
  Json j;
  j["tool"] = "bigiso";
  j["command"] = command;
  j["source"] = source;
  Json e;
  e["message"] = message;
  if (line > 0) {
    e["line"] = line;
    e["column"] = column;
  }
  j["error"] = e;
  j["passed"] = false;
  j["exit_code"] = static_cast<int>(exit_input_error);
  return j;
}

RunResult run_command(const std::string& command, const StructureDocument& doc, const std::string& source,
                      const RunOptions& opt) {
  const auto& cmds = commands();
  if (std::find(cmds.begin(), cmds.end(), command) == cmds.end())
    throw std::invalid_argument("unknown command '" + command + "'");
  Context ctx{doc, doc.structure, opt.grid_from_flag || !doc.grid ? opt.grid : *doc.grid, opt.seed, {}, {}, {}, {}};
  Runner r{ctx, opt.timing};
  const bool all = command == "report-all";

  if (command == "canonical" || command == "decomposable" || command == "transversal") {
    if (!doc.adapted) throw MissingBlockError(command + " needs an 'adapted:' block");
  }
  if (command == "reduce" && !doc.foliation) throw MissingBlockError("reduce needs a 'foliation:' block");

  if (command == "validate" || all) r.run("valid", check_valid);
  if (command == "integrability" || all) {
    r.run("integrable", check_integrable);
    r.run("module_property", check_module);
  }
  if (all) {
    r.run("dirac_extension", check_dirac);
    RegularCheck rc;
    try {
      rc = regular_criterion(doc.structure, ctx.grid);
    } catch (const std::exception&) {
    }
    if (rc.regular) r.run("regular_criterion", [&](Context&) { return check_regular(rc); });
    if (doc.construct == "graph_theta")
      r.run("theta_condition", [&](Context&) { return verdict_json(check_theta_condition(doc.S, *doc.theta)); });
    if (doc.construct == "graph_P")
      r.run("P_conditions", [&](Context&) { return verdict_json(check_P_conditions(doc.S_star, *doc.P)); });
    if (doc.construct == "dirac_P" && doc.foliation)
      r.run("P_projectable", [&](Context&) { return verdict_json(bivector_projectable(*doc.foliation, *doc.P)); });
    if (doc.construct == "dirac_omega" && doc.foliation)
      r.run("omega_foliated", [&](Context&) { return verdict_json(form_foliated(*doc.foliation, *doc.omega)); });
    if (!doc.hamiltonians.empty()) r.run("hamiltonian", check_hamiltonian);
  }
  if (command == "canonical" || (all && doc.adapted)) r.run("canonical", check_canonical);
  if (command == "decomposable" || (all && doc.adapted)) {
    r.run("decomposable", check_decomposable);
    r.run("coupling", check_coupling);
  }
  if (command == "transversal" || (all && doc.adapted)) r.run("transversal", check_transversal);
  if (command == "reduce" || (all && doc.foliation)) {
    r.run("reducible", check_reducible);
    r.run("projectable", check_projectable_restricted);
    r.run("reduction", check_reduction);
  }
  if (all) run_consistency(r);

  bool passed = true;
  if (all) {
    for (auto& j : r.checks) {
      const auto exp = doc.expected(j["check"].get<std::string>());
      const bool got = j["passed"].get<bool>();
      if (exp) j["expected"] = *exp;
      const bool as_expected = exp ? got == *exp : got;
      j["as_expected"] = as_expected;
      passed = passed && as_expected;
    }
    for (const auto& e : doc.expectations)
      if (!ctx.verdicts.count(e.check)) {
        r.checks.push_back(Json{{"check", e.check}, {"passed", false}, {"error", "expectation on line " +
                                std::to_string(e.line) + " refers to a check that did not run"}, {"as_expected", false}});
        passed = false;
      }
  } else {
    for (const auto& j : r.checks) passed = passed && j["passed"].get<bool>();
  }

  RunResult out;
  out.exit_code = passed ? exit_pass : exit_check_failed;
  Json& j = out.report;
  j["tool"] = "bigiso";
  j["command"] = command;
  j["source"] = source;
  j["name"] = doc.name;
  j["chart"] = doc.structure.chart.names;
  j["dimension"] = doc.structure.m();
  j["rank_E"] = doc.structure.k();
  j["grid"] = Json{{"lo", ctx.grid.lo}, {"hi", ctx.grid.hi}, {"cap", ctx.grid.cap}};
  j["seed"] = opt.seed;
  j["checks"] = std::move(r.checks);
  j["passed"] = passed;
  j["exit_code"] = out.exit_code;
  return out;
}

}  // namespace bigiso
