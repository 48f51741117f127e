// SPDX-License-Identifier: Apache-2.0
#include "runner.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace actwarp {

using ordered_json = nlohmann::ordered_json;

namespace {

const std::vector<std::pair<std::string, std::vector<std::string>>>& registry() {
  static const std::vector<std::pair<std::string, std::vector<std::string>>> reg = {
      {"structure", {}},
      {"estimate-ab", {"structure"}},
      {"slant", {"structure"}},
      {"certify-warped", {"structure"}},
      {"semi-slant", {"structure", "slant"}},
      {"gauss", {"structure"}},
      {"warped-connection", {}},
      {"factor-geometry", {"certify-warped"}},
      {"sff-identities", {"certify-warped", "semi-slant", "estimate-ab"}},
      {"obstruction-fiber-xi", {"structure", "estimate-ab"}},
      {"obstruction-slant-base", {"structure", "estimate-ab"}},
      {"gradient-bound", {"certify-warped", "semi-slant", "estimate-ab"}},
      {"trace-minimality", {"certify-warped", "semi-slant", "estimate-ab"}},
      {"curvature-bound", {"certify-warped", "semi-slant", "estimate-ab"}},
  };
  return reg;
}

ordered_json record_json(const ResidualRecord& r) {
  ordered_json j;
  j["label"] = r.label;
  j["kind"] = r.is_inequality ? "inequality" : "identity";
  if (r.is_inequality) {
    j["lhs"] = r.lhs;
    j["rhs"] = r.rhs;
    j["margin"] = r.margin;
    j["min_margin"] = r.min_margin;
  } else {
    j["max_residual"] = r.max_residual;
    j["mean_residual"] = r.mean_residual;
  }
  j["samples"] = r.samples;
  j["tolerance"] = r.tolerance;
  j["pass"] = r.pass;
  j["enforced"] = r.enforced;
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

ordered_json check_json(const CheckReport& rep) {
  ordered_json j;
  j["name"] = rep.name;
  j["status"] = rep.status;
  if (!rep.reason.empty()) j["reason"] = rep.reason;
  j["requested"] = rep.requested;
  j["pass"] = rep.pass();
  ordered_json recs = ordered_json::array();
  for (const auto& r : rep.records) recs.push_back(record_json(r));
  j["records"] = recs;
  if (!rep.meta.empty()) {
    ordered_json meta;
    for (const auto& [k, v] : rep.meta) meta[k] = v;
    j["meta"] = meta;
  }
  if (!rep.notes.empty()) {
    ordered_json notes;
    for (const auto& [k, v] : rep.notes) notes[k] = v;
    j["notes"] = notes;
  }
  return j;
}

struct Runner {
  const ScenarioConfig& cfg;
  const Scenario& sc;
  std::deque<CheckReport> reports;
  double alpha = 0.0, beta = 0.0;
  std::string ab_source = "declared";
  bool ab_resolved = false;
  std::optional<WarpedCertificate> cert;

  explicit Runner(const ScenarioConfig& c) : cfg(c), sc(c.scenario) {}

  const CheckReport* find(const std::string& name) const {
    for (const auto& r : reports)
      if (r.name == name || r.name.rfind(name + ":", 0) == 0) return &r;
    return nullptr;
  }

  void resolve_ab() {
    if (ab_resolved) return;
    if (sc.has_declared_ab) {
      alpha = sc.alpha;
      beta = sc.beta;
      ab_source = "declared";
    } else {
      AlphaBetaEstimate est = estimate_alpha_beta(sc.ambient, sc.sampling);
      alpha = est.alpha;
      beta = est.beta;
      ab_source = "estimated";
    }
    ab_resolved = true;
  }

  CheckReport dispatch(const std::string& name) {
    if (name == "structure") {
      Sampling s = sc.sampling;
      s.count = std::max(s.count, 100);
      return validate_structure(sc.ambient, s, 1e-9);
    }
    if (name == "estimate-ab") {
      resolve_ab();
      CheckReport rep;
      rep.name = "estimate-ab";
      AlphaBetaEstimate est = estimate_alpha_beta(sc.ambient, {std::max(sc.sampling.count, 200),
                                                               sc.sampling.seed});
      auto& r = rep.record("fit_residual");
      r.absorb(est.residual);
      r.samples = est.samples;
      r.finish(1e-7);
      rep.meta["alpha"] = est.alpha;
      rep.meta["beta"] = est.beta;
      if (sc.has_declared_ab) {
        auto& rc = rep.record("declared_consistency");
        rc.absorb(std::abs(est.alpha - sc.alpha) + std::abs(est.beta - sc.beta));
        rc.finish(1e-6);
        rep.meta["alpha_declared"] = sc.alpha;
        rep.meta["beta_declared"] = sc.beta;
      }
      return rep;
    }
    if (name == "slant") {
      if (!sc.immersion.splits || sc.immersion.splits->dtheta_basis.empty())
        fail(ErrorKind::MissingSplit, "no slant distribution declared");
      CheckReport rep;
      rep.name = "slant";
      SlantReport sl = slant_report(sc.ambient, sc.immersion,
                                    sc.immersion.splits->dtheta_basis, sc.sampling, sc.box);
      auto& r = rep.record("constancy");
      r.absorb(sl.residual);
      r.samples = sl.samples;
      r.finish(sc.tol_identity);
      if (sc.has_theta) {
        auto& rt = rep.record("theta_matches_declared");
        rt.absorb(std::abs(sl.theta - sc.theta));
        rt.finish(1e-6);
      }
      rep.meta["lambda"] = sl.lambda;
      rep.meta["theta"] = sl.theta;
      rep.notes["class"] = slant_class_name(sl.cls);
      if (sc.approximate) {
        for (auto& rec : rep.records) rec.enforced = false;
        rep.notes["mode"] = "approximate scenario: residuals reported, not enforced";
      }
      return rep;
    }
    if (name == "certify-warped") {
      cert = certify_warped(sc);
      return cert->report;
    }
    if (name == "semi-slant") {
      if (!sc.immersion.splits) fail(ErrorKind::MissingSplit, "no splits declared");
      return semi_slant_check(sc.ambient, sc.immersion, sc.has_theta ? sc.theta : -1.0,
                              sc.sampling, sc.box, sc.tol_identity, !sc.approximate);
    }
    if (name == "gauss") return check_gauss(sc);
    if (name == "warped-connection") {
      CheckReport merged;
      merged.name = "warped-connection";
      for (const WarpedProductSpec& spec : builtin_warped_specs()) {
        CheckReport one = check_warped_connection(spec, sc.sampling, sc.tol_identity);
        for (auto& r : one.records) {
          r.label = spec.name + "/" + r.label;
          merged.records.push_back(std::move(r));
        }
      }
      return merged;
    }
    if (name == "factor-geometry") return check_factor_geometry(sc);
    if (name == "sff-identities") {
      resolve_ab();
      return check_sff_identities(sc, alpha, beta);
    }
    if (name == "obstruction-fiber-xi") {
      resolve_ab();
      if (!cert) cert = certify_warped(sc);
      return check_obstruction_fiber_xi(sc, *cert, alpha, beta);
    }
    if (name == "obstruction-slant-base") {
      resolve_ab();
      if (!cert) cert = certify_warped(sc);
      return check_obstruction_slant_base(sc, *cert, alpha, beta);
    }
    if (name == "gradient-bound") {
      resolve_ab();
      return check_gradient_bound(sc, alpha, beta);
    }
    if (name == "trace-minimality") return check_trace_minimality(sc);
    if (name == "curvature-bound") {
      resolve_ab();
      return check_curvature_bound(sc, alpha, beta);
    }
    fail(ErrorKind::Validation, "unknown check '" + name + "'");
  }

  void run_one(const std::string& name, bool requested,
               const std::vector<std::string>& deps) {
    CheckReport rep;
    rep.name = name;
    rep.requested = requested;

    for (const std::string& dep : deps) {
      const CheckReport* d = find(dep);
      if (!d) continue;
      if (d->status == "skipped") {
        rep.status = "skipped";
        rep.reason = "prerequisite '" + dep + "' was skipped: " + d->reason;
        reports.push_back(std::move(rep));
        return;
      }
      if (!d->pass()) {
        rep.status = "skipped";
        rep.reason = "prerequisite '" + dep + "' failed";
        reports.push_back(std::move(rep));
        return;
      }
    }

    try {
      CheckReport out = dispatch(name);
      out.requested = requested;
      if (out.name.empty()) out.name = name;
      reports.push_back(std::move(out));
    } catch (const Error& e) {
      switch (e.kind()) {
        case ErrorKind::MissingSplit:
        case ErrorKind::MissingXi:
        case ErrorKind::Precondition:
          rep.status = "skipped";
          rep.reason = e.what();
          break;
        default:
          rep.status = "error";
          rep.reason = std::string(error_kind_name(e.kind())) + ": " + e.what();
          break;
      }
      reports.push_back(std::move(rep));
    }
  }
};

std::vector<std::string> resolve_closure(const std::vector<std::string>& requested) {
  std::vector<std::string> want = requested;
  if (want.empty() || (want.size() == 1 && want[0] == "all")) {
    want.clear();
    for (const auto& [name, deps] : registry()) want.push_back(name);
  }
  for (const std::string& name : want)
    if (!is_known_check(name)) fail(ErrorKind::Validation, "unknown check '" + name + "'");

  std::vector<std::string> closure = want;
  bool grew = true;
  while (grew) {
    grew = false;
    for (const auto& [name, deps] : registry()) {
      if (std::find(closure.begin(), closure.end(), name) == closure.end()) continue;
      for (const std::string& d : deps)
        if (std::find(closure.begin(), closure.end(), d) == closure.end()) {
          closure.push_back(d);
          grew = true;
        }
    }
  }
  return closure;
}

RunResult assemble(const ScenarioConfig& cfg, Runner& runner) {
  RunResult out;
  out.reports = std::move(runner.reports);
  out.alpha = runner.alpha;
  out.beta = runner.beta;
  out.ab_source = runner.ab_resolved ? runner.ab_source : "unresolved";

  bool any_fail = false, any_error = false;
  for (const auto& r : out.reports) {
    if (r.status == "error") any_error = true;
    if (!r.pass()) any_fail = true;
  }
  out.exit_code = any_error ? 2 : (any_fail ? 1 : 0);

  const Scenario& sc = cfg.scenario;
  ordered_json j;
  j["engine"] = {{"name", kEngineName}, {"version", kEngineVersion}};
  j["config"] = {{"label", cfg.label}, {"hash", cfg.hash}, {"scenario_id", sc.id}};
  j["seed"] = sc.sampling.seed;
  j["samples"] = sc.sampling.count;
  j["tolerances"] = {{"identity", sc.tol_identity}, {"inequality", sc.tol_inequality}};
  ordered_json scn;
  scn["ambient"] = sc.ambient.name;
  scn["ambient_dim"] = sc.ambient.dim;
  scn["submanifold_dim"] = sc.immersion.n;
  if (sc.has_theta) scn["theta"] = sc.theta;
  if (runner.ab_resolved) {
    scn["alpha"] = runner.alpha;
    scn["beta"] = runner.beta;
    scn["alpha_beta_source"] = runner.ab_source;
  }
  scn["approximate"] = sc.approximate;
  scn["laplacian_convention"] =
      "frame trace of (grad_e e)psi - e e psi; negative of the divergence form; "
      "warping Laplacian taken on the base factor";
  j["scenario"] = scn;
  ordered_json checks = ordered_json::array();
  for (const auto& r : out.reports) checks.push_back(check_json(r));
  j["checks"] = checks;
  j["exit_code"] = out.exit_code;
  out.json = j.dump(2) + "\n";

  std::ostringstream t;
  t << "scenario " << sc.id << " (ambient " << sc.ambient.name << ", dim "
    << sc.ambient.dim << " <- " << sc.immersion.n << ")\n";
  if (runner.ab_resolved)
    t << "type constants: alpha=" << runner.alpha << " beta=" << runner.beta << " ("
      << runner.ab_source << ")\n";
  for (const auto& r : out.reports) {
    t << (r.pass() ? "[pass] " : "[FAIL] ") << r.name;
    if (r.status != "ok") t << " (" << r.status << (r.reason.empty() ? "" : ": " + r.reason)
                            << ")";
    t << "\n";
    for (const auto& rec : r.records) {
      char buf[160];
      if (rec.is_inequality)
        std::snprintf(buf, sizeof buf, "  %-36s min margin % .3e  (tol %.1e, n=%d)%s",
                      rec.label.c_str(), rec.min_margin, rec.tolerance, rec.samples,
                      rec.pass ? "" : "  <-- FAIL");
      else
        std::snprintf(buf, sizeof buf, "  %-36s max %.3e mean %.3e (tol %.1e, n=%d)%s",
                      rec.label.c_str(), rec.max_residual, rec.mean_residual, rec.tolerance,
                      rec.samples, rec.pass ? "" : "  <-- FAIL");
      t << buf << "\n";
    }
    for (const auto& [k, v] : r.notes) t << "  note " << k << ": " << v << "\n";
  }
  t << "exit code " << out.exit_code << "\n";
  out.table = t.str();
  return out;
}

}  // namespace

std::vector<std::string> known_checks() {
  std::vector<std::string> out;
  for (const auto& [name, deps] : registry()) out.push_back(name);
  return out;
}

bool is_known_check(const std::string& name) {
  for (const auto& [n, deps] : registry())
    if (n == name) return true;
  return false;
}

RunResult run_checks(const ScenarioConfig& cfg, const std::vector<std::string>& requested) {
  std::vector<std::string> req = requested;
  if (req.empty()) req = cfg.scenario.checks;
  std::vector<std::string> closure = resolve_closure(req);
  Runner runner(cfg);
  for (const auto& [name, deps] : registry()) {
    if (std::find(closure.begin(), closure.end(), name) == closure.end()) continue;
    bool requested_directly =
        std::find(req.begin(), req.end(), name) != req.end() ||
        (req.size() == 1 && req[0] == "all") || req.empty();
    runner.run_one(name, requested_directly, deps);
  }
  return assemble(cfg, runner);
}

RunResult run_validate(const ScenarioConfig& cfg) { return run_checks(cfg, {"structure"}); }

RunResult run_estimate(const ScenarioConfig& cfg) {
  return run_checks(cfg, {"estimate-ab"});
}

RunResult run_analyze(const ScenarioConfig& cfg) {
  return run_checks(cfg, {"structure", "estimate-ab", "slant", "certify-warped", "semi-slant"});
}

RunResult run_sweep(const ScenarioConfig& cfg, const std::string& parameter,
                    const std::vector<double>& values) {
  if (values.empty()) fail(ErrorKind::Validation, "sweep needs at least one value");
  RunResult out;
  ordered_json rows = ordered_json::array();
  std::ostringstream t;
  t << "sweep " << parameter << " over " << values.size() << " values\n";
  bool all_pass = true;
  std::vector<double> coefficients;

  for (double v : values) {
    ordered_json row;
    row["value"] = v;
    if (parameter == "theta") {
      if (cfg.immersion_builtin != "semi_slant_warp")
        fail(ErrorKind::Validation, "theta sweep requires the semi_slant_warp builtin");
      if (!(v > 0.0 && v <= std::acos(0.0) + 1e-12))
        fail(ErrorKind::Validation, "theta value outside (0, pi/2]");
      ScenarioConfig step = cfg;
      int m = (cfg.scenario.ambient.dim - 1) / 2;
      Scenario rebuilt = make_semi_slant_scenario(m, v, cfg.epsilon, cfg.scenario.sampling.seed);
      rebuilt.sampling = cfg.scenario.sampling;
      rebuilt.tol_identity = cfg.scenario.tol_identity;
      rebuilt.tol_inequality = cfg.scenario.tol_inequality;
      step.scenario = rebuilt;
      double coef = slant_bound_coefficient(v);
      row["coefficient"] = coef;
      coefficients.push_back(coef);
      RunResult r = run_checks(step, {"gradient-bound", "curvature-bound"});
      for (const auto& rep : r.reports) {
        if (rep.name == "gradient-bound" || rep.name == "curvature-bound") {
          const ResidualRecord* m2 = rep.find("margin");
          if (m2) row[rep.name + "_min_margin"] = m2->min_margin;
          row[rep.name + "_status"] = rep.status;
        }
      }
      row["pass"] = r.exit_code == 0;
      all_pass = all_pass && r.exit_code == 0;
    } else if (parameter == "warping-scale") {
      // scale the exponent of every builtin warped metric: f -> f^s
      double worst = 0.0;
      bool trivial = v == 0.0;
      for (WarpedProductSpec spec : builtin_warped_specs()) {
        spec.warping = v == 0.0 ? Expr::constant(1.0) : Expr::pow(spec.warping, v);
        CheckReport rep =
            check_warped_connection(spec, cfg.scenario.sampling, cfg.scenario.tol_identity);
        for (const auto& rec : rep.records)
          if (!rec.is_inequality) worst = std::max(worst, rec.max_residual);
        all_pass = all_pass && rep.pass();
      }
      row["max_identity_residual"] = worst;
      row["trivial"] = trivial;
      row["pass"] = worst <= cfg.scenario.tol_identity;
    } else if (parameter == "epsilon-perturbation") {
      if (cfg.immersion_builtin != "semi_slant_warp")
        fail(ErrorKind::Validation,
             "epsilon-perturbation sweep requires the semi_slant_warp builtin");
      ScenarioConfig step = cfg;
      int m = (cfg.scenario.ambient.dim - 1) / 2;
      Scenario rebuilt =
          make_semi_slant_scenario(m, cfg.scenario.theta, v, cfg.scenario.sampling.seed);
      rebuilt.sampling = cfg.scenario.sampling;
      step.scenario = rebuilt;
      step.epsilon = v;
      RunResult r = run_checks(step, {"gradient-bound", "curvature-bound"});
      for (const auto& rep : r.reports)
        if (rep.name == "gradient-bound" || rep.name == "curvature-bound") {
          const ResidualRecord* m2 = rep.find("margin");
          if (m2) {
            row[rep.name + "_min_margin"] = m2->min_margin;
            double worst = 0.0;
            for (double mg : m2->margin) worst = std::max(worst, mg);
            row[rep.name + "_max_margin"] = worst;
          }
        }
      row["approximate"] = v != 0.0;
      row["pass"] = r.exit_code == 0;
      all_pass = all_pass && r.exit_code == 0;
    } else {
      fail(ErrorKind::Validation, "unknown sweep parameter '" + parameter + "'");
    }
    rows.push_back(row);
    t << "  " << parameter << " = " << v << (row["pass"].get<bool>() ? "  pass" : "  FAIL")
      << "\n";
  }

  ordered_json j;
  j["engine"] = {{"name", kEngineName}, {"version", kEngineVersion}};
  j["config"] = {{"label", cfg.label}, {"hash", cfg.hash}, {"scenario_id", cfg.scenario.id}};
  j["seed"] = cfg.scenario.sampling.seed;
  j["sweep"] = parameter;
  j["rows"] = rows;
  if (parameter == "theta" && coefficients.size() > 1) {
    bool ascending = std::is_sorted(values.begin(), values.end());
    bool decreasing = true;
    for (size_t i = 1; i < coefficients.size(); ++i)
      decreasing = decreasing && coefficients[i] < coefficients[i - 1];
    if (ascending && decreasing) {
      j["notes"] = {{"coefficient", "decreasing across the ascending sweep"}};
      t << "note: bound coefficient decreases across the ascending sweep\n";
    }
  }
  out.exit_code = all_pass ? 0 : 1;
  j["exit_code"] = out.exit_code;
  out.json = j.dump(2) + "\n";
  t << "exit code " << out.exit_code << "\n";
  out.table = t.str();
  return out;
}

}  // namespace actwarp
