// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite: every release criterion of the engine evaluated at its
// stated tolerance, one pass/fail line each. Exit status is zero only when
// all criteria hold.
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

#include "runner.hpp"

using namespace actwarp;

namespace {

constexpr double kPi = std::numbers::pi;
int g_failures = 0;

void criterion(int id, const std::string& what, bool ok) {
  std::printf("%s criterion %2d: %s\n", ok ? "PASS" : "FAIL", id, what.c_str());
  if (!ok) ++g_failures;
}

std::string scen(const char* name) {
  return std::string(ACTWARP_SCENARIO_DIR) + "/" + name;
}

// Bounded random expression trees for the jet/difference comparison.
Expr random_expr(Rng& rng, int dim, int depth) {
  if (depth == 0) {
    if (rng.unit() < 0.5) return Expr::coord(static_cast<int>(rng.uniform(0, dim)));
    return Expr::constant(rng.uniform(-2.0, 2.0));
  }
  double pick = rng.unit();
  auto sub = [&] { return random_expr(rng, dim, depth - 1); };
  if (pick < 0.18) return sub() + sub();
  if (pick < 0.34) return sub() - sub();
  if (pick < 0.55) return sub() * sub();
  if (pick < 0.62) return sub() / (Expr::constant(2.0) + sub() * sub());
  if (pick < 0.72) return sin(sub());
  if (pick < 0.80) return cos(sub());
  if (pick < 0.86) return exp(Expr::constant(0.3) * sin(sub()));
  if (pick < 0.92) return log(Expr::constant(1.5) + sub() * sub());
  if (pick < 0.96) return sqrt(Expr::constant(1.5) + sub() * sub());
  return Expr::pow(sub(), static_cast<int>(rng.uniform(0, 4)));
}

bool check_structures() {
  for (const char* name : {"cosymplectic", "kenmotsu", "sasakian"}) {
    AlmostContactStructure s = builtin_ambient(name, 2);
    CheckReport rep = validate_structure(s, {120, 2024}, 1e-9);
    if (!rep.pass()) return false;
  }
  return true;
}

bool check_type_recovery() {
  struct Row {
    const char* name;
    double alpha, beta;
  };
  for (Row row : {Row{"cosymplectic", 0, 0}, Row{"kenmotsu", 0, 1}, Row{"sasakian", 1, 0}}) {
    AlmostContactStructure s = builtin_ambient(row.name, 2);
    AlphaBetaEstimate est = estimate_alpha_beta(s, {220, 99});
    if (std::abs(est.alpha - row.alpha) > 1e-6) return false;
    if (std::abs(est.beta - row.beta) > 1e-6) return false;
    if (est.residual > 1e-7) return false;
  }
  return true;
}

bool check_jets() {
  Rng rng(777);
  int accepted = 0;
  while (accepted < 1000) {
    int dim = 1 + static_cast<int>(rng.uniform(0, 3));
    Expr e = random_expr(rng, dim, 3);
    Vec p = rng.vector_pm1(dim);
    Jet ex, fd;
    try {
      ex = eval_jet(e, p, 2);
      fd = finite_difference_jet(e, p, 2, 7e-5);
    } catch (const Error&) {
      continue;
    }
    if (norm_inf(ex.coefficients()) > 50.0) continue;
    ++accepted;
    for (int k = 0; k < ex.space().size(); ++k) {
      double rel = std::abs(ex.coefficient(k) - fd.coefficient(k)) /
                   std::max(1.0, std::abs(ex.coefficient(k)));
      if (rel > 1e-5) return false;
    }
  }
  return true;
}

bool check_curvature_anchors() {
  MetricField sphere = MetricField::diagonal({parse_expr("1", 2), parse_expr("sin(x0)^2", 2)});
  CurvatureSample sc = riemann(sphere, Point{"sphere", {0.9, 0.7}});
  Vec u = {1.0, 0.0}, v = {0.0, 1.0};
  if (std::abs(sectional_curvature(sc, u, v) - 1.0) > 1e-8) return false;

  WarpedProductSpec strip = builtin_warped_specs()[0];
  MetricField g = build_warped_metric(strip);
  CurvatureSample hc = riemann(g, Point{"strip", {0.45, 0.2}});
  double k = sectional_curvature(hc, u, v);
  if (std::abs(k + 1.0) > 1e-8) return false;

  Point pb{"base", {0.45}};
  auto base_frame = coordinate_frame(strip.base.values_at(pb.coords));
  double lap = laplacian(strip.base, strip.warping, pb, base_frame);
  double ratio = lap / eval(strip.warping, pb.coords);
  if (std::abs(ratio - k) > 1e-7) return false;
  return std::abs(ratio + 1.0) < 1e-7 && std::abs(k + 1.0) < 1e-7;
}

bool check_gauss_suite() {
  std::vector<Scenario> scenarios;
  scenarios.push_back(make_sphere_scenario());
  scenarios.push_back(make_graph_scenario({0.31, -0.17, 0.23, 0.08, -0.12}));
  scenarios.push_back(make_semi_slant_scenario(3, kPi / 3));
  for (Scenario& sc : scenarios) {
    sc.sampling.count = 40;
    CheckReport rep = check_gauss(sc);
    if (!rep.pass()) return false;
    if (rep.find("shape_duality")->max_residual > 1e-8) return false;
  }
  return true;
}

bool check_slant_recovery() {
  for (double theta : {kPi / 6, kPi / 4, kPi / 3}) {
    Scenario sc = make_semi_slant_scenario(3, theta);
    SlantReport rep = slant_report(sc.ambient, sc.immersion, sc.immersion.splits->dtheta_basis,
                                   {40, 13}, sc.box);
    if (std::abs(rep.theta - theta) > 1e-9) return false;
    if (rep.residual > 1e-9) return false;
    if (rep.cls != SlantClass::ProperSlant) return false;
  }
  Scenario sc = make_semi_slant_scenario(3, kPi / 3);
  SlantReport inv = slant_report(sc.ambient, sc.immersion, sc.immersion.splits->d_basis,
                                 {40, 13}, sc.box);
  if (inv.cls != SlantClass::Invariant) return false;

  AlmostContactStructure amb = builtin_ambient("kenmotsu", 3);
  Immersion anti;
  anti.n = 5;
  anti.ambient_dim = 7;
  anti.map = {Expr::coord(0), Expr::coord(1), Expr::coord(2), Expr::coord(3),
              Expr::constant(0.0), Expr::coord(4), Expr::constant(0.0)};
  std::vector<std::vector<Expr>> basis;
  for (int axis : {3, 4}) {
    std::vector<Expr> v(5, Expr::constant(0.0));
    v[axis] = Expr::constant(1.0);
    basis.push_back(std::move(v));
  }
  SlantReport a = slant_report(amb, anti, basis, {40, 13}, sc.box);
  return a.cls == SlantClass::AntiInvariant;
}

bool check_warped_connection_suite() {
  for (const WarpedProductSpec& spec : builtin_warped_specs()) {
    CheckReport rep = check_warped_connection(spec, {100, 321}, 1e-8);
    if (!rep.pass()) return false;
  }
  return true;
}

bool check_sff_suite() {
  Scenario sc = make_semi_slant_scenario(3, kPi / 3);
  sc.sampling.count = 100;
  CheckReport rep = check_sff_identities(sc, 0.0, 1.0);
  for (const auto& r : rep.records)
    if (r.max_residual > 1e-8) return false;
  return rep.find("xi_log_warp")->max_residual <= 1e-12;
}

bool check_obstructions() {
  {
    Scenario sc = make_fiber_xi_candidate("kenmotsu");
    WarpedCertificate cert = certify_warped(sc);
    AlphaBetaEstimate est = estimate_alpha_beta(sc.ambient, {200, 5});
    CheckReport rep = check_obstruction_fiber_xi(sc, cert, est.alpha, est.beta);
    if (rep.status != "ok") return false;
    if (rep.meta.at("contradiction_ratio") < 0.1) return false;
    if (!rep.find("covariant_identity")->pass) return false;
  }
  {
    Scenario sc = make_slant_base_candidate("sasakian");
    WarpedCertificate cert = certify_warped(sc);
    AlphaBetaEstimate est = estimate_alpha_beta(sc.ambient, {200, 5});
    CheckReport rep = check_obstruction_slant_base(sc, cert, est.alpha, est.beta);
    if (rep.status != "ok") return false;
    if (rep.meta.at("contradiction_ratio") < 0.1) return false;
    if (!rep.find("covariant_identity")->pass) return false;
  }
  {
    Scenario sc = make_fiber_xi_candidate("cosymplectic");
    sc.warping = Expr::constant(1.0);
    WarpedCertificate cert = certify_warped(sc);
    AlphaBetaEstimate est = estimate_alpha_beta(sc.ambient, {200, 5});
    CheckReport rep = check_obstruction_fiber_xi(sc, cert, est.alpha, est.beta);
    if (rep.meta.at("contradiction_ratio") > 1e-7) return false;
    if (rep.notes.at("verdict").find("vacuous") == std::string::npos) return false;
  }
  {
    Scenario sc = make_slant_base_candidate("cosymplectic");
    WarpedCertificate cert = certify_warped(sc);
    AlphaBetaEstimate est = estimate_alpha_beta(sc.ambient, {200, 5});
    CheckReport rep = check_obstruction_slant_base(sc, cert, est.alpha, est.beta);
    if (rep.meta.at("contradiction_ratio") > 1e-7) return false;
    if (rep.notes.at("verdict").find("vacuous") == std::string::npos) return false;
  }
  return true;
}

bool check_gradient_bound_suite() {
  {
    Scenario sc = make_semi_slant_scenario(3, kPi / 3);
    sc.sampling.count = 60;
    CheckReport rep = check_gradient_bound(sc, 0.0, 1.0);
    const ResidualRecord* m = rep.find("margin");
    for (size_t i = 0; i < m->lhs.size(); ++i)
      if (std::abs(m->lhs[i]) > 1e-9 || std::abs(m->rhs[i]) > 1e-9) return false;
    for (const char* label : {"eq_invariant_block", "eq_slant_block",
                              "eq_mixed_outside_slant_normals", "eq_fiber_umbilical"})
      if (rep.find(label)->max_residual > 1e-7) return false;
  }
  {
    Scenario sc = make_semi_slant_scenario(3, kPi / 3, 0.1);
    sc.sampling.count = 60;
    CheckReport rep = check_gradient_bound(sc, 0.0, 1.0);
    if (rep.find("margin")->min_margin < -1e-7) return false;
  }
  return slant_bound_coefficient(kPi / 2) == 2.0;
}

bool check_trace_suite() {
  Scenario sc = make_semi_slant_scenario(3, kPi / 3);
  sc.sampling.count = 60;
  CheckReport rep = check_trace_minimality(sc);
  return rep.find("mean_vs_fiber_trace")->max_residual <= 1e-8 &&
         rep.find("base_partial_trace")->max_residual <= 1e-8;
}

bool check_curvature_bound_suite() {
  for (double eps : {0.0, 0.1}) {
    Scenario sc = make_semi_slant_scenario(3, kPi / 3, eps);
    sc.sampling.count = 50;
    CheckReport rep = check_curvature_bound(sc, 0.0, 1.0);
    if (rep.find("margin")->min_margin < -1e-7) return false;
    if (rep.find("h_norm_via_curvature_balance")->max_residual > 1e-7) return false;
  }
  return true;
}

bool check_determinism() {
  ScenarioConfig cfg = parse_config_file(scen("s1_kenmotsu.cfg"));
  cfg.scenario.sampling.count = 15;
  RunResult a = run_checks(cfg, {"all"});
  RunResult b = run_checks(cfg, {"all"});
  if (a.json != b.json) return false;
  if (a.exit_code != 0) return false;

  ScenarioConfig squeezed = cfg;
  squeezed.scenario.tol_identity = 1e-17;
  squeezed.scenario.tol_inequality = 1e-17;
  RunResult c = run_checks(squeezed, {"curvature-bound"});
  if (c.exit_code != 1) return false;

  try {
    run_checks(cfg, {"no-such-check"});
    return false;  // must raise the configuration error behind exit code 2
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Validation) return false;
  }
  return true;
}

}  // namespace

int main() {
  criterion(1, "structure axioms on all built-in ambients (residual < 1e-9)",
            check_structures());
  criterion(2, "type constants recovered within 1e-6, fit residual < 1e-7",
            check_type_recovery());
  criterion(3, "1000 random expressions: jets vs central differences < 1e-5",
            check_jets());
  criterion(4, "curvature anchors: sphere +1, strip -1, base laplacian ratio",
            check_curvature_anchors());
  criterion(5, "gauss relations < 1e-7 and shape duality < 1e-8 on three scenarios",
            check_gauss_suite());
  criterion(6, "slant recovery within 1e-9; invariant/anti-invariant classified",
            check_slant_recovery());
  criterion(7, "warped connection identities < 1e-8 on built-in metrics",
            check_warped_connection_suite());
  criterion(8, "mixed second-fundamental-form identities < 1e-8 on the warped scenario",
            check_sff_suite());
  criterion(9, "obstruction magnitudes >= 0.1|X|^2, vacuous in the flat model",
            check_obstructions());
  criterion(10, "gradient bound: equality at zero, perturbed margins, right-angle "
                "coefficient exactly 2",
            check_gradient_bound_suite());
  criterion(11, "mean-curvature trace identity and base-trace vanishing < 1e-8",
            check_trace_suite());
  criterion(12, "curvature bound margins >= -1e-7 with cross-validated right side",
            check_curvature_bound_suite());
  criterion(13, "byte-identical reports for fixed seed; exit-code contract",
            check_determinism());

  if (g_failures == 0) {
    std::printf("all 13 acceptance criteria hold\n");
    return 0;
  }
  std::printf("%d acceptance criteria failed\n", g_failures);
  return 1;
}
