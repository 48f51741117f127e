// SPDX-License-Identifier: Apache-2.0
#include "warped.hpp"

#include <algorithm>
#include <cmath>

namespace actwarp {

MetricField build_warped_metric(const WarpedProductSpec& spec) {
  int n1 = spec.n1(), n = spec.dim();
  if (spec.warping.min_dim() > n1)
    fail(ErrorKind::Validation, "warping depends on fiber coordinates");
  // probe positivity on the base box corners and centre
  {
    Vec lo(n1), hi(n1), mid(n1);
    for (int i = 0; i < n1; ++i) {
      lo[i] = spec.box[i].first;
      hi[i] = spec.box[i].second;
      mid[i] = 0.5 * (lo[i] + hi[i]);
    }
    for (const Vec& probe : {lo, hi, mid})
      if (eval(spec.warping, probe) <= 0.0)
        fail(ErrorKind::Validation, "warping is not positive on the sampling box");
  }

  std::vector<Expr> full(static_cast<size_t>(n) * n, Expr::constant(0.0));
  for (int i = 0; i < n1; ++i)
    for (int j = i; j < n1; ++j)
      full[static_cast<size_t>(i) * n + j] = full[static_cast<size_t>(j) * n + i] =
          spec.base.entry(i, j);
  Expr f2 = spec.warping * spec.warping;
  for (int a = 0; a < spec.n2(); ++a)
    for (int b = a; b < spec.n2(); ++b) {
      Expr e = f2 * spec.fiber.entry(a, b).shift_coords(n1);
      full[static_cast<size_t>(n1 + a) * n + (n1 + b)] =
          full[static_cast<size_t>(n1 + b) * n + (n1 + a)] = e;
    }
  return MetricField::from_full(n, full);
}

bool warping_is_constant(const WarpedProductSpec& spec) {
  return spec.warping.is_constant();
}

std::vector<WarpedProductSpec> builtin_warped_specs() {
  std::vector<WarpedProductSpec> out;
  {
    WarpedProductSpec s;
    s.name = "line_exp_line";
    s.base = MetricField::euclidean(1);
    s.fiber = MetricField::euclidean(1);
    s.warping = parse_expr("exp(x0)", 1);
    s.box = {{-1, 1}, {-2, 2}};
    out.push_back(std::move(s));
  }
  {
    WarpedProductSpec s;
    s.name = "line_exp_plane";
    s.base = MetricField::euclidean(1);
    s.fiber = MetricField::euclidean(2);
    s.warping = parse_expr("exp(x0)", 1);
    s.box = {{-1, 1}, {-2, 2}, {-2, 2}};
    out.push_back(std::move(s));
  }
  {
    WarpedProductSpec s;
    s.name = "line_exp_sphere";
    s.base = MetricField::euclidean(1);
    s.fiber = MetricField::diagonal({parse_expr("1", 2), parse_expr("sin(x0)^2", 2)});
    s.warping = parse_expr("exp(x0)", 1);
    s.box = {{-1, 1}, {0.4, 2.7}, {-2, 2}};
    out.push_back(std::move(s));
  }
  {
    WarpedProductSpec s;
    s.name = "plane_mixed_plane";
    s.base = MetricField::euclidean(2);
    s.fiber = MetricField::euclidean(2);
    s.warping = parse_expr("exp(0.5*x0 + 0.25*x1)", 2);
    s.box = {{-1, 1}, {-1, 1}, {-2, 2}, {-2, 2}};
    out.push_back(std::move(s));
  }
  {
    WarpedProductSpec s;
    s.name = "trivial_product";
    s.base = MetricField::euclidean(1);
    s.fiber = MetricField::euclidean(1);
    s.warping = Expr::constant(1.0);
    s.box = {{-1, 1}, {-2, 2}};
    out.push_back(std::move(s));
  }
  return out;
}

namespace {

Vec masked(const Vec& v, const std::vector<int>& idx, int n) {
  Vec out(n, 0.0);
  for (size_t k = 0; k < idx.size(); ++k) out[idx[k]] = v[idx[k]];
  return out;
}

Vec random_in_indices(Rng& rng, const std::vector<int>& idx, int n) {
  Vec out(n, 0.0);
  for (int i : idx) out[i] = rng.uniform(-1.0, 1.0);
  return out;
}

}  // namespace

CheckReport check_warped_connection(const WarpedProductSpec& spec, const Sampling& sampling,
                                    double tol) {
  CheckReport rep;
  rep.name = "warped-connection:" + spec.name;
  MetricField g = build_warped_metric(spec);
  int n1 = spec.n1(), n2 = spec.n2(), n = spec.dim();
  std::vector<int> base_idx(n1), fiber_idx(n2);
  for (int i = 0; i < n1; ++i) base_idx[i] = i;
  for (int a = 0; a < n2; ++a) fiber_idx[a] = n1 + a;

  auto& r_base = rep.record("base_parallel");
  auto& r_mixed = rep.record("mixed_scaling");
  auto& r_fiber = rep.record("fiber_split");
  auto& r_curv = rep.record("fiber_curvature_sum");
  auto& r_grad = rep.record("log_gradient_blocks");
  auto& r_lap = rep.record("log_laplacian_blocks");
  auto& r_triv = rep.record("trivial_detector");

  Rng rng(derive_seed(sampling.seed, "warped-connection"));
  double max_xlogf = 0.0;
  for (int t = 0; t < sampling.count; ++t) {
    Vec p = rng.point_in(spec.box);
    Vec pb(p.begin(), p.begin() + n1);
    Vec pf(p.begin() + n1, p.end());
    Point pt{"product", p};
    ConnectionSample conn = christoffel(g, pt);

    Jet fj = eval_jet(spec.warping, pb, 1);
    double fval = fj.value();
    Vec df(n1);
    for (int i = 0; i < n1; ++i) df[i] = fj.partial(i);
    Mat base_g = spec.base.values_at(pb);
    Vec grad_f = inverse(base_g).apply(df);

    Vec X = random_in_indices(rng, base_idx, n);
    Vec Y = random_in_indices(rng, base_idx, n);
    Vec Z = random_in_indices(rng, fiber_idx, n);
    Vec W = random_in_indices(rng, fiber_idx, n);

    auto nabla = [&](const Vec& u, const Vec& v) {
      Vec out(n, 0.0);
      for (int k = 0; k < n; ++k) {
        double s = 0.0;
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) s += conn.gamma_at(k, i, j) * u[i] * v[j];
        out[k] = s;
      }
      return out;
    };

    // (base, base) derivatives stay in the base block
    Vec nXY = nabla(X, Y);
    double worst = 0.0;
    for (int a : fiber_idx) worst = std::max(worst, std::abs(nXY[a]));
    r_base.absorb(worst);

    // mixed derivatives scale by X log f
    double xlogf = 0.0;
    for (int i = 0; i < n1; ++i) xlogf += X[i] * df[i] / fval;
    Vec nXZ = nabla(X, Z);
    worst = 0.0;
    for (int k = 0; k < n; ++k) worst = std::max(worst, std::abs(nXZ[k] - xlogf * Z[k]));
    r_mixed.absorb(worst);

    // fiber-fiber derivatives: fiber connection minus scaled base gradient
    ConnectionSample conn2 = christoffel(spec.fiber, Point{"fiber", pf});
    Mat gv = g.values_at(p);
    double gZW = dot_g(gv, Z, W);
    Vec rhs(n, 0.0);
    for (int c = 0; c < n2; ++c) {
      double s = 0.0;
      for (int a = 0; a < n2; ++a)
        for (int b = 0; b < n2; ++b) s += conn2.gamma_at(c, a, b) * Z[n1 + a] * W[n1 + b];
      rhs[n1 + c] = s;
    }
    for (int i = 0; i < n1; ++i) rhs[i] -= gZW / fval * grad_f[i];
    Vec nZW = nabla(Z, W);
    worst = 0.0;
    for (int k = 0; k < n; ++k) worst = std::max(worst, std::abs(nZW[k] - rhs[k]));
    r_fiber.absorb(worst);

    max_xlogf = std::max(max_xlogf, std::abs(xlogf));
  }

  // Curvature sum across the blocks versus the base Laplacian of f, and the
  // block consistency of grad(log f); a handful of points suffices.
  Rng rng2(derive_seed(sampling.seed, "warped-connection-curv"));
  for (int t = 0; t < std::min(sampling.count, 12); ++t) {
    Vec p = rng2.point_in(spec.box);
    Vec pb(p.begin(), p.begin() + n1);
    Point pt{"product", p};
    CurvatureSample curv = riemann(g, pt);
    auto frame = coordinate_frame(curv.g);

    Point ptb{"base", pb};
    auto base_frame = coordinate_frame(spec.base.values_at(pb));
    double lap = laplacian(spec.base, spec.warping, ptb, base_frame);
    double fval = eval(spec.warping, pb);

    for (int j = n1; j < n; ++j) {
      double ksum = 0.0;
      for (int i = 0; i < n1; ++i)
        ksum += sectional_curvature(curv, frame[i], frame[j]);
      r_curv.absorb(std::abs(ksum - lap / fval));
    }

    Expr logf = log(spec.warping);
    Vec grad_full = gradient(g, logf, pt);
    Vec grad_base = gradient(spec.base, logf, ptb);
    double full_sq = dot_g(curv.g, grad_full, grad_full);
    double base_sq = dot_g(spec.base.values_at(pb), grad_base, grad_base);
    r_grad.absorb(std::abs(full_sq - base_sq));

    // the block-restricted trace on the product equals the factor Laplacian
    MetricJets mj{n, g.jets_at(p, 2)};
    Jet logf_jet = eval_jet(logf, p, 2);
    std::vector<int> base_axes(n1);
    for (int i = 0; i < n1; ++i) base_axes[i] = i;
    double lap_block = laplacian_on_axes(mj, logf_jet, base_axes);
    double lap_base = laplacian(spec.base, logf, ptb, base_frame);
    r_lap.absorb(std::abs(lap_block - lap_base));
  }

  bool structurally_constant = warping_is_constant(spec);
  bool sampled_constant = max_xlogf < 1e-10;
  r_triv.absorb(structurally_constant == sampled_constant ? 0.0 : 1.0);
  rep.meta["max_x_log_f"] = max_xlogf;
  rep.notes["trivial"] = structurally_constant ? "yes" : "no";

  for (auto& r : rep.records) r.finish(tol);
  return rep;
}

// ---------------------------------------------------------------------------
// Scenario certification
// ---------------------------------------------------------------------------

namespace {

void require_partition(const Scenario& sc) {
  if (!sc.has_factors) fail(ErrorKind::MissingSplit, "scenario declares no factors");
  int n = sc.immersion.n;
  std::vector<int> seen(n, 0);
  for (int i : sc.nt_indices) {
    if (i < 0 || i >= n) fail(ErrorKind::Validation, "factor index out of range");
    seen[i]++;
  }
  for (int i : sc.ntheta_indices) {
    if (i < 0 || i >= n) fail(ErrorKind::Validation, "factor index out of range");
    seen[i]++;
  }
  for (int i = 0; i < n; ++i)
    if (seen[i] != 1)
      fail(ErrorKind::Validation, "factor index sets do not partition the chart");
}

std::string warping_support_of(const Scenario& sc) {
  std::vector<bool> used(sc.immersion.n, false);
  std::vector<int> stack;
  // reuse min_dim per coordinate via structural scan
  std::function<void(const ExprNode&)> walk = [&](const ExprNode& n) {
    if (n.op == ExprOp::Coord) used[n.coord] = true;
    if (n.a) walk(*n.a);
    if (n.b) walk(*n.b);
  };
  walk(sc.warping.node());
  bool any = false, in_nt = false, in_nth = false;
  for (int i = 0; i < sc.immersion.n; ++i) {
    if (!used[i]) continue;
    any = true;
    bool nt = std::count(sc.nt_indices.begin(), sc.nt_indices.end(), i) > 0;
    (nt ? in_nt : in_nth) = true;
  }
  if (!any) return "none";
  if (in_nt && in_nth) return "mixed";
  return in_nt ? "first" : "second";
}

}  // namespace

std::string scenario_warping_support(const Scenario& sc) { return warping_support_of(sc); }

void require_invariant_base(const Scenario& sc) {
  std::string support = warping_support_of(sc);
  if (support == "second" || support == "mixed")
    fail(ErrorKind::Precondition,
         "warping is carried by the slant factor; these identities assume the invariant "
         "factor is the base (see the slant-base obstruction check)");
}

Vec warp_log_gradient(const Scenario& sc, const ImmersionEval& ev) {
  Jet fj = eval_jet(sc.warping, ev.p, 1);
  double f = fj.value();
  if (f <= 0.0) fail(ErrorKind::Validation, "warping not positive at sample point");
  Vec d(sc.immersion.n);
  for (int a = 0; a < sc.immersion.n; ++a) d[a] = fj.partial(a) / f;
  return ev.g_inv.apply(d);
}

WarpedCertificate certify_warped(const Scenario& sc) {
  require_partition(sc);
  if (!sc.has_warping) fail(ErrorKind::MissingSplit, "scenario declares no warping");

  WarpedCertificate cert;
  CheckReport& rep = cert.report;
  rep.name = "certify-warped";
  cert.warping_support = warping_support_of(sc);

  // Resolve which factor plays the base: the one carrying the warping.
  std::vector<int> base_idx = sc.nt_indices, fiber_idx = sc.ntheta_indices;
  if (cert.warping_support == "second") std::swap(base_idx, fiber_idx);
  rep.notes["warping_support"] = cert.warping_support;
  rep.notes["base_factor"] = cert.warping_support == "second" ? "slant" : "invariant";

  auto& r_off = rep.record("off_block");
  auto& r_baseonly = rep.record("base_block_base_only");
  auto& r_scaling = rep.record("fiber_block_scaling");
  auto& r_fpos = rep.record("warping_positive");
  auto& r_xitan = rep.record("xi_tangent");
  auto& r_xiloc = rep.record("xi_in_base");

  Rng rng(derive_seed(sc.sampling.seed, "certify-warped"));
  int nb = std::max(3, static_cast<int>(std::sqrt(double(sc.sampling.count))));
  int n = sc.immersion.n;

  std::vector<Vec> base_draws, fiber_draws;
  for (int t = 0; t < nb; ++t) {
    Vec b, f;
    for (int i : base_idx) b.push_back(rng.uniform(sc.box[i].first, sc.box[i].second));
    for (int i : fiber_idx) f.push_back(rng.uniform(sc.box[i].first, sc.box[i].second));
    base_draws.push_back(std::move(b));
    fiber_draws.push_back(std::move(f));
  }
  auto assemble = [&](const Vec& b, const Vec& f) {
    Vec p(n, 0.0);
    for (size_t k = 0; k < base_idx.size(); ++k) p[base_idx[k]] = b[k];
    for (size_t k = 0; k < fiber_idx.size(); ++k) p[fiber_idx[k]] = f[k];
    return p;
  };

  double min_f = 1e300;
  double xi_nt_norm = 0.0, xi_nth_norm = 0.0, xi_tan_worst = 0.0;
  // grids: scaled fiber blocks indexed [fiber draw][base draw]
  std::vector<std::vector<Mat>> scaled_blocks(nb), base_blocks(nb);
  for (int s = 0; s < nb; ++s) {
    for (int t = 0; t < nb; ++t) {
      Vec p = assemble(base_draws[t], fiber_draws[s]);
      ImmersionEval ev = eval_immersion(sc.immersion, sc.ambient, p);
      double f = eval(sc.warping, p);
      min_f = std::min(min_f, f);

      double off = 0.0;
      for (int a : base_idx)
        for (int b : fiber_idx) off = std::max(off, std::abs(ev.g(a, b)));
      r_off.absorb(off);

      Mat bb(static_cast<int>(base_idx.size()), static_cast<int>(base_idx.size()));
      for (size_t i = 0; i < base_idx.size(); ++i)
        for (size_t j = 0; j < base_idx.size(); ++j)
          bb(static_cast<int>(i), static_cast<int>(j)) = ev.g(base_idx[i], base_idx[j]);
      base_blocks[s].push_back(bb);

      Mat fb(static_cast<int>(fiber_idx.size()), static_cast<int>(fiber_idx.size()));
      for (size_t a = 0; a < fiber_idx.size(); ++a)
        for (size_t b = 0; b < fiber_idx.size(); ++b)
          fb(static_cast<int>(a), static_cast<int>(b)) =
              ev.g(fiber_idx[a], fiber_idx[b]) / (f * f);
      scaled_blocks[s].push_back(fb);

      Vec xi_normal = ev.normal_part(ev.amb.xi);
      xi_tan_worst =
          std::max(xi_tan_worst, std::sqrt(dot_g(ev.amb.g, xi_normal, xi_normal)));
      Vec c = ev.tangential_coeffs(ev.amb.xi);
      Vec cT = masked(c, sc.nt_indices, n), cTh = masked(c, sc.ntheta_indices, n);
      Vec vT = ev.push(cT), vTh = ev.push(cTh);
      xi_nt_norm = std::max(xi_nt_norm, std::sqrt(dot_g(ev.amb.g, vT, vT)));
      xi_nth_norm = std::max(xi_nth_norm, std::sqrt(dot_g(ev.amb.g, vTh, vTh)));
    }
  }
  // base block must not vary along the fiber; scaled fiber block must not
  // vary along the base
  for (int s = 0; s < nb; ++s)
    for (int t = 1; t < nb; ++t) {
      double worst = 0.0;
      for (int i = 0; i < scaled_blocks[s][t].rows(); ++i)
        for (int j = 0; j < scaled_blocks[s][t].cols(); ++j)
          worst = std::max(worst,
                           std::abs(scaled_blocks[s][t](i, j) - scaled_blocks[s][0](i, j)));
      r_scaling.absorb(worst);
    }
  for (int t = 0; t < nb; ++t)
    for (int s = 1; s < nb; ++s) {
      double worst = 0.0;
      for (int i = 0; i < base_blocks[s][t].rows(); ++i)
        for (int j = 0; j < base_blocks[s][t].cols(); ++j)
          worst =
              std::max(worst, std::abs(base_blocks[s][t](i, j) - base_blocks[0][t](i, j)));
      r_baseonly.absorb(worst);
    }

  r_fpos.absorb(min_f > 0.0 ? 0.0 : 1.0 + std::abs(min_f));
  r_xitan.absorb(xi_tan_worst);

  bool base_is_nt = cert.warping_support != "second";
  double in_base = base_is_nt ? xi_nt_norm : xi_nth_norm;
  double in_fiber = base_is_nt ? xi_nth_norm : xi_nt_norm;
  r_xiloc.absorb(in_fiber);
  if (xi_tan_worst > 1e-6)
    cert.xi_location = XiLocation::NotTangent;
  else if (in_fiber < 1e-6)
    cert.xi_location = XiLocation::FirstFactor;
  else if (in_base < 1e-6)
    cert.xi_location = XiLocation::SecondFactor;
  else
    cert.xi_location = XiLocation::NotTangent;
  rep.notes["xi_location"] = cert.xi_location == XiLocation::FirstFactor  ? "base"
                             : cert.xi_location == XiLocation::SecondFactor ? "fiber"
                                                                            : "not-tangent";
  if (cert.xi_location == XiLocation::SecondFactor)
    r_xiloc.note = "distinguished direction sits in the fiber; the scenario is routed to "
                   "the fiber-placement obstruction check";

  cert.trivial_warping = sc.warping.is_constant();
  rep.notes["trivial_warping"] = cert.trivial_warping ? "yes" : "no";
  rep.meta["min_warping"] = min_f;

  for (auto& r : rep.records) r.finish(sc.tol_identity);
  if (sc.approximate) rep.notes["mode"] = "approximate scenario";
  return cert;
}

CheckReport check_factor_geometry(const Scenario& sc) {
  require_partition(sc);
  CheckReport rep;
  rep.name = "factor-geometry";
  auto& r_geo = rep.record("base_totally_geodesic");
  auto& r_umb = rep.record("fiber_umbilical");

  // Factor roles follow the warping support, as in the certificate.
  std::vector<int> base_idx = sc.nt_indices, fiber_idx = sc.ntheta_indices;
  if (warping_support_of(sc) == "second") std::swap(base_idx, fiber_idx);

  int n = sc.immersion.n;
  Rng rng(derive_seed(sc.sampling.seed, "factor-geometry"));
  for (int t = 0; t < sc.sampling.count; ++t) {
    Vec p = rng.point_in(sc.box);
    ImmersionEval ev = eval_immersion(sc.immersion, sc.ambient, p);
    ConnectionSample conn = connection_sample(ev.induced, Point{"submanifold", p});

    auto nabla = [&](const Vec& u, const Vec& v) {
      Vec out(n, 0.0);
      for (int k = 0; k < n; ++k) {
        double s = 0.0;
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) s += conn.gamma_at(k, i, j) * u[i] * v[j];
        out[k] = s;
      }
      return out;
    };

    Vec X = random_in_indices(rng, base_idx, n);
    Vec Y = random_in_indices(rng, base_idx, n);
    Vec h1 = masked(nabla(X, Y), fiber_idx, n);
    Vec h1a = ev.push(h1);
    r_geo.absorb(std::sqrt(dot_g(ev.amb.g, h1a, h1a)));

    Vec Z = random_in_indices(rng, fiber_idx, n);
    Vec W = random_in_indices(rng, fiber_idx, n);
    Vec htheta = masked(nabla(Z, W), base_idx, n);
    Vec grad_log = masked(warp_log_gradient(sc, ev), base_idx, n);
    double gZW = dot_g(ev.g, Z, W);
    Vec resid(n, 0.0);
    for (int k = 0; k < n; ++k) resid[k] = htheta[k] + gZW * grad_log[k];
    Vec ra = ev.push(resid);
    r_umb.absorb(std::sqrt(dot_g(ev.amb.g, ra, ra)));
  }
  for (auto& r : rep.records) r.finish(sc.tol_identity);
  return rep;
}

}  // namespace actwarp
