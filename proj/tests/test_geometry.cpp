// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "geometry.hpp"
#include "rng.hpp"

using namespace actwarp;

namespace {

MetricField hyperbolic_strip() {  // dt^2 + e^{2t} dx^2
  return MetricField::diagonal({parse_expr("1", 2), parse_expr("exp(2*x0)", 2)});
}

MetricField round_sphere() {  // dtheta^2 + sin^2(theta) dphi^2
  return MetricField::diagonal({parse_expr("1", 2), parse_expr("sin(x0)^2", 2)});
}

// Independent connection oracle: central differences of the metric entries,
// plain matrix inverse, textbook formula. No jets anywhere.
double christoffel_fd(const MetricField& g, const Vec& p, int k, int i, int j) {
  int n = g.dim();
  double h = 1e-6;
  auto dg = [&](int a, int b, int axis) {
    Vec q = p;
    q[axis] += h;
    double hi = eval(g.entry(a, b), q);
    q[axis] -= 2 * h;
    double lo = eval(g.entry(a, b), q);
    return (hi - lo) / (2 * h);
  };
  Mat ginv = inverse(g.values_at(p));
  double s = 0.0;
  for (int l = 0; l < n; ++l) s += ginv(k, l) * (dg(j, l, i) + dg(i, l, j) - dg(i, j, l));
  return 0.5 * s;
}

}  // namespace

TEST_CASE("flat metric has vanishing connection and curvature") {
  MetricField g = MetricField::euclidean(3);
  Point p{"flat", {0.3, -1.2, 0.7}};
  ConnectionSample c = christoffel(g, p);
  for (double v : c.gamma) CHECK(v == 0.0);
  CHECK(c.compatibility_residual < 1e-15);

  CurvatureSample curv = riemann(g, p);
  for (double v : curv.r) CHECK(v == 0.0);
  CHECK(curv.tau == doctest::Approx(0.0));
}

TEST_CASE("hyperbolic strip connection") {
  MetricField g = hyperbolic_strip();
  Point p{"strip", {0.37, -0.8}};
  ConnectionSample c = christoffel(g, p);
  double e2t = std::exp(2 * 0.37);
  CHECK(c.gamma_at(0, 1, 1) == doctest::Approx(-e2t).epsilon(1e-12));
  CHECK(c.gamma_at(1, 0, 1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(c.gamma_at(1, 1, 0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(c.gamma_at(0, 0, 0) == doctest::Approx(0.0));
  CHECK(c.compatibility_residual < 1e-9);

  // cross-check every coefficient against the finite-difference oracle
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        CHECK(c.gamma_at(k, i, j) ==
              doctest::Approx(christoffel_fd(g, p.coords, k, i, j)).epsilon(1e-6));
}

TEST_CASE("sphere connection anchor") {
  MetricField g = round_sphere();
  Point p{"sphere", {std::numbers::pi / 4, 1.1}};
  ConnectionSample c = christoffel(g, p);
  CHECK(c.gamma_at(0, 1, 1) == doctest::Approx(-0.5).epsilon(1e-12));
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        CHECK(c.gamma_at(k, i, j) ==
              doctest::Approx(christoffel_fd(g, p.coords, k, i, j)).epsilon(1e-6));
}

TEST_CASE("unit sphere sectional curvature is +1") {
  MetricField g = round_sphere();
  Rng rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    Point p{"sphere", {rng.uniform(0.4, 2.7), rng.uniform(-2, 2)}};
    CurvatureSample curv = riemann(g, p);
    Vec u = rng.vector_pm1(2), v = rng.vector_pm1(2);
    CHECK(sectional_curvature(curv, u, v) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(curv.tau == doctest::Approx(1.0).epsilon(1e-8));
    // scaling an argument leaves the plane unchanged
    CHECK(sectional_curvature(curv, scaled(u, 2.0), v) == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("hyperbolic strip has curvature -1") {
  MetricField g = hyperbolic_strip();
  Point p{"strip", {0.6, 0.2}};
  CurvatureSample curv = riemann(g, p);
  Vec u = {1.0, 0.0}, v = {0.0, 1.0};
  CHECK(sectional_curvature(curv, u, v) == doctest::Approx(-1.0).epsilon(1e-10));
}

TEST_CASE("curvature symmetries and first bianchi identity") {
  MetricField g = MetricField::from_full(
      2, {parse_expr("1 + 0.3*sin(x0)*sin(x1)", 2), parse_expr("0.2*x0*x1", 2),
          parse_expr("0.2*x0*x1", 2), parse_expr("2 + 0.5*cos(x0)", 2)});
  Rng rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    Point p{"bumpy", {rng.uniform(-1, 1), rng.uniform(-1, 1)}};
    CurvatureSample c = riemann(g, p);
    int n = c.n;
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) {
            worst = std::max(worst, std::abs(c.at(i, j, k, l) + c.at(j, i, k, l)));
            worst = std::max(worst, std::abs(c.at(i, j, k, l) + c.at(i, j, l, k)));
            worst = std::max(worst, std::abs(c.at(i, j, k, l) - c.at(k, l, i, j)));
            worst = std::max(worst, std::abs(c.at(i, j, k, l) + c.at(j, k, i, l) +
                                             c.at(k, i, j, l)));
          }
    CHECK(worst < 1e-8);
  }
}

TEST_CASE("scalar curvature is frame independent") {
  MetricField g = round_sphere();
  Point p{"sphere", {1.1, 0.4}};
  CurvatureSample curv = riemann(g, p);
  double base = scalar_curvature(curv, coordinate_frame(curv.g));

  Rng rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    // random basis -> orthonormal frame
    std::vector<Vec> raw = {rng.vector_pm1(2), rng.vector_pm1(2)};
    auto gs = gram_schmidt(curv.g, raw, 1e-6);
    if (gs.vectors.size() != 2) continue;
    CHECK(scalar_curvature(curv, gs.vectors) == doctest::Approx(base).epsilon(1e-9));
  }
}

TEST_CASE("partial scalar curvature collapses correctly") {
  MetricField g = round_sphere();
  Point p{"sphere", {0.9, -0.3}};
  CurvatureSample curv = riemann(g, p);
  auto frame = coordinate_frame(curv.g);
  CHECK(partial_scalar_curvature(curv, {frame[0]}) == 0.0);
  CHECK(partial_scalar_curvature(curv, {frame[0], frame[1]}) ==
        doctest::Approx(sectional_curvature(curv, frame[0], frame[1])).epsilon(1e-12));
  CHECK(partial_scalar_curvature(curv, frame) ==
        doctest::Approx(scalar_curvature(curv, frame)).epsilon(1e-12));

  std::vector<Vec> bad = {{1.0, 0.0}, {1.0, 1.0}};
  CHECK_THROWS_AS(partial_scalar_curvature(curv, bad), Error);
}

TEST_CASE("gradient satisfies its defining identity") {
  MetricField g = hyperbolic_strip();
  Expr psi = parse_expr("x0", 2);
  Point p{"strip", {0.5, 1.0}};
  Vec grad = gradient(g, psi, p);
  CHECK(grad[0] == doctest::Approx(1.0));
  CHECK(grad[1] == doctest::Approx(0.0));

  // g(grad psi, e_i) == d_i psi for every basis vector, generic metric
  MetricField bumpy = MetricField::from_full(
      2, {parse_expr("1 + 0.2*x1^2", 2), parse_expr("0.1*x0", 2), parse_expr("0.1*x0", 2),
          parse_expr("2", 2)});
  Expr f = parse_expr("sin(x0)*x1 + x0^2", 2);
  Point q{"bumpy", {0.7, -0.6}};
  Vec gr = gradient(bumpy, f, q);
  Mat gv = bumpy.values_at(q.coords);
  Jet fj = eval_jet(f, q.coords, 1);
  for (int i = 0; i < 2; ++i) {
    Vec e(2, 0.0);
    e[i] = 1.0;
    CHECK(dot_g(gv, gr, e) == doctest::Approx(fj.partial(i)).epsilon(1e-10));
  }

  // squared length of grad(log(e^t)) on the strip is 1
  Vec glog = gradient(g, parse_expr("log(exp(x0))", 2), p);
  CHECK(dot_g(g.values_at(p.coords), glog, glog) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("laplacian uses the frame-trace sign convention") {
  MetricField g = MetricField::euclidean(2);
  Point p{"flat", {0.4, 0.9}};
  auto frame = coordinate_frame(g.values_at(p.coords));
  CHECK(laplacian(g, parse_expr("3*x0 - 2*x1", 2), p, frame) == doctest::Approx(0.0));
  CHECK(laplacian(g, parse_expr("x0^2", 2), p, frame) == doctest::Approx(-2.0));

  std::vector<Vec> bad = {{1.0, 0.0}, {1.0, 1.0}};
  CHECK_THROWS_AS(laplacian(g, parse_expr("x0", 2), p, bad), Error);
}

TEST_CASE("warped line laplacian matches fiber curvature sum") {
  // On dt^2 + e^{2t} dx^2 with f = e^t on the base line: the trace
  // convention gives (Delta f)/f = -1, matching K(dt ^ dx) = -1.
  MetricField base = MetricField::euclidean(1);
  Expr f = parse_expr("exp(x0)", 1);
  Point pb{"line", {0.45}};
  auto frame1 = coordinate_frame(base.values_at(pb.coords));
  double lap = laplacian(base, f, pb, frame1);
  double fval = eval(f, pb.coords);
  CHECK(lap / fval == doctest::Approx(-1.0).epsilon(1e-12));

  MetricField warped = hyperbolic_strip();
  Point p{"strip", {0.45, 0.0}};
  CurvatureSample curv = riemann(warped, p);
  auto frame = coordinate_frame(curv.g);
  double ksum = sectional_curvature(curv, frame[0], frame[1]);
  CHECK(lap / fval == doctest::Approx(ksum).epsilon(1e-9));
}

TEST_CASE("singular metric is rejected") {
  MetricField g = MetricField::diagonal({parse_expr("x0", 1)});
  Point p{"line", {0.0}};
  CHECK_THROWS_AS(christoffel(g, p), Error);
}
