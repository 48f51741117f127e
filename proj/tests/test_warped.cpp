// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "warped.hpp"

using namespace actwarp;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("warped metric assembly") {
  WarpedProductSpec spec;
  spec.base = MetricField::euclidean(1);
  spec.fiber = MetricField::euclidean(1);
  spec.warping = parse_expr("exp(x0)", 1);
  spec.box = {{-1, 1}, {-2, 2}};
  MetricField g = build_warped_metric(spec);
  Vec p = {0.7, -1.1};
  Mat gv = g.values_at(p);
  CHECK(gv(0, 0) == doctest::Approx(1.0));
  CHECK(gv(1, 1) == doctest::Approx(std::exp(2 * 0.7)).epsilon(1e-14));
  CHECK(gv(0, 1) == doctest::Approx(0.0));

  SUBCASE("constant warping gives the plain product") {
    spec.warping = Expr::constant(1.0);
    MetricField flat = build_warped_metric(spec);
    Mat fv = flat.values_at(p);
    CHECK(fv(1, 1) == doctest::Approx(1.0));
    CHECK(warping_is_constant(spec));
  }

  SUBCASE("non-positive warping is rejected") {
    spec.warping = parse_expr("x0", 1);
    CHECK_THROWS_AS(build_warped_metric(spec), Error);
  }
}

TEST_CASE("mixed connection coefficient matches the hand value") {
  // On dt^2 + e^{2t} dx^2 the mixed coefficient is exactly 1 = d/dt log e^t.
  WarpedProductSpec spec = builtin_warped_specs()[0];
  MetricField g = build_warped_metric(spec);
  ConnectionSample c = christoffel(g, Point{"product", {0.31, 0.5}});
  CHECK(c.gamma_at(1, 0, 1) == doctest::Approx(1.0).epsilon(1e-12));
  // and the fiber-fiber coefficient pulls back to the scaled base gradient
  CHECK(c.gamma_at(0, 1, 1) == doctest::Approx(-std::exp(2 * 0.31)).epsilon(1e-12));
}

TEST_CASE("connection identities hold on every builtin warped metric") {
  for (const WarpedProductSpec& spec : builtin_warped_specs()) {
    CAPTURE(spec.name);
    CheckReport rep = check_warped_connection(spec, {100, 31}, 1e-8);
    for (const auto& r : rep.records) {
      CAPTURE(r.label);
      CHECK(r.max_residual <= 1e-8);
      CHECK(r.pass);
    }
    CHECK(rep.pass());
  }
}

TEST_CASE("curvature sum across blocks equals the base laplacian ratio") {
  WarpedProductSpec spec = builtin_warped_specs()[0];  // line_exp_line
  CheckReport rep = check_warped_connection(spec, {40, 7}, 1e-7);
  const auto* r = rep.find("fiber_curvature_sum");
  REQUIRE(r != nullptr);
  CHECK(r->max_residual < 1e-7);

  // both sides are -1 on this metric
  MetricField g = build_warped_metric(spec);
  Point p{"product", {0.42, 0.3}};
  CurvatureSample curv = riemann(g, p);
  auto frame = coordinate_frame(curv.g);
  CHECK(sectional_curvature(curv, frame[0], frame[1]) == doctest::Approx(-1.0).epsilon(1e-9));
}

TEST_CASE("certification of the warped semi-slant scenario") {
  Scenario sc = make_semi_slant_scenario(3, kPi / 3);
  WarpedCertificate cert = certify_warped(sc);
  for (const auto& r : cert.report.records) {
    CAPTURE(r.label);
    CHECK(r.pass);
  }
  CHECK(cert.report.pass());
  CHECK(cert.xi_location == XiLocation::FirstFactor);
  CHECK(cert.warping_support == "first");
  CHECK_FALSE(cert.trivial_warping);
}

TEST_CASE("perturbed scenario still certifies as warped") {
  Scenario sc = make_semi_slant_scenario(3, kPi / 3, 0.1);
  WarpedCertificate cert = certify_warped(sc);
  for (const auto& r : cert.report.records) {
    CAPTURE(r.label);
    CHECK(r.pass);
  }
  CHECK(cert.xi_location == XiLocation::FirstFactor);
}

TEST_CASE("generic immersion fails certification with off-block energy") {
  Scenario sc = make_semi_slant_scenario(3, kPi / 3);
  // bend the first fiber pair into the slant coordinates: x1 = u + 0.3 s1^2
  sc.immersion.map[1] = parse_expr("x1 + 0.3*x3^2", 5);
  WarpedCertificate cert = certify_warped(sc);
  CHECK_FALSE(cert.report.pass());
  CHECK(cert.report.find("off_block")->max_residual > 1e-3);
}

TEST_CASE("misplaced distinguished direction is detected") {
  Scenario sc = make_fiber_xi_candidate("kenmotsu");
  WarpedCertificate cert = certify_warped(sc);
  CHECK(cert.xi_location == XiLocation::SecondFactor);
  CHECK_FALSE(cert.report.find("xi_in_base")->pass);
  // the claimed warped structure also fails block independence
  CHECK_FALSE(cert.report.find("base_block_base_only")->pass);
}

TEST_CASE("factor geometry: geodesic base, umbilical fiber") {
  for (double eps : {0.0, 0.1}) {
    CAPTURE(eps);
    Scenario sc = make_semi_slant_scenario(3, kPi / 3, eps);
    sc.sampling.count = 40;
    CheckReport rep = check_factor_geometry(sc);
    CHECK(rep.find("base_totally_geodesic")->max_residual < 1e-9);
    CHECK(rep.find("fiber_umbilical")->max_residual < 1e-9);
  }
}

TEST_CASE("trivial warping flattens the fiber second fundamental form") {
  // constant warping: the umbilical identity degenerates to h = 0
  Scenario sc = make_semi_slant_scenario(3, kPi / 3);
  Scenario flat = sc;
  flat.ambient = builtin_ambient("cosymplectic", 3);
  flat.warping = Expr::constant(1.0);
  flat.id = "product";
  CheckReport rep = check_factor_geometry(flat);
  CHECK(rep.find("fiber_umbilical")->max_residual < 1e-10);
  WarpedCertificate cert = certify_warped(flat);
  CHECK(cert.trivial_warping);
  CHECK(cert.report.pass());
}
