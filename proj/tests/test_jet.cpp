// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "jet.hpp"
#include "rng.hpp"

using namespace actwarp;

namespace {

// Random bounded expression trees used to cross-check jets against central
// differences. Transcendental arguments are kept tame so magnitudes stay
// comparable between the two sides.
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

double rel_err(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(a)); }

}  // namespace

TEST_CASE("first-order product rule") {
  Expr e = Expr::coord(0) * Expr::coord(1);
  double p[] = {2.0, 3.0};
  Jet j = eval_jet(e, p, 1);
  CHECK(j.value() == doctest::Approx(6.0));
  CHECK(j.partial(0) == doctest::Approx(3.0));
  CHECK(j.partial(1) == doctest::Approx(2.0));
}

TEST_CASE("taylor of sine at zero") {
  Expr e = sin(Expr::coord(0));
  double p[] = {0.0};
  Jet j = eval_jet(e, p, 2);
  CHECK(j.value() == doctest::Approx(0.0));
  CHECK(j.partial(0) == doctest::Approx(1.0));
  CHECK(j.partial2(0, 0) == doctest::Approx(0.0));
}

TEST_CASE("chain rule through exp") {
  Expr e = exp(Expr::constant(2.0) * Expr::coord(0));
  double p[] = {0.0};
  Jet j = eval_jet(e, p, 2);
  CHECK(j.partial2(0, 0) == doctest::Approx(4.0));
}

TEST_CASE("degree-0 coefficient equals plain evaluation") {
  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    Expr e = random_expr(rng, 3, 3);
    Vec p = rng.vector_pm1(3);
    double direct;
    try {
      direct = eval(e, p);
    } catch (const Error&) {
      continue;
    }
    Jet j = eval_jet(e, p, 2);
    CHECK(j.value() == doctest::Approx(direct).epsilon(1e-13));
  }
}

TEST_CASE("central differences agree with jets") {
  // Literal anchor cases first.
  {
    Expr e = exp(Expr::constant(2.0) * Expr::coord(0));
    double p[] = {0.0};
    Jet fd = finite_difference_jet(e, p, 2, 1e-4);
    Jet ex = eval_jet(e, p, 2);
    for (int k = 0; k < ex.space().size(); ++k)
      CHECK(std::abs(fd.coefficient(k) - ex.coefficient(k)) < 1e-6);
  }
  {
    Expr c = Expr::constant(3.25);
    double p[] = {0.4, -0.2};
    Jet fd = finite_difference_jet(c, p, 2, 1e-3);
    CHECK(fd.value() == doctest::Approx(3.25));
    for (int k = 1; k < fd.space().size(); ++k) CHECK(fd.coefficient(k) == 0.0);
  }
  {
    Expr e = Expr::pow(Expr::coord(0), 3);
    double p[] = {1.0};
    Jet fd = finite_difference_jet(e, p, 3, 1e-4);
    CHECK(std::abs(fd.partial3(0, 0, 0) - 6.0) < 1e-3);
  }

  // Bulk property: 1000 random trees, relative error < 1e-5 through order 2
  // and < 1e-3 for third-order coefficients.
  Rng rng(20260808);
  int accepted = 0;
  while (accepted < 1000) {
    int dim = 1 + static_cast<int>(rng.uniform(0, 3));
    Expr e = random_expr(rng, dim, 3);
    Vec p = rng.vector_pm1(dim);
    Jet ex, fd2, fd3;
    try {
      ex = eval_jet(e, p, 3);
      fd2 = finite_difference_jet(e, p, 2, 7e-5);
      fd3 = finite_difference_jet(e, p, 3, 6e-4);
    } catch (const Error&) {
      continue;  // stencil or point left the domain; draw again
    }
    if (norm_inf(ex.coefficients()) > 50.0) continue;
    ++accepted;
    Jet ex2 = ex.truncated(2);
    for (int k = 0; k < ex2.space().size(); ++k)
      CHECK(rel_err(ex2.coefficient(k), fd2.coefficient(k)) < 1e-5);
    for (int k = 0; k < ex.space().size(); ++k)
      if (ex.space().degree(k) == 3)
        CHECK(rel_err(ex.coefficient(k), fd3.coefficient(k)) < 1e-3);
  }
}

TEST_CASE("linearity of jets") {
  Rng rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    Expr f = random_expr(rng, 2, 2);
    Expr g = random_expr(rng, 2, 2);
    double a = rng.uniform(-2, 2), b = rng.uniform(-2, 2);
    Vec p = rng.vector_pm1(2);
    Jet jf, jg, jsum;
    try {
      jf = eval_jet(f, p, 3);
      jg = eval_jet(g, p, 3);
      jsum = eval_jet(Expr::constant(a) * f + Expr::constant(b) * g, p, 3);
    } catch (const Error&) {
      continue;
    }
    Jet expect = a * jf + b * jg;
    for (int k = 0; k < jsum.space().size(); ++k)
      CHECK(jsum.coefficient(k) ==
            doctest::Approx(expect.coefficient(k)).epsilon(1e-12).scale(
                std::max(1.0, std::abs(expect.coefficient(k)))));
  }
}

TEST_CASE("truncated product matches expression-level product") {
  Rng rng(123);
  for (int trial = 0; trial < 100; ++trial) {
    Expr f = random_expr(rng, 2, 2);
    Expr g = random_expr(rng, 2, 2);
    Vec p = rng.vector_pm1(2);
    Jet jf, jg, jprod;
    try {
      jf = eval_jet(f, p, 3);
      jg = eval_jet(g, p, 3);
      jprod = eval_jet(f * g, p, 3);
    } catch (const Error&) {
      continue;
    }
    Jet expect = jf * jg;
    for (int k = 0; k < jprod.space().size(); ++k)
      CHECK(jprod.coefficient(k) ==
            doctest::Approx(expect.coefficient(k)).epsilon(1e-11).scale(
                std::max(1.0, std::abs(expect.coefficient(k)))));
  }
}

TEST_CASE("mixed-partial symmetry is structural") {
  Expr e = parse_expr("sin(x0*x1) * exp(x1) + x0^3", 2);
  double p[] = {0.6, -0.4};
  Jet j = eval_jet(e, p, 3);
  CHECK(j.partial2(0, 1) == j.partial2(1, 0));
  CHECK(j.partial3(0, 0, 1) == j.partial3(0, 1, 0));
  CHECK(j.partial3(0, 0, 1) == j.partial3(1, 0, 0));
}

TEST_CASE("differentiated jet shifts coefficients") {
  Expr e = parse_expr("x0^2 * x1", 2);
  double p[] = {1.5, 2.0};
  Jet j = eval_jet(e, p, 3);
  Jet dx0 = j.differentiated(0);  // 2*x0*x1
  CHECK(dx0.value() == doctest::Approx(2 * 1.5 * 2.0));
  CHECK(dx0.partial(0) == doctest::Approx(2 * 2.0));
  CHECK(dx0.partial(1) == doctest::Approx(2 * 1.5));
  CHECK(dx0.partial2(0, 1) == doctest::Approx(2.0));
}

TEST_CASE("jet preconditions") {
  Expr e = Expr::coord(0);
  double p[] = {1.0};
  CHECK_THROWS_AS(eval_jet(e, p, 0), Error);
  CHECK_THROWS_AS(eval_jet(e, p, 4), Error);
  CHECK_THROWS_AS(finite_difference_jet(e, p, 2, 0.0), Error);
  double zero[] = {0.0};
  CHECK_THROWS_AS(eval_jet(log(Expr::coord(0)), zero, 1), Error);
}
