// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "scenario.hpp"

using namespace actwarp;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<Expr> dir(int n, int axis) {
  std::vector<Expr> v(n, Expr::constant(0.0));
  v[axis] = Expr::constant(1.0);
  return v;
}

Immersion flat_plane_in_r3() {
  Immersion imm;
  imm.n = 2;
  imm.ambient_dim = 3;
  imm.map = {Expr::constant(0.0), Expr::coord(0), Expr::coord(1)};
  return imm;
}

}  // namespace

TEST_CASE("identity-like immersion induces the ambient metric") {
  AlmostContactStructure amb = builtin_ambient("cosymplectic", 1);
  Immersion imm;
  imm.n = 3;
  imm.ambient_dim = 3;
  imm.map = {Expr::coord(0), Expr::coord(1), Expr::coord(2)};
  Mat g = induced_metric(imm, amb, {0.2, -0.4, 1.1});
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(g(i, j) == doctest::Approx(i == j ? 1.0 : 0.0));
}

TEST_CASE("unit sphere chart induces diag(1, sin^2)") {
  Scenario sc = make_sphere_scenario();
  Vec p = {1.05, 0.4};
  Mat g = induced_metric(sc.immersion, sc.ambient, p);
  CHECK(g(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(g(1, 1) == doctest::Approx(std::sin(1.05) * std::sin(1.05)).epsilon(1e-12));
  CHECK(std::abs(g(0, 1)) < 1e-14);
}

TEST_CASE("warped semi-slant scenario has the expected block metric") {
  Scenario sc = make_semi_slant_scenario(3, kPi / 3);
  Vec p = {0.3, 0.7, -0.2, 0.5, 1.4};
  Mat g = induced_metric(sc.immersion, sc.ambient, p);
  double e2t = std::exp(2 * 0.3);
  CHECK(g(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
  for (int a = 1; a < 5; ++a) {
    CHECK(g(a, a) == doctest::Approx(e2t).epsilon(1e-12));
    for (int b = 0; b < a; ++b) CHECK(std::abs(g(a, b)) < 1e-12);
  }
}

TEST_CASE("rank-deficient immersions are rejected") {
  AlmostContactStructure amb = builtin_ambient("cosymplectic", 1);
  Immersion imm;
  imm.n = 2;
  imm.ambient_dim = 3;
  imm.map = {Expr::constant(0.0), Expr::coord(0), Expr::coord(0)};
  CHECK_THROWS_AS(eval_immersion(imm, amb, {0.1, 0.2}), Error);
}

TEST_CASE("flat plane frame and vanishing second fundamental form") {
  AlmostContactStructure amb = builtin_ambient("cosymplectic", 1);
  Immersion imm = flat_plane_in_r3();
  ImmersionEval ev = eval_immersion(imm, amb, {0.6, -0.3});
  FrameSample fr = orthonormal_frames(ev);
  CHECK(fr.tangent_amb.size() == 2);
  CHECK(fr.normal_amb.size() == 1);
  CHECK(fr.gram_residual < 1e-12);
  // tangents span {x, y}; the normal is the distinguished axis
  CHECK(std::abs(fr.normal_amb[0][0]) == doctest::Approx(1.0));

  SffSample sff = second_fundamental_form(ev, fr);
  CHECK(sff.h_norm_sq == doctest::Approx(0.0));
  CHECK(sff.mean_sq == doctest::Approx(0.0));
  Mat a = shape_operator(ev, fr, fr.normal_amb[0]);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) CHECK(std::abs(a(i, j)) < 1e-12);
}

TEST_CASE("sphere second fundamental form against the outward normal") {
  Scenario sc = make_sphere_scenario();
  Rng rng(3);
  for (int t = 0; t < 5; ++t) {
    Vec p = {rng.uniform(0.5, 2.6), rng.uniform(-2, 2)};
    ImmersionEval ev = eval_immersion(sc.immersion, sc.ambient, p);
    FrameSample fr = orthonormal_frames(ev);
    Vec outward = ev.ax;  // position vector of the unit sphere

    SffSample sff = second_fundamental_form(ev, fr);
    // h against the outward normal is -identity on an orthonormal frame
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        double hij = dot_g(ev.amb.g, ev.gauss_vec(fr.tangent_sub[i], fr.tangent_sub[j]),
                           outward);
        CHECK(hij == doctest::Approx(i == j ? -1.0 : 0.0).epsilon(1e-9));
      }
    CHECK(std::sqrt(sff.mean_sq) == doctest::Approx(1.0).epsilon(1e-9));

    Mat a = shape_operator(ev, fr, outward);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        CHECK(a(i, j) == doctest::Approx(i == j ? -1.0 : 0.0).epsilon(1e-8));
  }
}

TEST_CASE("shape operator duality on a random quadratic graph") {
  Scenario sc = make_graph_scenario({0.31, -0.17, 0.23, 0.08, -0.12});
  Rng rng(5);
  for (int t = 0; t < 10; ++t) {
    Vec p = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
    ImmersionEval ev = eval_immersion(sc.immersion, sc.ambient, p);
    FrameSample fr = orthonormal_frames(ev);
    SffSample sff = second_fundamental_form(ev, fr);
    for (size_t r = 0; r < fr.normal_amb.size(); ++r) {
      Mat a = shape_operator(ev, fr, fr.normal_amb[r]);
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          CHECK(std::abs(a(i, j) - sff.coeff(static_cast<int>(r), i, j)) < 1e-8);
    }
  }
}

TEST_CASE("shape operator rejects non-normal directions") {
  AlmostContactStructure amb = builtin_ambient("cosymplectic", 1);
  Immersion imm = flat_plane_in_r3();
  ImmersionEval ev = eval_immersion(imm, amb, {0.0, 0.0});
  FrameSample fr = orthonormal_frames(ev);
  CHECK_THROWS_AS(shape_operator(ev, fr, fr.tangent_amb[0]), Error);
}

TEST_CASE("tangential and normal components of phi") {
  AlmostContactStructure amb = builtin_ambient("cosymplectic", 2);

  SUBCASE("invariant plane has no normal component") {
    Immersion imm;
    imm.n = 2;
    imm.ambient_dim = 5;
    imm.map = {Expr::constant(0.0), Expr::coord(0), Expr::coord(1), Expr::constant(0.0),
               Expr::constant(0.0)};
    ImmersionEval ev = eval_immersion(imm, amb, {0.4, 0.7});
    FrameSample fr = orthonormal_frames(ev);
    PFSplit pf = pf_decompose(ev, fr);
    for (int r = 0; r < pf.f.rows(); ++r)
      for (int j = 0; j < 2; ++j) CHECK(std::abs(pf.f(r, j)) < 1e-12);
    CHECK(pf.reconstruction_residual < 1e-10);
  }

  SUBCASE("anti-invariant line has no tangential component") {
    Immersion imm;
    imm.n = 1;
    imm.ambient_dim = 5;
    imm.map = {Expr::constant(0.0), Expr::coord(0), Expr::constant(0.0), Expr::constant(0.0),
               Expr::constant(0.0)};
    ImmersionEval ev = eval_immersion(imm, amb, {0.9});
    FrameSample fr = orthonormal_frames(ev);
    PFSplit pf = pf_decompose(ev, fr);
    CHECK(std::abs(pf.p(0, 0)) < 1e-12);
  }
}

TEST_CASE("slant plane tilted across two fiber pairs") {
  AlmostContactStructure amb = builtin_ambient("cosymplectic", 3);
  double theta = kPi / 3;
  Immersion imm;
  imm.n = 2;
  imm.ambient_dim = 7;
  imm.map = {Expr::constant(0.0), Expr::constant(0.0), Expr::constant(0.0),
             Expr::coord(0),  // x2
             Expr::constant(std::cos(theta)) * Expr::coord(1),
             Expr::constant(0.0),
             Expr::constant(std::sin(theta)) * Expr::coord(1)};

  ImmersionEval ev = eval_immersion(imm, amb, {0.3, -0.8});
  FrameSample fr = orthonormal_frames(ev);
  PFSplit pf = pf_decompose(ev, fr);
  // each column of P has norm cos(theta)
  for (int j = 0; j < 2; ++j) {
    double norm2 = 0.0;
    for (int i = 0; i < 2; ++i) norm2 += pf.p(i, j) * pf.p(i, j);
    CHECK(std::sqrt(norm2) == doctest::Approx(std::cos(theta)).epsilon(1e-12));
  }

  std::vector<std::vector<Expr>> basis = {dir(2, 0), dir(2, 1)};
  std::vector<std::pair<double, double>> box = {{-1, 1}, {-1, 1}};
  SlantReport rep = slant_report(amb, imm, basis, {40, 9}, box);
  CHECK(rep.lambda == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(std::abs(rep.theta - theta) < 1e-9);
  CHECK(rep.residual < 1e-9);
  CHECK(rep.cls == SlantClass::ProperSlant);
}

TEST_CASE("slant recovery for the canonical angles") {
  for (double theta : {kPi / 6, kPi / 4, kPi / 3}) {
    CAPTURE(theta);
    Scenario sc = make_semi_slant_scenario(3, theta);
    SlantReport rep = slant_report(sc.ambient, sc.immersion, sc.immersion.splits->dtheta_basis,
                                   {30, 11}, sc.box);
    CHECK(std::abs(rep.theta - theta) < 1e-9);
    CHECK(rep.residual < 1e-9);
    CHECK(rep.cls == SlantClass::ProperSlant);
  }
}

TEST_CASE("invariant and anti-invariant distributions classify exactly") {
  Scenario sc = make_semi_slant_scenario(3, kPi / 3);
  SlantReport inv = slant_report(sc.ambient, sc.immersion, sc.immersion.splits->d_basis,
                                 {30, 13}, sc.box);
  CHECK(inv.lambda == doctest::Approx(1.0));
  CHECK(inv.cls == SlantClass::Invariant);

  // anti-invariant plane: x2/x3 directions with no y-partners on board
  AlmostContactStructure amb = builtin_ambient("kenmotsu", 3);
  Immersion imm;
  imm.n = 5;
  imm.ambient_dim = 7;
  imm.map = {Expr::coord(0), Expr::coord(1), Expr::coord(2), Expr::coord(3),
             Expr::constant(0.0), Expr::coord(4), Expr::constant(0.0)};
  SplitSpec sp;
  sp.d_basis = {dir(5, 1), dir(5, 2)};
  sp.dtheta_basis = {dir(5, 3), dir(5, 4)};
  sp.xi_dir = dir(5, 0);
  imm.splits = sp;
  SlantReport anti = slant_report(amb, imm, imm.splits->dtheta_basis, {30, 13}, sc.box);
  CHECK(anti.lambda == doctest::Approx(0.0));
  CHECK(anti.cls == SlantClass::AntiInvariant);
}

TEST_CASE("point-dependent angle is reported as not slant") {
  AlmostContactStructure amb = builtin_ambient("cosymplectic", 3);
  Immersion imm;
  imm.n = 2;
  imm.ambient_dim = 7;
  // the plane rotates through the second and third pairs as x0 moves
  imm.map = {Expr::constant(0.0), Expr::constant(0.0), Expr::constant(0.0),
             Expr::coord(0),
             Expr::coord(1) * cos(Expr::constant(0.5) + Expr::coord(0)),
             Expr::constant(0.0),
             Expr::coord(1) * sin(Expr::constant(0.5) + Expr::coord(0))};
  std::vector<std::vector<Expr>> basis = {dir(2, 0), dir(2, 1)};
  std::vector<std::pair<double, double>> box = {{-1, 1}, {-0.5, 0.5}};
  SlantReport rep = slant_report(amb, imm, basis, {40, 17}, box);
  CHECK(rep.residual > 1e-3);
  CHECK(rep.cls == SlantClass::NotSlant);
}

TEST_CASE("slant fit is invariant under basis rescaling") {
  Scenario sc = make_semi_slant_scenario(3, kPi / 3);
  auto basis = sc.immersion.splits->dtheta_basis;
  SlantReport a = slant_report(sc.ambient, sc.immersion, basis, {20, 31}, sc.box);
  double scale[2] = {2.7, 0.3};
  for (size_t k = 0; k < basis.size(); ++k)
    for (auto& comp : basis[k]) comp = Expr::constant(scale[k]) * comp;
  SlantReport b = slant_report(sc.ambient, sc.immersion, basis, {20, 31}, sc.box);
  CHECK(std::abs(a.lambda - b.lambda) < 1e-9);
  CHECK(std::abs(a.theta - b.theta) < 1e-9);
  CHECK(b.residual < 1e-9);
}

TEST_CASE("slant distribution must exclude the distinguished direction") {
  Scenario sc = make_semi_slant_scenario(3, kPi / 3);
  std::vector<std::vector<Expr>> bad = {dir(5, 0)};
  CHECK_THROWS_AS(slant_report(sc.ambient, sc.immersion, bad, {5, 3}, sc.box), Error);
  CHECK_THROWS_AS(slant_report(sc.ambient, sc.immersion, {}, {5, 3}, sc.box), Error);
}

TEST_CASE("adapted frame of the warped semi-slant scenario") {
  double theta = kPi / 3;
  Scenario sc = make_semi_slant_scenario(3, theta);
  ImmersionEval ev = eval_immersion(sc.immersion, sc.ambient, {0.4, 0.6, -0.5, 1.1, 0.8});
  FrameSample fr = adapted_frames(ev, theta);
  CHECK(fr.tangent_amb.size() == 5);
  CHECK(fr.d_idx.size() == 2);
  CHECK(fr.xi_idx.size() == 1);
  CHECK(fr.dtheta_idx.size() == 2);
  CHECK(fr.f_idx.size() == 2);
  CHECK(fr.nu_idx.empty());
  CHECK(fr.gram_residual < 1e-10);
  // the scaled partners came out unit before repair
  CHECK(fr.adapted_deviation < 1e-9);

  // wide ambient leaves a 2-dimensional invariant normal remainder
  Scenario wide = make_semi_slant_scenario(4, theta);
  ImmersionEval evw = eval_immersion(wide.immersion, wide.ambient, {0.4, 0.6, -0.5, 1.1, 0.8});
  FrameSample frw = adapted_frames(evw, theta);
  CHECK(frw.f_idx.size() == 2);
  CHECK(frw.nu_idx.size() == 2);
  CHECK(frw.gram_residual < 1e-10);

  CHECK_THROWS_AS(adapted_frames(ev, 0.01), Error);
  CHECK_THROWS_AS(adapted_frames(ev, kPi / 2 - 0.01), Error);
}

TEST_CASE("semi-slant verification passes on the warped scenario") {
  double theta = kPi / 3;
  Scenario sc = make_semi_slant_scenario(3, theta);
  CheckReport rep = semi_slant_check(sc.ambient, sc.immersion, theta, {25, 19}, sc.box,
                                     sc.tol_identity);
  CAPTURE(rep.records[0].label);
  for (const auto& r : rep.records) {
    CAPTURE(r.label);
    CHECK(r.pass);
  }
  CHECK(rep.pass());
  CHECK(rep.notes.at("slant_class") == "proper slant");
}

TEST_CASE("anti-invariant slant part fails the semi-slant conditions") {
  AlmostContactStructure amb = builtin_ambient("kenmotsu", 3);
  Immersion imm;
  imm.n = 5;
  imm.ambient_dim = 7;
  imm.map = {Expr::coord(0), Expr::coord(1), Expr::coord(2), Expr::coord(3),
             Expr::constant(0.0), Expr::coord(4), Expr::constant(0.0)};
  SplitSpec sp;
  sp.d_basis = {dir(5, 1), dir(5, 2)};
  sp.dtheta_basis = {dir(5, 3), dir(5, 4)};
  sp.xi_dir = dir(5, 0);
  imm.splits = sp;
  std::vector<std::pair<double, double>> box(5, {-1.0, 1.0});
  CheckReport rep = semi_slant_check(amb, imm, kPi / 2, {20, 23}, box, 1e-8);
  CHECK_FALSE(rep.pass());
  CHECK_FALSE(rep.find("theta_proper")->pass);
}

TEST_CASE("invariant normal remainder stays invariant on the wide scenario") {
  Scenario sc = make_semi_slant_scenario(4, kPi / 3);
  CheckReport rep = semi_slant_check(sc.ambient, sc.immersion, kPi / 3, {20, 29}, sc.box,
                                     sc.tol_identity);
  CHECK(rep.find("nu_invariant")->max_residual < 1e-9);
  CHECK(rep.pass());
}
