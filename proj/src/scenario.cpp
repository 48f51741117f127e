// SPDX-License-Identifier: Apache-2.0
#include "scenario.hpp"

#include <cmath>

namespace actwarp {

namespace {

std::vector<Expr> unit_dir(int n, int axis) {
  std::vector<Expr> v(n, Expr::constant(0.0));
  v[axis] = Expr::constant(1.0);
  return v;
}

}  // namespace

Scenario make_semi_slant_scenario(int m, double theta, double epsilon, uint64_t seed) {
  if (m < 3)
    fail(ErrorKind::Validation, "the warped semi-slant construction needs m >= 3");
  Scenario sc;
  sc.id = epsilon == 0.0 ? "semi_slant_warp" : "semi_slant_warp_perturbed";
  sc.ambient = builtin_ambient("kenmotsu", m);

  // Ambient chart: (t, x1, y1, x2, y2, x3, y3, ...).
  // Submanifold chart: (t, u, v, s1, s2) mapped affinely:
  //   x1 = u, y1 = v, x2 = s1, (y2, y3) = s2 (cos theta, sin theta),
  //   x3 = epsilon * s1^2, remaining pairs zero.
  int na = sc.ambient.dim;
  const int n = 5;
  std::vector<Expr> map(na, Expr::constant(0.0));
  map[0] = Expr::coord(0);
  map[1] = Expr::coord(1);
  map[2] = Expr::coord(2);
  map[3] = Expr::coord(3);
  map[4] = Expr::constant(std::cos(theta)) * Expr::coord(4);
  map[5] = Expr::constant(epsilon) * Expr::pow(Expr::coord(3), 2);
  map[6] = Expr::constant(std::sin(theta)) * Expr::coord(4);

  sc.immersion.n = n;
  sc.immersion.ambient_dim = na;
  sc.immersion.map = std::move(map);
  SplitSpec sp;
  sp.d_basis = {unit_dir(n, 1), unit_dir(n, 2)};
  sp.dtheta_basis = {unit_dir(n, 3), unit_dir(n, 4)};
  sp.xi_dir = unit_dir(n, 0);
  sc.immersion.splits = std::move(sp);

  sc.has_factors = true;
  sc.nt_indices = {0, 1, 2};
  sc.ntheta_indices = {3, 4};
  sc.warping = parse_expr("exp(x0)", n);
  sc.has_warping = true;
  sc.theta = theta;
  sc.has_theta = true;
  sc.has_declared_ab = true;
  sc.alpha = 0.0;
  sc.beta = 1.0;
  sc.approximate = epsilon != 0.0;

  sc.sampling = {100, seed};
  sc.box.assign(n, {-2.0, 2.0});
  sc.box[0] = {-1.0, 1.0};
  return sc;
}

Scenario make_fiber_xi_candidate(const std::string& ambient_model, uint64_t seed) {
  Scenario sc;
  sc.id = "fiber_xi_candidate_" + ambient_model;
  sc.ambient = builtin_ambient(ambient_model, 3);
  int na = sc.ambient.dim;
  const int n = 3;
  // (u, v, t) -> (t, u, v, 0, ...): an invariant plane as the first factor
  // and the distinguished direction alone as the claimed fiber.
  std::vector<Expr> map(na, Expr::constant(0.0));
  map[0] = Expr::coord(2);
  map[1] = Expr::coord(0);
  map[2] = Expr::coord(1);
  sc.immersion.n = n;
  sc.immersion.ambient_dim = na;
  sc.immersion.map = std::move(map);
  SplitSpec sp;
  sp.d_basis = {unit_dir(n, 0), unit_dir(n, 1)};
  sp.xi_dir = unit_dir(n, 2);
  sc.immersion.splits = std::move(sp);

  sc.has_factors = true;
  sc.nt_indices = {0, 1};
  sc.ntheta_indices = {2};
  sc.warping = parse_expr("exp(0.5*x0)", n);  // the claimed non-trivial warping
  sc.has_warping = true;
  sc.sampling = {100, seed};
  sc.box.assign(n, {-2.0, 2.0});
  sc.box[2] = {-1.0, 1.0};
  return sc;
}

Scenario make_slant_base_candidate(const std::string& ambient_model, uint64_t seed) {
  Scenario sc;
  sc.id = "slant_base_candidate_" + ambient_model;
  sc.ambient = builtin_ambient(ambient_model, 3);
  int na = sc.ambient.dim;
  const int n = 4;
  // (a, b, c, d): a runs along the distinguished direction, b spans a plane
  // tilted across two fiber pairs, (c, d) is an invariant fiber pair.
  const double psi = 0.7853981633974483;  // tilt of the slant plane
  std::vector<Expr> map(na, Expr::constant(0.0));
  map[0] = Expr::coord(0);
  map[1] = Expr::coord(2);
  map[2] = Expr::coord(3);
  map[3] = Expr::constant(std::cos(psi)) * Expr::coord(1);
  map[6] = Expr::constant(std::sin(psi)) * Expr::coord(1);
  sc.immersion.n = n;
  sc.immersion.ambient_dim = na;
  sc.immersion.map = std::move(map);
  SplitSpec sp;
  sp.d_basis = {unit_dir(n, 2), unit_dir(n, 3)};
  sp.dtheta_basis = {unit_dir(n, 1)};
  sp.xi_dir = unit_dir(n, 0);
  sc.immersion.splits = std::move(sp);

  sc.has_factors = true;
  sc.nt_indices = {2, 3};
  sc.ntheta_indices = {0, 1};
  sc.warping = parse_expr("1 + 0.1*x1^2", n);  // claimed warping on the slant base
  sc.has_warping = true;
  sc.theta = psi;
  sc.has_theta = true;
  sc.sampling = {100, seed};
  sc.box.assign(n, {-1.0, 1.0});
  return sc;
}

Scenario make_sphere_scenario(uint64_t seed) {
  Scenario sc;
  sc.id = "sphere";
  sc.ambient = builtin_ambient("cosymplectic", 1);
  const int n = 2;
  sc.immersion.n = n;
  sc.immersion.ambient_dim = 3;
  sc.immersion.map = {parse_expr("cos(x0)", n), parse_expr("sin(x0)*cos(x1)", n),
                      parse_expr("sin(x0)*sin(x1)", n)};
  sc.sampling = {60, seed};
  sc.box = {{0.4, 2.7}, {-2.0, 2.0}};
  return sc;
}

Scenario make_graph_scenario(const std::vector<double>& q, uint64_t seed) {
  if (q.size() != 5)
    fail(ErrorKind::InvalidArgument, "graph scenario takes 5 quadratic coefficients");
  Scenario sc;
  sc.id = "graph";
  sc.ambient = builtin_ambient("cosymplectic", 1);
  const int n = 2;
  Expr x = Expr::coord(0), y = Expr::coord(1);
  Expr height = Expr::constant(q[0]) * x * x + Expr::constant(q[1]) * x * y +
                Expr::constant(q[2]) * y * y + Expr::constant(q[3]) * x +
                Expr::constant(q[4]) * y;
  sc.immersion.n = n;
  sc.immersion.ambient_dim = 3;
  sc.immersion.map = {height, x, y};
  sc.sampling = {60, seed};
  sc.box = {{-1.0, 1.0}, {-1.0, 1.0}};
  return sc;
}

}  // namespace actwarp
