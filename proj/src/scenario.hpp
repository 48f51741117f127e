// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "immersion.hpp"

namespace actwarp {

/// A fully specified verification scenario: ambient structure, immersed
/// submanifold, declared factor split with a warping expression, the slant
/// angle, the declared or fitted type constants, and the sampling setup.
struct Scenario {
  std::string id;
  AlmostContactStructure ambient;
  Immersion immersion;

  bool has_factors = false;
  std::vector<int> nt_indices;      // invariant factor coordinates
  std::vector<int> ntheta_indices;  // slant factor coordinates
  Expr warping = Expr::constant(1.0);
  bool has_warping = false;

  double theta = 0.0;
  bool has_theta = false;

  bool has_declared_ab = false;
  double alpha = 0.0, beta = 0.0;

  /// Perturbed or otherwise inexact constructions: structural residuals are
  /// reported but only inequality margins are enforced.
  bool approximate = false;

  Sampling sampling;
  std::vector<std::pair<double, double>> box;  // submanifold sampling box
  double tol_identity = 1e-8;
  double tol_inequality = 1e-7;

  std::vector<std::string> checks;  // configured check list ("all" ok)

  int base_dim() const { return static_cast<int>(nt_indices.size()); }
  int fiber_dim() const { return static_cast<int>(ntheta_indices.size()); }
};

/// Affine warped semi-slant submanifold of the exponential-warp ambient
/// model with m >= 3: coordinates (t, u, v, s1, s2), an invariant pair from
/// the first fiber pair, and a slant plane at angle theta through the
/// second and third pairs. `epsilon` bends the construction quadratically
/// in one unused ambient coordinate to leave the equality case.
Scenario make_semi_slant_scenario(int m, double theta, double epsilon = 0.0,
                                  uint64_t seed = 42);

/// Warped candidate in the exponential-warp ambient with the distinguished
/// direction tangent to the second (fiber) factor; used by the obstruction
/// checks.
Scenario make_fiber_xi_candidate(const std::string& ambient_model, uint64_t seed = 42);

/// Candidate of the reversed factor order (slant base containing the
/// distinguished direction, invariant fiber) in a given ambient model.
Scenario make_slant_base_candidate(const std::string& ambient_model, uint64_t seed = 42);

/// Unit sphere chart immersed in the flat 3-dimensional model.
Scenario make_sphere_scenario(uint64_t seed = 42);

/// Quadratic graph over a plane chart in the flat 3-dimensional model.
Scenario make_graph_scenario(const std::vector<double>& quad_coeffs, uint64_t seed = 42);

}  // namespace actwarp
