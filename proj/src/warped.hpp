// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "scenario.hpp"

namespace actwarp {

/// Product chart carrying g1 on the first n1 coordinates and f^2 g2 on the
/// rest, with f a positive function of the base coordinates only.
struct WarpedProductSpec {
  std::string name;
  MetricField base;    // n1-dimensional
  MetricField fiber;   // n2-dimensional, in its own chart
  Expr warping;        // expression in the base coordinates
  std::vector<std::pair<double, double>> box;  // product-chart sampling box

  int n1() const { return base.dim(); }
  int n2() const { return fiber.dim(); }
  int dim() const { return n1() + n2(); }
};

/// Product metric g1 + f^2 g2 on the combined chart; rejects warpings that
/// fail positivity at probe points.
MetricField build_warped_metric(const WarpedProductSpec& spec);

/// Structural detection: true when the warping expression has no
/// coordinate dependence at all.
bool warping_is_constant(const WarpedProductSpec& spec);

/// The stock of warped metrics the connection identities are checked on.
std::vector<WarpedProductSpec> builtin_warped_specs();

/// Connection identities of the product metric: base-parallel fields stay
/// in the base, mixed derivatives scale by the logarithmic gradient of f,
/// and fiber-fiber derivatives split into the fiber connection minus the
/// scaled base gradient. Also checks the fiber-curvature/Laplacian identity
/// and the block consistency of the gradient of log f.
CheckReport check_warped_connection(const WarpedProductSpec& spec, const Sampling& sampling,
                                    double tol);

// ---------------------------------------------------------------------------
// Scenario-level factor geometry
// ---------------------------------------------------------------------------

/// Where the distinguished direction sits relative to the declared factors.
enum class XiLocation { FirstFactor, SecondFactor, NotTangent };

struct WarpedCertificate {
  CheckReport report;
  XiLocation xi_location = XiLocation::NotTangent;
  bool trivial_warping = false;
  /// Which factor the warping expression depends on ("first", "second",
  /// "none").
  std::string warping_support;
};

/// Certifies the warped-product hypothesis on an immersed scenario: block
/// diagonality, base block independent of fiber coordinates, fiber block
/// equal to f^2 times a base-independent matrix, positive warping, and the
/// distinguished direction tangent to the submanifold and located in the
/// base factor.
WarpedCertificate certify_warped(const Scenario& sc);

/// Totally-geodesic base / umbilical fiber checks on a certified scenario,
/// through the induced connection.
CheckReport check_factor_geometry(const Scenario& sc);

/// Gradient of log f on the submanifold chart (sub coordinates).
Vec warp_log_gradient(const Scenario& sc, const ImmersionEval& ev);

/// Which declared factor carries the warping: "first", "second", "none",
/// or "mixed".
std::string scenario_warping_support(const Scenario& sc);

/// The identity and bound checks assume the invariant factor is the base;
/// raises a precondition failure otherwise.
void require_invariant_base(const Scenario& sc);

}  // namespace actwarp
