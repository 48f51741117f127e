// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "warped.hpp"

namespace actwarp {

/// Coefficient of the gradient term in the second-fundamental-form bound,
/// written through lambda = cos^2(theta) so the right-angle limit is exactly
/// 2: (2 lambda / 9 + 2) / (1 - lambda).
double slant_bound_coefficient(double theta);

/// Structural identities of the mixed second fundamental form on a warped
/// semi-slant scenario: the distinguished log-derivative of the warping,
/// vanishing of the invariant block against slant normals, the alpha- and
/// gradient-coupled mixed terms, the one-third slant relation, and the
/// reflection identity against the invariant normal remainder.
CheckReport check_sff_identities(const Scenario& sc, double alpha, double beta);

/// Obstruction report for candidates whose distinguished direction sits in
/// the warped fiber: evaluates the covariant identity the structure forces,
/// the value the warped hypothesis would force, and the implied
/// contradiction magnitude.
CheckReport check_obstruction_fiber_xi(const Scenario& sc, const WarpedCertificate& cert,
                                       double alpha, double beta);

/// Obstruction report for candidates warped over a slant base carrying the
/// distinguished direction, with an invariant fiber.
CheckReport check_obstruction_slant_base(const Scenario& sc, const WarpedCertificate& cert,
                                         double alpha, double beta);

/// Squared-norm bound on the second fundamental form against the gradient
/// of the log-warping, with equality diagnostics on the block structure.
CheckReport check_gradient_bound(const Scenario& sc, double alpha, double beta);

/// Mean-curvature trace identity: the full trace squared equals the
/// fiber-block trace squared, so the immersion is minimal along the
/// invariant factor.
CheckReport check_trace_minimality(const Scenario& sc);

/// Scalar-curvature bound: half the squared second fundamental form
/// dominates the ambient partial scalar curvature defect minus the scaled
/// base Laplacian of the warping, cross-validated through the intrinsic
/// curvature balance.
CheckReport check_curvature_bound(const Scenario& sc, double alpha, double beta);

/// Gauss-equation suite on any immersion scenario: the four-argument
/// curvature relation, the sectional decomposition, the scalar balance, and
/// the duality between the second fundamental form and the shape operator.
CheckReport check_gauss(const Scenario& sc);

/// Helpers shared with the tests: mean-curvature-squared from a coefficient
/// table, full trace versus a subset trace.
double mean_sq_from_coeffs(const std::vector<Mat>& h, int n);
double mean_sq_from_subset(const std::vector<Mat>& h, int n, const std::vector<int>& subset);

}  // namespace actwarp
