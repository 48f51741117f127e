// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>

#include "almost_contact.hpp"

namespace actwarp {

/// Declared tangent splits of a submanifold: an invariant part, a slant
/// part, and the distinguished direction, all as expression-valued vectors
/// in the submanifold chart.
struct SplitSpec {
  std::vector<std::vector<Expr>> d_basis;
  std::vector<std::vector<Expr>> dtheta_basis;
  std::vector<Expr> xi_dir;
};

struct Immersion {
  int n = 0;            // submanifold dimension
  int ambient_dim = 0;  // 2m+1
  std::vector<Expr> map;
  std::optional<SplitSpec> splits;
};

/// Everything the submanifold machinery needs at one sample point.
struct ImmersionEval {
  const Immersion* immersion = nullptr;
  Vec p;   // sub-chart point
  Vec ax;  // ambient image
  std::vector<Jet> map_jets;  // ambient components, order-3 sub-chart jets
  Mat jac;                    // ambient_dim x n
  std::vector<Mat> hess;      // per ambient component
  MetricJets induced;         // induced metric, order-2 sub-chart jets
  Mat g, g_inv;
  AmbientPointData amb;
  double sigma_min = 0.0;
  std::vector<Vec> normal_complement;  // deterministic g-orthonormal normal basis

  int n_sub() const { return immersion->n; }
  int n_amb() const { return immersion->ambient_dim; }

  Vec push(std::span<const double> sub) const { return jac.apply(sub); }
  Vec tangential_coeffs(std::span<const double> ambient_vec) const;
  Vec tangential_part(std::span<const double> ambient_vec) const;
  Vec normal_part(std::span<const double> ambient_vec) const;

  /// Ambient acceleration vector of two coordinate-constant tangent fields:
  /// the full covariant derivative before splitting off the tangential part.
  /// Its normal projection is the second fundamental form; pairing it with
  /// any normal vector needs no projection at all.
  Vec gauss_vec(std::span<const double> c1, std::span<const double> c2) const;

  double eta_of(std::span<const double> ambient_vec) const { return dot(amb.eta, ambient_vec); }
};

ImmersionEval eval_immersion(const Immersion& imm, const AlmostContactStructure& ambient,
                             const Vec& p);
// The evaluation borrows both arguments; temporaries would dangle.
ImmersionEval eval_immersion(Immersion&&, const AlmostContactStructure&, const Vec&) = delete;
ImmersionEval eval_immersion(const Immersion&, AlmostContactStructure&&, const Vec&) = delete;

/// Induced metric values only (cheap path used by examples/tests).
Mat induced_metric(const Immersion& imm, const AlmostContactStructure& ambient, const Vec& p);

CurvatureSample intrinsic_curvature(const ImmersionEval& ev);
CurvatureSample ambient_curvature(const ImmersionEval& ev);

/// Ambient-chart expressions composed with the immersion, as sub-chart jets.
std::vector<Jet> compose_ambient_jets(const ImmersionEval& ev, std::span<const Expr> comps,
                                      int order);

/// Covariant derivative along a sub-chart direction of an ambient-vector
/// field given by sub-chart jets of its components.
Vec covariant_along(const ImmersionEval& ev, std::span<const double> dir_sub,
                    const std::vector<Jet>& field);

// ---------------------------------------------------------------------------
// Frames
// ---------------------------------------------------------------------------

struct FrameSample {
  Point point;
  std::vector<Vec> tangent_amb;
  std::vector<Vec> tangent_sub;  // sub-chart coefficients of the tangent frame
  std::vector<Vec> normal_amb;
  std::vector<std::string> provenance;
  double gram_residual = 0.0;

  // Split bookkeeping; empty when the frame is not split-adapted.
  std::vector<int> d_idx, xi_idx, dtheta_idx;  // tangent positions
  std::vector<int> f_idx, nu_idx;              // normal positions
  int pairs_d = 0, pairs_dtheta = 0;

  /// Deviation of the declared split structure from an exact adapted frame
  /// before the final re-orthonormalization pass.
  double adapted_deviation = 0.0;
};

/// Gram-Schmidt over the Jacobian columns, then the normal complement.
FrameSample orthonormal_frames(const ImmersionEval& ev);

/// Split-ordered frame: invariant part with its phi-partners, the
/// distinguished direction, slant part with sec(theta)-scaled partners;
/// normals start with the csc(theta)-scaled images of the slant frame and
/// end with the invariant normal remainder.
FrameSample adapted_frames(const ImmersionEval& ev, double theta);

// ---------------------------------------------------------------------------
// Second fundamental form and shape operator
// ---------------------------------------------------------------------------

struct SffSample {
  std::vector<Mat> h;  // h[r](i, j) over the normal frame
  Vec mean_curvature;  // ambient vector
  double mean_sq = 0.0;
  double h_norm_sq = 0.0;
  double coeff(int r, int i, int j) const { return h[r](i, j); }
};

SffSample second_fundamental_form(const ImmersionEval& ev, const FrameSample& fr);

/// Shape operator along a normal vector, computed through the derivative of
/// a projected normal extension (independent of the gauss_vec route):
/// returns A with A(i, j) = g(A_N e_i, e_j).
Mat shape_operator(const ImmersionEval& ev, const FrameSample& fr, const Vec& normal_amb);

struct PFSplit {
  Mat p;  // tangential component of phi on the tangent frame
  Mat f;  // normal component
  double reconstruction_residual = 0.0;
};

PFSplit pf_decompose(const ImmersionEval& ev, const FrameSample& fr);

// ---------------------------------------------------------------------------
// Slant classification
// ---------------------------------------------------------------------------

enum class SlantClass { Invariant, AntiInvariant, ProperSlant, NotSlant };

const char* slant_class_name(SlantClass c);

struct SlantReport {
  double lambda = 0.0;  // fitted squared cosine
  double theta = 0.0;
  double residual = 0.0;  // constancy residual of the fit
  SlantClass cls = SlantClass::NotSlant;
  int samples = 0;
};

SlantReport slant_report(const AlmostContactStructure& ambient, const Immersion& imm,
                         const std::vector<std::vector<Expr>>& basis, const Sampling& sampling,
                         const std::vector<std::pair<double, double>>& box);

/// Verifies the three split conditions and the normal-bundle decomposition;
/// `enforce` false keeps the records informational (approximate scenarios).
CheckReport semi_slant_check(const AlmostContactStructure& ambient, const Immersion& imm,
                             double declared_theta, const Sampling& sampling,
                             const std::vector<std::pair<double, double>>& box, double tol,
                             bool enforce = true);

}  // namespace actwarp
