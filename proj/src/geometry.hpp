// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "jet.hpp"
#include "linalg.hpp"

namespace actwarp {

struct Point {
  std::string chart;
  Vec coords;
};

/// Symmetric expression-valued metric; only i <= j entries are stored.
class MetricField {
public:
  MetricField() = default;
  MetricField(int n, std::vector<Expr> upper_triangle);

  static MetricField euclidean(int n);
  static MetricField diagonal(std::vector<Expr> diag);
  static MetricField from_full(int n, const std::vector<Expr>& full_row_major);

  int dim() const { return n_; }
  const Expr& entry(int i, int j) const;

  Mat values_at(std::span<const double> p) const;
  /// Full symmetric table of order-`order` jets at p.
  std::vector<Jet> jets_at(std::span<const double> p, int order) const;

  /// Smallest eigenvalue at p; positive-definiteness gate for samplers.
  double smallest_eigenvalue(std::span<const double> p) const;

private:
  int index(int i, int j) const;
  int n_ = 0;
  std::vector<Expr> g_;  // packed upper triangle
};

/// Metric data at one point, as jets in the chart coordinates. This is the
/// common entry into the connection/curvature pipeline for both expression
/// metrics and metrics induced through an immersion.
struct MetricJets {
  int n = 0;
  std::vector<Jet> g;  // n*n, order >= 1 (order 2 needed for curvature)

  const Jet& at(int i, int j) const { return g[static_cast<size_t>(i) * n + j]; }
  Mat values() const;
};

struct ConnectionSample {
  Point point;
  int n = 0;
  std::vector<double> gamma;  // gamma[k][i][j], symmetric in (i, j)
  double gamma_at(int k, int i, int j) const {
    return gamma[(static_cast<size_t>(k) * n + i) * n + j];
  }
  /// max residual of d_k g_ij - Gamma^l_ki g_lj - Gamma^l_kj g_il over all
  /// index triples; filled in by the constructor path.
  double compatibility_residual = 0.0;
};

struct CurvatureSample {
  Point point;
  int n = 0;
  Mat g;                  // metric values at the point
  std::vector<double> r;  // r[i][j][k][l] = metric-lowered curvature
  double tau = 0.0;       // trace computed in a coordinate-built frame

  double at(int i, int j, int k, int l) const {
    return r[((static_cast<size_t>(i) * n + j) * n + k) * n + l];
  }
  /// Multilinear contraction R(x, y, z, w).
  double contract(std::span<const double> x, std::span<const double> y,
                  std::span<const double> z, std::span<const double> w) const;
};

/// Christoffel coefficients as order-(order-1) jets, plus the inverse
/// metric jets they were built from.
struct ConnectionJets {
  int n = 0;
  std::vector<Jet> gamma;  // [k][i][j]
  std::vector<Jet> g_inv;  // n*n
  const Jet& at(int k, int i, int j) const {
    return gamma[(static_cast<size_t>(k) * n + i) * n + j];
  }
};

ConnectionJets christoffel_jets(const MetricJets& m);
ConnectionSample connection_sample(const MetricJets& m, const Point& p);
CurvatureSample curvature_sample(const MetricJets& m, const Point& p);

ConnectionSample christoffel(const MetricField& g, const Point& p);
CurvatureSample riemann(const MetricField& g, const Point& p);

double sectional_curvature(const CurvatureSample& curv, std::span<const double> u,
                           std::span<const double> v);
double scalar_curvature(const CurvatureSample& curv, const std::vector<Vec>& frame);
double partial_scalar_curvature(const CurvatureSample& curv,
                                const std::vector<Vec>& subframe);

Vec gradient(const MetricField& g, const Expr& psi, const Point& p);

/// Frame-trace convention: sum over an orthonormal frame of
/// (grad_{e_i} e_i) psi - e_i e_i psi. Note this is the negative of the
/// divergence-form Laplacian.
double laplacian(const MetricField& g, const Expr& psi, const Point& p,
                 const std::vector<Vec>& frame);

/// Same trace convention computed from point jets, restricted to the
/// coordinate subset `axes` (used for block metrics).
double laplacian_on_axes(const MetricJets& m, const Jet& psi, const std::vector<int>& axes);

/// Orthonormal frame from Gram-Schmidt over the coordinate basis.
std::vector<Vec> coordinate_frame(const Mat& g);

/// Frames are accepted when their Gram residual is below this gate.
inline constexpr double kFrameGate = 1e-8;

}  // namespace actwarp
