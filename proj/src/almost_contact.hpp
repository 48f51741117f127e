// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "geometry.hpp"
#include "report.hpp"
#include "rng.hpp"

namespace actwarp {

/// Odd-dimensional metric structure (phi, xi, eta, g): a (1,1) tensor, its
/// Reeb field, the dual one-form and a compatible metric, all given as
/// coordinate expressions on one chart.
struct AlmostContactStructure {
  std::string name;  // model label used in reports
  int dim = 0;       // 2m+1
  MetricField metric;
  std::vector<Expr> phi;  // dim*dim row major, (phi X)^i = phi[i][j] X^j
  std::vector<Expr> xi;   // dim components
  std::vector<Expr> eta;  // dim components
  std::vector<std::pair<double, double>> box;  // sampling box per coordinate

  Mat phi_values(std::span<const double> p) const;
  Vec xi_values(std::span<const double> p) const;
  Vec eta_values(std::span<const double> p) const;
};

/// Built-in models: "cosymplectic", "kenmotsu", "sasakian"; chart order is
/// the distinguished coordinate first, then the pairs (x_i, y_i).
AlmostContactStructure builtin_ambient(const std::string& name, int m);

/// Cached tensor data of a structure at one chart point, including the
/// ambient connection. Built once per sample point.
struct AmbientPointData {
  const AlmostContactStructure* structure = nullptr;
  Vec x;
  Mat g;
  Mat g_inv;
  Mat phi;
  Vec xi;
  Vec eta;
  std::vector<double> gamma;        // [k][i][j]
  std::vector<double> dphi;         // dphi[i][j][k] = d_k phi^i_j
  double gamma_at(int k, int i, int j) const {
    return gamma[(static_cast<size_t>(k) * phi.rows() + i) * phi.rows() + j];
  }
  double dphi_at(int i, int j, int k) const {
    return dphi[(static_cast<size_t>(i) * phi.rows() + j) * phi.rows() + k];
  }
  /// nabla_X Y for a coordinate-constant field Y (pure Christoffel term).
  Vec covariant_constant(std::span<const double> X, std::span<const double> Y) const;
};

AmbientPointData ambient_at(const AlmostContactStructure& s, std::span<const double> x);

struct Sampling {
  int count = 100;
  uint64_t seed = 1;
};

CheckReport validate_structure(const AlmostContactStructure& s, const Sampling& sampling,
                               double tolerance);

/// (nabla_X phi) Y at p for coordinate-constant fields X, Y; tensorial in
/// both arguments, so constant extensions lose nothing.
Vec covariant_phi(const AmbientPointData& a, std::span<const double> X,
                  std::span<const double> Y);

/// Symmetrized covariant derivative of phi minus its (alpha, beta) model:
/// zero exactly when the structure has that type.
Vec nts_defect(const AmbientPointData& a, double alpha, double beta,
               std::span<const double> X, std::span<const double> Y);

struct AlphaBetaEstimate {
  double alpha = 0.0;
  double beta = 0.0;
  double residual = 0.0;  // max defect norm after the fit
  int samples = 0;
};

/// Least-squares fit of constant (alpha, beta) over random (X, Y, p).
AlphaBetaEstimate estimate_alpha_beta(const AlmostContactStructure& s,
                                      const Sampling& sampling);

}  // namespace actwarp
