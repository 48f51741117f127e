// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <span>
#include <vector>

#include "errors.hpp"

namespace actwarp {

using Vec = std::vector<double>;

/// Dense row-major matrix; everything here is tiny (n <= 17), so plain
/// O(n^3) algorithms are used throughout.
class Mat {
public:
  Mat() = default;
  Mat(int rows, int cols, double fill = 0.0)
      : r_(rows), c_(cols), a_(static_cast<size_t>(rows) * cols, fill) {}

  static Mat identity(int n);

  int rows() const { return r_; }
  int cols() const { return c_; }
  double& operator()(int i, int j) { return a_[static_cast<size_t>(i) * c_ + j]; }
  double operator()(int i, int j) const { return a_[static_cast<size_t>(i) * c_ + j]; }

  Vec col(int j) const;
  Vec row(int i) const;

  friend Mat operator*(const Mat& x, const Mat& y);
  friend Mat operator+(const Mat& x, const Mat& y);
  friend Mat operator-(const Mat& x, const Mat& y);
  Mat transposed() const;
  Vec apply(std::span<const double> v) const;

private:
  int r_ = 0, c_ = 0;
  std::vector<double> a_;
};

double dot(std::span<const double> a, std::span<const double> b);
double dot_g(const Mat& g, std::span<const double> a, std::span<const double> b);
Vec axpy(double a, std::span<const double> x, std::span<const double> y);  // a*x + y
Vec scaled(std::span<const double> x, double a);
double norm_inf(std::span<const double> x);

/// LU inverse with partial pivoting; rejects matrices whose 1-norm
/// condition estimate exceeds `cond_limit`.
Mat inverse(const Mat& m, double cond_limit = 1e12);
double determinant(const Mat& m);

/// Cholesky factor L (lower) of a symmetric positive-definite matrix.
Mat cholesky(const Mat& m);

/// Eigenvalues (ascending) and eigenvectors (columns) of a symmetric
/// matrix via cyclic Jacobi rotations.
void jacobi_eigen(const Mat& m, Vec& eigenvalues, Mat& eigenvectors);

/// Full Householder QR of an m x n matrix (m >= n): returns Q (m x m) and
/// R (m x n). Columns n..m-1 of Q span the orthogonal complement of the
/// column space when A has full column rank.
void householder_qr(const Mat& a, Mat& q, Mat& r);

/// Singular values (descending) via Jacobi on A^T A; adequate for the
/// well-scaled rank checks used here.
Vec singular_values(const Mat& a);

struct GramSchmidtResult {
  std::vector<Vec> vectors;       // orthonormal output
  std::vector<int> kept;          // indices of inputs that survived
  std::vector<int> collapsed;     // inputs rejected as dependent
};

/// Modified Gram-Schmidt under inner product <u,v> = u^T G v with
/// re-orthogonalization; inputs whose projected norm falls below `tol`
/// are reported in `collapsed` rather than silently dropped.
GramSchmidtResult gram_schmidt(const Mat& g, const std::vector<Vec>& input, double tol);

/// max_ij |<v_i, v_j>_G - delta_ij|
double orthonormality_residual(const Mat& g, const std::vector<Vec>& vectors);

}  // namespace actwarp
