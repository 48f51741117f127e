// SPDX-License-Identifier: Apache-2.0
#include "linalg.hpp"

#include <algorithm>
#include <cmath>

namespace actwarp {

Mat Mat::identity(int n) {
  Mat m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Vec Mat::col(int j) const {
  Vec v(r_);
  for (int i = 0; i < r_; ++i) v[i] = (*this)(i, j);
  return v;
}

Vec Mat::row(int i) const {
  Vec v(c_);
  for (int j = 0; j < c_; ++j) v[j] = (*this)(i, j);
  return v;
}

Mat operator*(const Mat& x, const Mat& y) {
  if (x.c_ != y.r_) fail(ErrorKind::InvalidArgument, "matrix product shape mismatch");
  Mat out(x.r_, y.c_);
  for (int i = 0; i < x.r_; ++i)
    for (int k = 0; k < x.c_; ++k) {
      double v = x(i, k);
      if (v == 0.0) continue;
      for (int j = 0; j < y.c_; ++j) out(i, j) += v * y(k, j);
    }
  return out;
}

Mat operator+(const Mat& x, const Mat& y) {
  Mat out = x;
  for (int i = 0; i < x.r_; ++i)
    for (int j = 0; j < x.c_; ++j) out(i, j) += y(i, j);
  return out;
}

Mat operator-(const Mat& x, const Mat& y) {
  Mat out = x;
  for (int i = 0; i < x.r_; ++i)
    for (int j = 0; j < x.c_; ++j) out(i, j) -= y(i, j);
  return out;
}

Mat Mat::transposed() const {
  Mat out(c_, r_);
  for (int i = 0; i < r_; ++i)
    for (int j = 0; j < c_; ++j) out(j, i) = (*this)(i, j);
  return out;
}

Vec Mat::apply(std::span<const double> v) const {
  if (static_cast<int>(v.size()) != c_)
    fail(ErrorKind::InvalidArgument, "matrix apply shape mismatch");
  Vec out(r_, 0.0);
  for (int i = 0; i < r_; ++i)
    for (int j = 0; j < c_; ++j) out[i] += (*this)(i, j) * v[j];
  return out;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double dot_g(const Mat& g, std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (int i = 0; i < g.rows(); ++i)
    for (int j = 0; j < g.cols(); ++j) s += a[i] * g(i, j) * b[j];
  return s;
}

Vec axpy(double a, std::span<const double> x, std::span<const double> y) {
  Vec out(x.size());
  for (size_t i = 0; i < x.size(); ++i) out[i] = a * x[i] + y[i];
  return out;
}

Vec scaled(std::span<const double> x, double a) {
  Vec out(x.size());
  for (size_t i = 0; i < x.size(); ++i) out[i] = a * x[i];
  return out;
}

double norm_inf(std::span<const double> x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

namespace {

double norm1(const Mat& m) {
  double best = 0.0;
  for (int j = 0; j < m.cols(); ++j) {
    double s = 0.0;
    for (int i = 0; i < m.rows(); ++i) s += std::abs(m(i, j));
    best = std::max(best, s);
  }
  return best;
}

// Gauss-Jordan with partial pivoting; returns false on a zero pivot.
bool invert_inplace(Mat a, Mat& out) {
  int n = a.rows();
  out = Mat::identity(n);
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int i = col + 1; i < n; ++i)
      if (std::abs(a(i, col)) > std::abs(a(piv, col))) piv = i;
    if (a(piv, col) == 0.0) return false;
    if (piv != col)
      for (int j = 0; j < n; ++j) {
        std::swap(a(piv, j), a(col, j));
        std::swap(out(piv, j), out(col, j));
      }
    double inv = 1.0 / a(col, col);
    for (int j = 0; j < n; ++j) {
      a(col, j) *= inv;
      out(col, j) *= inv;
    }
    for (int i = 0; i < n; ++i) {
      if (i == col) continue;
      double f = a(i, col);
      if (f == 0.0) continue;
      for (int j = 0; j < n; ++j) {
        a(i, j) -= f * a(col, j);
        out(i, j) -= f * out(col, j);
      }
    }
  }
  return true;
}

}  // namespace

Mat inverse(const Mat& m, double cond_limit) {
  if (m.rows() != m.cols()) fail(ErrorKind::InvalidArgument, "inverse of non-square matrix");
  Mat out;
  if (!invert_inplace(m, out))
    fail(ErrorKind::SingularMetric, "matrix is singular");
  double cond = norm1(m) * norm1(out);
  if (!(cond < cond_limit))
    fail(ErrorKind::SingularMetric,
         "matrix condition estimate " + std::to_string(cond) + " exceeds limit");
  return out;
}

double determinant(const Mat& m) {
  Mat a = m;
  int n = a.rows();
  double det = 1.0;
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int i = col + 1; i < n; ++i)
      if (std::abs(a(i, col)) > std::abs(a(piv, col))) piv = i;
    if (a(piv, col) == 0.0) return 0.0;
    if (piv != col) {
      for (int j = 0; j < n; ++j) std::swap(a(piv, j), a(col, j));
      det = -det;
    }
    det *= a(col, col);
    for (int i = col + 1; i < n; ++i) {
      double f = a(i, col) / a(col, col);
      for (int j = col; j < n; ++j) a(i, j) -= f * a(col, j);
    }
  }
  return det;
}

Mat cholesky(const Mat& m) {
  int n = m.rows();
  Mat l(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      double s = m(i, j);
      for (int k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      if (i == j) {
        if (s <= 0.0)
          fail(ErrorKind::SingularMetric, "matrix not positive definite in cholesky");
        l(i, i) = std::sqrt(s);
      } else {
        l(i, j) = s / l(j, j);
      }
    }
  }
  return l;
}

void jacobi_eigen(const Mat& m, Vec& eigenvalues, Mat& eigenvectors) {
  int n = m.rows();
  Mat a = m;
  Mat v = Mat::identity(n);
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (off < 1e-30) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        if (std::abs(a(p, q)) < 1e-300) continue;
        double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        double t = (theta >= 0 ? 1.0 : -1.0) /
                   (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        for (int k = 0; k < n; ++k) {
          double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int x, int y) { return a(x, x) < a(y, y); });
  eigenvalues.assign(n, 0.0);
  eigenvectors = Mat(n, n);
  for (int j = 0; j < n; ++j) {
    eigenvalues[j] = a(order[j], order[j]);
    for (int i = 0; i < n; ++i) eigenvectors(i, j) = v(i, order[j]);
  }
}

void householder_qr(const Mat& a, Mat& q, Mat& r) {
  int m = a.rows(), n = a.cols();
  if (m < n) fail(ErrorKind::InvalidArgument, "qr expects rows >= cols");
  r = a;
  q = Mat::identity(m);
  for (int k = 0; k < n; ++k) {
    double norm = 0.0;
    for (int i = k; i < m; ++i) norm += r(i, k) * r(i, k);
    norm = std::sqrt(norm);
    if (norm == 0.0) continue;
    double alpha = r(k, k) >= 0 ? -norm : norm;
    Vec v(m, 0.0);
    v[k] = r(k, k) - alpha;
    for (int i = k + 1; i < m; ++i) v[i] = r(i, k);
    double vnorm2 = 0.0;
    for (int i = k; i < m; ++i) vnorm2 += v[i] * v[i];
    if (vnorm2 == 0.0) continue;
    auto reflect = [&](Mat& t) {
      for (int j = 0; j < t.cols(); ++j) {
        double s = 0.0;
        for (int i = k; i < m; ++i) s += v[i] * t(i, j);
        s = 2.0 * s / vnorm2;
        for (int i = k; i < m; ++i) t(i, j) -= s * v[i];
      }
    };
    reflect(r);
    reflect(q);
  }
  q = q.transposed();
}

Vec singular_values(const Mat& a) {
  Mat ata = a.transposed() * a;
  Vec ev;
  Mat vecs;
  jacobi_eigen(ata, ev, vecs);
  Vec sv(ev.size());
  for (size_t i = 0; i < ev.size(); ++i)
    sv[ev.size() - 1 - i] = std::sqrt(std::max(0.0, ev[i]));
  return sv;
}

GramSchmidtResult gram_schmidt(const Mat& g, const std::vector<Vec>& input, double tol) {
  GramSchmidtResult out;
  for (int idx = 0; idx < static_cast<int>(input.size()); ++idx) {
    Vec v = input[idx];
    for (int pass = 0; pass < 2; ++pass)
      for (const Vec& e : out.vectors) {
        double c = dot_g(g, v, e);
        v = axpy(-c, e, v);
      }
    double n2 = dot_g(g, v, v);
    if (n2 < tol * tol) {
      out.collapsed.push_back(idx);
      continue;
    }
    double inv = 1.0 / std::sqrt(n2);
    out.vectors.push_back(scaled(v, inv));
    out.kept.push_back(idx);
  }
  return out;
}

double orthonormality_residual(const Mat& g, const std::vector<Vec>& vectors) {
  double worst = 0.0;
  for (size_t i = 0; i < vectors.size(); ++i)
    for (size_t j = i; j < vectors.size(); ++j) {
      double want = i == j ? 1.0 : 0.0;
      worst = std::max(worst, std::abs(dot_g(g, vectors[i], vectors[j]) - want));
    }
  return worst;
}

}  // namespace actwarp
