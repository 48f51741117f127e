// SPDX-License-Identifier: Apache-2.0
#include "geometry.hpp"

#include <cmath>

namespace actwarp {

MetricField::MetricField(int n, std::vector<Expr> upper_triangle) : n_(n), g_(std::move(upper_triangle)) {
  if (static_cast<int>(g_.size()) != n * (n + 1) / 2)
    fail(ErrorKind::InvalidArgument, "metric entry count mismatch");
}

MetricField MetricField::euclidean(int n) {
  std::vector<Expr> diag(n, Expr::constant(1.0));
  return diagonal(std::move(diag));
}

MetricField MetricField::diagonal(std::vector<Expr> diag) {
  int n = static_cast<int>(diag.size());
  std::vector<Expr> packed;
  packed.reserve(n * (n + 1) / 2);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      packed.push_back(i == j ? diag[i] : Expr::constant(0.0));
  return MetricField(n, std::move(packed));
}

MetricField MetricField::from_full(int n, const std::vector<Expr>& full) {
  if (static_cast<int>(full.size()) != n * n)
    fail(ErrorKind::InvalidArgument, "metric entry count mismatch");
  std::vector<Expr> packed;
  packed.reserve(n * (n + 1) / 2);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) packed.push_back(full[i * n + j]);
  return MetricField(n, std::move(packed));
}

int MetricField::index(int i, int j) const {
  if (i > j) std::swap(i, j);
  return i * n_ - i * (i - 1) / 2 + (j - i);
}

const Expr& MetricField::entry(int i, int j) const { return g_[index(i, j)]; }

Mat MetricField::values_at(std::span<const double> p) const {
  Mat m(n_, n_);
  for (int i = 0; i < n_; ++i)
    for (int j = i; j < n_; ++j) m(i, j) = m(j, i) = eval(entry(i, j), p);
  return m;
}

std::vector<Jet> MetricField::jets_at(std::span<const double> p, int order) const {
  auto space = JetSpace::get(n_, order);
  std::vector<Jet> coords;
  coords.reserve(n_);
  for (int i = 0; i < n_; ++i) coords.push_back(Jet::coordinate(space, i, p[i]));
  std::vector<Jet> out(static_cast<size_t>(n_) * n_);
  for (int i = 0; i < n_; ++i)
    for (int j = i; j < n_; ++j) {
      Jet v = eval_on_jets(entry(i, j), space, coords);
      out[static_cast<size_t>(i) * n_ + j] = v;
      out[static_cast<size_t>(j) * n_ + i] = v;
    }
  return out;
}

double MetricField::smallest_eigenvalue(std::span<const double> p) const {
  Vec ev;
  Mat vecs;
  jacobi_eigen(values_at(p), ev, vecs);
  return ev.front();
}

Mat MetricJets::values() const {
  Mat m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = at(i, j).value();
  return m;
}

// ---------------------------------------------------------------------------
// Connection and curvature
// ---------------------------------------------------------------------------

namespace {

// Gauss-Jordan inverse over jet entries, pivoting on values.
std::vector<Jet> jet_matrix_inverse(const std::vector<Jet>& m, int n) {
  auto space = m[0].space_ptr();
  std::vector<Jet> a = m;
  std::vector<Jet> inv(static_cast<size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      inv[static_cast<size_t>(i) * n + j] = Jet::constant(space, i == j ? 1.0 : 0.0);
  auto A = [&](int i, int j) -> Jet& { return a[static_cast<size_t>(i) * n + j]; };
  auto B = [&](int i, int j) -> Jet& { return inv[static_cast<size_t>(i) * n + j]; };
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int i = col + 1; i < n; ++i)
      if (std::abs(A(i, col).value()) > std::abs(A(piv, col).value())) piv = i;
    if (A(piv, col).value() == 0.0)
      fail(ErrorKind::SingularMetric, "metric not invertible at sample point");
    if (piv != col)
      for (int j = 0; j < n; ++j) {
        std::swap(A(piv, j), A(col, j));
        std::swap(B(piv, j), B(col, j));
      }
    Jet pivot = A(col, col);
    for (int j = 0; j < n; ++j) {
      A(col, j) = A(col, j) / pivot;
      B(col, j) = B(col, j) / pivot;
    }
    for (int i = 0; i < n; ++i) {
      if (i == col) continue;
      Jet f = A(i, col);
      if (f.value() == 0.0 && norm_inf(f.coefficients()) == 0.0) continue;
      for (int j = 0; j < n; ++j) {
        A(i, j) = A(i, j) - f * A(col, j);
        B(i, j) = B(i, j) - f * B(col, j);
      }
    }
  }
  return inv;
}

}  // namespace

ConnectionJets christoffel_jets(const MetricJets& m) {
  int n = m.n;
  if (m.g[0].order() < 1)
    fail(ErrorKind::InvalidArgument, "christoffel needs order >= 1 metric jets");
  int gamma_order = m.g[0].order() - 1;

  // Inverse at the Gamma order, derivatives one order below the input.
  std::vector<Jet> g_low(m.g.size());
  for (size_t k = 0; k < m.g.size(); ++k) g_low[k] = m.g[k].truncated(gamma_order);
  // Condition gate on the value matrix.
  (void)inverse(m.values());
  std::vector<Jet> ginv = jet_matrix_inverse(g_low, n);

  std::vector<Jet> dg(static_cast<size_t>(n) * n * n);  // dg[i][j][k] = d_k g_ij
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        Jet d = m.at(i, j).differentiated(k);
        dg[(static_cast<size_t>(i) * n + j) * n + k] = d;
        dg[(static_cast<size_t>(j) * n + i) * n + k] = d;
      }
  auto DG = [&](int i, int j, int k) -> const Jet& {
    return dg[(static_cast<size_t>(i) * n + j) * n + k];
  };

  ConnectionJets out;
  out.n = n;
  out.g_inv = ginv;
  out.gamma.resize(static_cast<size_t>(n) * n * n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        Jet sum = Jet::constant(g_low[0].space_ptr(), 0.0);
        for (int l = 0; l < n; ++l)
          sum = sum + ginv[static_cast<size_t>(k) * n + l] *
                          (DG(j, l, i) + DG(i, l, j) - DG(i, j, l));
        sum = sum * 0.5;
        out.gamma[(static_cast<size_t>(k) * n + i) * n + j] = sum;
        out.gamma[(static_cast<size_t>(k) * n + j) * n + i] = sum;
      }
  return out;
}

ConnectionSample connection_sample(const MetricJets& m, const Point& p) {
  ConnectionJets cj = christoffel_jets(m);
  int n = m.n;
  ConnectionSample out;
  out.point = p;
  out.n = n;
  out.gamma.resize(static_cast<size_t>(n) * n * n);
  for (size_t idx = 0; idx < out.gamma.size(); ++idx) out.gamma[idx] = cj.gamma[idx].value();

  double worst = 0.0;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double d = m.at(i, j).partial(k);
        for (int l = 0; l < n; ++l)
          d -= out.gamma_at(l, k, i) * m.at(l, j).value() +
               out.gamma_at(l, k, j) * m.at(i, l).value();
        worst = std::max(worst, std::abs(d));
      }
  out.compatibility_residual = worst;
  return out;
}

CurvatureSample curvature_sample(const MetricJets& m, const Point& p) {
  if (m.g[0].order() < 2)
    fail(ErrorKind::InvalidArgument, "curvature needs order >= 2 metric jets");
  int n = m.n;
  ConnectionJets cj = christoffel_jets(m);

  // R^l_{ijk}: curvature operator components of R(d_i, d_j) d_k.
  std::vector<double> rup(static_cast<size_t>(n) * n * n * n);
  auto G = [&](int k, int i, int j) { return cj.at(k, i, j).value(); };
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          double v = cj.at(l, j, k).differentiated(i).value() -
                     cj.at(l, i, k).differentiated(j).value();
          for (int q = 0; q < n; ++q) v += G(l, i, q) * G(q, j, k) - G(l, j, q) * G(q, i, k);
          rup[((static_cast<size_t>(l) * n + i) * n + j) * n + k] = v;
        }

  CurvatureSample out;
  out.point = p;
  out.n = n;
  out.g = m.values();
  out.r.resize(static_cast<size_t>(n) * n * n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double v = 0.0;
          for (int q = 0; q < n; ++q)
            v += out.g(l, q) * rup[((static_cast<size_t>(q) * n + i) * n + j) * n + k];
          out.r[((static_cast<size_t>(i) * n + j) * n + k) * n + l] = v;
        }

  out.tau = scalar_curvature(out, coordinate_frame(out.g));
  return out;
}

ConnectionSample christoffel(const MetricField& g, const Point& p) {
  MetricJets m{g.dim(), g.jets_at(p.coords, 1)};
  return connection_sample(m, p);
}

CurvatureSample riemann(const MetricField& g, const Point& p) {
  MetricJets m{g.dim(), g.jets_at(p.coords, 2)};
  return curvature_sample(m, p);
}

double CurvatureSample::contract(std::span<const double> x, std::span<const double> y,
                                 std::span<const double> z, std::span<const double> w) const {
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    if (x[i] == 0.0) continue;
    for (int j = 0; j < n; ++j) {
      if (y[j] == 0.0) continue;
      for (int k = 0; k < n; ++k) {
        if (z[k] == 0.0) continue;
        double base = x[i] * y[j] * z[k];
        for (int l = 0; l < n; ++l) s += base * at(i, j, k, l) * w[l];
      }
    }
  }
  return s;
}

double sectional_curvature(const CurvatureSample& curv, std::span<const double> u,
                           std::span<const double> v) {
  double uu = dot_g(curv.g, u, u);
  double vv = dot_g(curv.g, v, v);
  double uv = dot_g(curv.g, u, v);
  double denom = uu * vv - uv * uv;
  if (denom < 1e-12)
    fail(ErrorKind::DegeneratePlane, "sectional curvature of a degenerate plane");
  return curv.contract(u, v, v, u) / denom;
}

double scalar_curvature(const CurvatureSample& curv, const std::vector<Vec>& frame) {
  if (static_cast<int>(frame.size()) != curv.n)
    fail(ErrorKind::NonOrthonormalFrame, "scalar curvature needs a full frame");
  return partial_scalar_curvature(curv, frame);
}

double partial_scalar_curvature(const CurvatureSample& curv, const std::vector<Vec>& sub) {
  if (orthonormality_residual(curv.g, sub) > kFrameGate)
    fail(ErrorKind::NonOrthonormalFrame, "frame fails the orthonormality gate");
  double tau = 0.0;
  for (size_t i = 0; i < sub.size(); ++i)
    for (size_t j = i + 1; j < sub.size(); ++j)
      tau += curv.contract(sub[i], sub[j], sub[j], sub[i]);
  return tau;
}

Vec gradient(const MetricField& g, const Expr& psi, const Point& p) {
  Mat ginv = inverse(g.values_at(p.coords));
  Jet j = eval_jet(psi, p.coords, 1);
  Vec d(g.dim());
  for (int i = 0; i < g.dim(); ++i) d[i] = j.partial(i);
  return ginv.apply(d);
}

double laplacian(const MetricField& g, const Expr& psi, const Point& p,
                 const std::vector<Vec>& frame) {
  if (orthonormality_residual(g.values_at(p.coords), frame) > kFrameGate)
    fail(ErrorKind::NonOrthonormalFrame, "frame fails the orthonormality gate");
  MetricJets m{g.dim(), g.jets_at(p.coords, 2)};
  Jet pj = eval_jet(psi, p.coords, 2);
  std::vector<int> axes(g.dim());
  for (int i = 0; i < g.dim(); ++i) axes[i] = i;
  return laplacian_on_axes(m, pj, axes);
}

double laplacian_on_axes(const MetricJets& m, const Jet& psi, const std::vector<int>& axes) {
  int k = static_cast<int>(axes.size());
  Mat block(k, k);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) block(a, b) = m.at(axes[a], axes[b]).value();
  Mat binv = inverse(block);

  // Block Christoffels from block derivatives along block axes only; for a
  // metric that is block diagonal this equals the factor's own connection.
  std::vector<double> gamma(static_cast<size_t>(k) * k * k);
  auto DG = [&](int a, int b, int c) {  // d_{axes[c]} g_{axes[a] axes[b]}
    return m.at(axes[a], axes[b]).partial(axes[c]);
  };
  for (int c = 0; c < k; ++c)
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b) {
        double s = 0.0;
        for (int l = 0; l < k; ++l) s += binv(c, l) * (DG(b, l, a) + DG(a, l, b) - DG(a, b, l));
        gamma[(static_cast<size_t>(c) * k + a) * k + b] = 0.5 * s;
      }

  double acc = 0.0;
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) {
      double second = psi.partial2(axes[a], axes[b]);
      double first = 0.0;
      for (int c = 0; c < k; ++c)
        first += gamma[(static_cast<size_t>(c) * k + a) * k + b] * psi.partial(axes[c]);
      acc += binv(a, b) * (second - first);
    }
  return -acc;
}

std::vector<Vec> coordinate_frame(const Mat& g) {
  int n = g.rows();
  std::vector<Vec> basis;
  for (int i = 0; i < n; ++i) {
    Vec e(n, 0.0);
    e[i] = 1.0;
    basis.push_back(std::move(e));
  }
  auto gs = gram_schmidt(g, basis, 1e-10);
  if (static_cast<int>(gs.vectors.size()) != n)
    fail(ErrorKind::SingularMetric, "metric degenerate while building a frame");
  return gs.vectors;
}

}  // namespace actwarp
