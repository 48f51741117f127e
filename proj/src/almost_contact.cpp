// SPDX-License-Identifier: Apache-2.0
#include "almost_contact.hpp"

#include <cmath>

namespace actwarp {

Mat AlmostContactStructure::phi_values(std::span<const double> p) const {
  Mat m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m(i, j) = eval(phi[static_cast<size_t>(i) * dim + j], p);
  return m;
}

Vec AlmostContactStructure::xi_values(std::span<const double> p) const {
  Vec v(dim);
  for (int i = 0; i < dim; ++i) v[i] = eval(xi[i], p);
  return v;
}

Vec AlmostContactStructure::eta_values(std::span<const double> p) const {
  Vec v(dim);
  for (int i = 0; i < dim; ++i) v[i] = eval(eta[i], p);
  return v;
}

// ---------------------------------------------------------------------------
// Built-in models
// ---------------------------------------------------------------------------

namespace {

// Chart layout shared by the built-ins: coordinate 0 is the distinguished
// direction (t or z), pair i sits at (1 + 2i, 2 + 2i).
int x_of(int i) { return 1 + 2 * i; }
int y_of(int i) { return 2 + 2 * i; }

AlmostContactStructure base_shell(const std::string& name, int m) {
  AlmostContactStructure s;
  s.name = name;
  s.dim = 2 * m + 1;
  s.phi.assign(static_cast<size_t>(s.dim) * s.dim, Expr::constant(0.0));
  s.xi.assign(s.dim, Expr::constant(0.0));
  s.eta.assign(s.dim, Expr::constant(0.0));
  s.box.assign(s.dim, {-2.0, 2.0});
  s.box[0] = {-1.0, 1.0};
  return s;
}

void set_fiber_rotation(AlmostContactStructure& s, int m) {
  // phi(dx_i) = dy_i, phi(dy_i) = -dx_i
  for (int i = 0; i < m; ++i) {
    s.phi[static_cast<size_t>(y_of(i)) * s.dim + x_of(i)] = Expr::constant(1.0);
    s.phi[static_cast<size_t>(x_of(i)) * s.dim + y_of(i)] = Expr::constant(-1.0);
  }
}

}  // namespace

AlmostContactStructure builtin_ambient(const std::string& name, int m) {
  if (m < 1) fail(ErrorKind::Validation, "builtin ambient needs m >= 1");
  if (2 * m + 1 > kMaxDim)
    fail(ErrorKind::Validation, "ambient dimension exceeds the supported maximum of 16");

  if (name == "cosymplectic") {
    AlmostContactStructure s = base_shell(name, m);
    s.metric = MetricField::euclidean(s.dim);
    set_fiber_rotation(s, m);
    s.xi[0] = Expr::constant(1.0);
    s.eta[0] = Expr::constant(1.0);
    return s;
  }

  if (name == "kenmotsu") {
    // dt^2 + e^{2t} * flat fiber; phi rotates the fiber pairs.
    AlmostContactStructure s = base_shell(name, m);
    std::vector<Expr> diag(s.dim, parse_expr("exp(2*x0)", s.dim));
    diag[0] = Expr::constant(1.0);
    s.metric = MetricField::diagonal(std::move(diag));
    set_fiber_rotation(s, m);
    s.xi[0] = Expr::constant(1.0);
    s.eta[0] = Expr::constant(1.0);
    return s;
  }

  if (name == "sasakian") {
    // eta = (dz - sum y_i dx_i)/2, xi = 2 dz,
    // g = eta (x) eta + (sum dx_i^2 + dy_i^2)/4,
    // phi(dx_i) = -dy_i, phi(dy_i) = dx_i + y_i dz.
    AlmostContactStructure s = base_shell(name, m);
    int n = s.dim;
    s.eta[0] = Expr::constant(0.5);
    for (int i = 0; i < m; ++i)
      s.eta[x_of(i)] = Expr::constant(-0.5) * Expr::coord(y_of(i));
    std::vector<Expr> full(static_cast<size_t>(n) * n, Expr::constant(0.0));
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        Expr e = s.eta[a] * s.eta[b];
        if (a == b && a != 0) e = e + Expr::constant(0.25);
        full[static_cast<size_t>(a) * n + b] = e;
      }
    s.metric = MetricField::from_full(n, full);
    s.xi[0] = Expr::constant(2.0);
    for (int i = 0; i < m; ++i) {
      s.phi[static_cast<size_t>(y_of(i)) * n + x_of(i)] = Expr::constant(-1.0);
      s.phi[static_cast<size_t>(x_of(i)) * n + y_of(i)] = Expr::constant(1.0);
      s.phi[static_cast<size_t>(0) * n + y_of(i)] = Expr::coord(y_of(i));
    }
    return s;
  }

  fail(ErrorKind::UnknownModel, "unknown ambient model '" + name + "'");
}

// ---------------------------------------------------------------------------
// Point data and covariant derivatives
// ---------------------------------------------------------------------------

AmbientPointData ambient_at(const AlmostContactStructure& s, std::span<const double> x) {
  AmbientPointData a;
  a.structure = &s;
  a.x.assign(x.begin(), x.end());
  a.g = s.metric.values_at(x);
  a.g_inv = inverse(a.g);
  a.phi = s.phi_values(x);
  a.xi = s.xi_values(x);
  a.eta = s.eta_values(x);

  MetricJets mj{s.dim, s.metric.jets_at(x, 1)};
  ConnectionSample conn = connection_sample(mj, Point{s.name, a.x});
  a.gamma = std::move(conn.gamma);

  int n = s.dim;
  a.dphi.resize(static_cast<size_t>(n) * n * n);
  auto space = JetSpace::get(n, 1);
  std::vector<Jet> coords;
  for (int i = 0; i < n; ++i) coords.push_back(Jet::coordinate(space, i, x[i]));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Expr& e = s.phi[static_cast<size_t>(i) * n + j];
      if (e.is_constant()) continue;  // leave zeros
      Jet jv = eval_on_jets(e, space, coords);
      for (int k = 0; k < n; ++k)
        a.dphi[(static_cast<size_t>(i) * n + j) * n + k] = jv.partial(k);
    }
  return a;
}

Vec AmbientPointData::covariant_constant(std::span<const double> X,
                                         std::span<const double> Y) const {
  int n = phi.rows();
  Vec out(n, 0.0);
  for (int k = 0; k < n; ++k) {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) s += gamma_at(k, i, j) * X[i] * Y[j];
    out[k] = s;
  }
  return out;
}

Vec covariant_phi(const AmbientPointData& a, std::span<const double> X,
                  std::span<const double> Y) {
  int n = a.phi.rows();
  Vec out(n, 0.0);
  // (nabla_X phi)Y = X^j d_j(phi^k_l) Y^l + Gamma^k_{jm} X^j (phiY)^m
  //                  - phi^k_m Gamma^m_{jl} X^j Y^l
  Vec phiY = a.phi.apply(Y);
  for (int k = 0; k < n; ++k) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) {
      if (X[j] == 0.0) continue;
      for (int l = 0; l < n; ++l) s += X[j] * a.dphi_at(k, l, j) * Y[l];
    }
    out[k] = s;
  }
  Vec corr1 = a.covariant_constant(X, phiY);
  Vec nablaXY = a.covariant_constant(X, Y);
  Vec corr2 = a.phi.apply(nablaXY);
  for (int k = 0; k < n; ++k) out[k] += corr1[k] - corr2[k];
  return out;
}

Vec nts_defect(const AmbientPointData& a, double alpha, double beta,
               std::span<const double> X, std::span<const double> Y) {
  int n = a.phi.rows();
  Vec lhs = covariant_phi(a, X, Y);
  Vec lhs2 = covariant_phi(a, Y, X);
  for (int k = 0; k < n; ++k) lhs[k] += lhs2[k];

  double gXY = dot_g(a.g, X, Y);
  double etaX = dot(a.eta, X);
  double etaY = dot(a.eta, Y);
  Vec phiX = a.phi.apply(X);
  Vec phiY = a.phi.apply(Y);
  for (int k = 0; k < n; ++k) {
    double rhs = alpha * (2.0 * gXY * a.xi[k] - etaY * X[k] - etaX * Y[k]) -
                 beta * (etaY * phiX[k] + etaX * phiY[k]);
    lhs[k] -= rhs;
  }
  return lhs;
}

// ---------------------------------------------------------------------------
// Validation and type fitting
// ---------------------------------------------------------------------------

CheckReport validate_structure(const AlmostContactStructure& s, const Sampling& sampling,
                               double tolerance) {
  CheckReport rep;
  rep.name = "structure";
  Rng rng(derive_seed(sampling.seed, "structure"));
  int n = s.dim;

  auto& r_phi2 = rep.record("phi_square");
  auto& r_phixi = rep.record("phi_xi");
  auto& r_etaphi = rep.record("eta_phi");
  auto& r_etaxi = rep.record("eta_xi");
  auto& r_etag = rep.record("eta_metric");
  auto& r_compat = rep.record("phi_metric");
  auto& r_pd = rep.record("metric_positive");

  for (int t = 0; t < sampling.count; ++t) {
    Vec p = rng.point_in(s.box);
    Mat phi = s.phi_values(p);
    Vec xi = s.xi_values(p);
    Vec eta = s.eta_values(p);
    Mat g = s.metric.values_at(p);

    // phi^2 + I - xi (x) eta == 0
    Mat phi2 = phi * phi;
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double want = -(i == j ? 1.0 : 0.0) + xi[i] * eta[j];
        worst = std::max(worst, std::abs(phi2(i, j) - want));
      }
    r_phi2.absorb(worst);

    r_phixi.absorb(norm_inf(phi.apply(xi)));

    Vec etaphi(n, 0.0);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) etaphi[j] += eta[i] * phi(i, j);
    r_etaphi.absorb(norm_inf(etaphi));

    r_etaxi.absorb(std::abs(dot(eta, xi) - 1.0));

    double eworst = 0.0;
    for (int i = 0; i < n; ++i) {
      double gxi = 0.0;
      for (int j = 0; j < n; ++j) gxi += g(i, j) * xi[j];
      eworst = std::max(eworst, std::abs(gxi - eta[i]));
    }
    r_etag.absorb(eworst);

    Vec X = rng.vector_pm1(n), Y = rng.vector_pm1(n);
    Vec phiX = phi.apply(X), phiY = phi.apply(Y);
    double lhs = dot_g(g, phiX, phiY);
    double rhs = dot_g(g, X, Y) - dot(eta, X) * dot(eta, Y);
    r_compat.absorb(std::abs(lhs - rhs));

    Vec ev;
    Mat vecs;
    jacobi_eigen(g, ev, vecs);
    r_pd.absorb(ev.front() > 1e-10 ? 0.0 : 1e-10 - ev.front());
  }

  for (auto& r : rep.records) r.finish(tolerance);
  return rep;
}

AlphaBetaEstimate estimate_alpha_beta(const AlmostContactStructure& s,
                                      const Sampling& sampling) {
  Rng rng(derive_seed(sampling.seed, "estimate-ab"));
  int n = s.dim;

  // defect(alpha, beta) = C - alpha*A - beta*B with
  //   A = 2 g(X,Y) xi - eta(Y) X - eta(X) Y
  //   B = -(eta(Y) phi X + eta(X) phi Y)
  //   C = (nabla_X phi) Y + (nabla_Y phi) X
  double aa = 0, ab = 0, bb = 0, ac = 0, bc = 0;
  std::vector<std::array<Vec, 3>> rows;
  std::vector<Mat> metrics;
  for (int t = 0; t < sampling.count; ++t) {
    Vec p = rng.point_in(s.box);
    AmbientPointData amb = ambient_at(s, p);
    Vec X = rng.vector_pm1(n), Y = rng.vector_pm1(n);

    Vec C = covariant_phi(amb, X, Y);
    Vec C2 = covariant_phi(amb, Y, X);
    for (int k = 0; k < n; ++k) C[k] += C2[k];

    double gXY = dot_g(amb.g, X, Y);
    double etaX = dot(amb.eta, X), etaY = dot(amb.eta, Y);
    Vec phiX = amb.phi.apply(X), phiY = amb.phi.apply(Y);
    Vec A(n), B(n);
    for (int k = 0; k < n; ++k) {
      A[k] = 2.0 * gXY * amb.xi[k] - etaY * X[k] - etaX * Y[k];
      B[k] = -(etaY * phiX[k] + etaX * phiY[k]);
    }
    aa += dot_g(amb.g, A, A);
    ab += dot_g(amb.g, A, B);
    bb += dot_g(amb.g, B, B);
    ac += dot_g(amb.g, A, C);
    bc += dot_g(amb.g, B, C);
    rows.push_back({A, B, C});
    metrics.push_back(amb.g);
  }

  double det = aa * bb - ab * ab;
  double scale = std::max(1.0, std::max(aa, bb));
  if (std::abs(det) < 1e-12 * scale * scale)
    fail(ErrorKind::IllConditionedFit, "normal equations for (alpha,beta) are rank-deficient");

  AlphaBetaEstimate est;
  est.alpha = (ac * bb - bc * ab) / det;
  est.beta = (bc * aa - ac * ab) / det;
  est.samples = sampling.count;
  for (size_t t = 0; t < rows.size(); ++t) {
    const auto& [A, B, C] = rows[t];
    Vec d(n);
    for (int k = 0; k < n; ++k) d[k] = C[k] - est.alpha * A[k] - est.beta * B[k];
    est.residual = std::max(est.residual, std::sqrt(dot_g(metrics[t], d, d)));
  }
  return est;
}

}  // namespace actwarp
