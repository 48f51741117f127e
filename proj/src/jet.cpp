// SPDX-License-Identifier: Apache-2.0
#include "jet.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace actwarp {

namespace {

uint64_t pack(const MultiIndex& m, int dim) {
  uint64_t key = 0;
  for (int i = 0; i < dim; ++i) key |= static_cast<uint64_t>(m[i]) << (4 * i);
  return key;
}

void enumerate(int dim, int degree, int axis, MultiIndex& cur,
               std::vector<MultiIndex>& out) {
  if (axis == dim - 1) {
    cur[axis] = static_cast<uint8_t>(degree);
    out.push_back(cur);
    cur[axis] = 0;
    return;
  }
  // Lexicographic within a degree: higher exponent on earlier axes first.
  for (int e = degree; e >= 0; --e) {
    cur[axis] = static_cast<uint8_t>(e);
    enumerate(dim, degree - e, axis + 1, cur, out);
  }
  cur[axis] = 0;
}

}  // namespace

JetSpace::JetSpace(int dim, int order) : dim_(dim), order_(order) {
  MultiIndex cur{};
  if (dim == 0) {
    indices_.push_back(cur);
  } else {
    for (int deg = 0; deg <= order; ++deg) enumerate(dim, deg, 0, cur, indices_);
  }
  degree_.reserve(indices_.size());
  factorial_.reserve(indices_.size());
  rank_.reserve(indices_.size());
  for (int k = 0; k < static_cast<int>(indices_.size()); ++k) {
    int deg = 0;
    double fact = 1.0;
    for (int i = 0; i < dim; ++i) {
      deg += indices_[k][i];
      for (int t = 2; t <= indices_[k][i]; ++t) fact *= t;
    }
    degree_.push_back(deg);
    factorial_.push_back(fact);
    rank_.emplace_back(pack(indices_[k], dim), k);
  }
  std::sort(rank_.begin(), rank_.end());
  for (int a = 0; a < size(); ++a) {
    for (int b = 0; b < size(); ++b) {
      if (degree_[a] + degree_[b] > order) continue;
      MultiIndex sum{};
      for (int i = 0; i < dim; ++i)
        sum[i] = static_cast<uint8_t>(indices_[a][i] + indices_[b][i]);
      mul_.push_back({a, b, rank(sum)});
    }
  }
}

int JetSpace::rank(const MultiIndex& m) const {
  int deg = 0;
  for (int i = 0; i < dim_; ++i) deg += m[i];
  if (deg > order_) return -1;
  uint64_t key = pack(m, dim_);
  auto it = std::lower_bound(rank_.begin(), rank_.end(), std::make_pair(key, 0));
  if (it == rank_.end() || it->first != key) return -1;
  return it->second;
}

JetSpace::Ptr JetSpace::get(int dim, int order) {
  if (dim < 0 || dim > kMaxDim)
    fail(ErrorKind::Validation, "jet dimension outside supported range 0..16");
  if (order < 0 || order > 3)
    fail(ErrorKind::InvalidArgument, "jet order must be in 0..3");
  static std::mutex mu;
  static std::map<std::pair<int, int>, Ptr> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{dim, order}];
  if (!slot) slot = Ptr(new JetSpace(dim, order));
  return slot;
}

// ---------------------------------------------------------------------------
// Jet
// ---------------------------------------------------------------------------

Jet Jet::constant(JetSpace::Ptr s, double v) {
  std::vector<double> c(s->size(), 0.0);
  c[0] = v;
  return Jet(std::move(s), std::move(c));
}

Jet Jet::coordinate(JetSpace::Ptr s, int axis, double value) {
  if (axis < 0 || axis >= s->dim())
    fail(ErrorKind::InvalidArgument, "jet coordinate axis out of range");
  std::vector<double> c(s->size(), 0.0);
  c[0] = value;
  if (s->order() >= 1) {
    MultiIndex m{};
    m[axis] = 1;
    c[s->rank(m)] = 1.0;
  }
  return Jet(std::move(s), std::move(c));
}

Jet Jet::from_coefficients(JetSpace::Ptr s, std::vector<double> c) {
  if (static_cast<int>(c.size()) != s->size())
    fail(ErrorKind::InvalidArgument, "jet coefficient count mismatch");
  return Jet(std::move(s), std::move(c));
}

void Jet::check_same(const Jet& x, const Jet& y) {
  if (x.space_ != y.space_)
    fail(ErrorKind::InvalidArgument, "jet arithmetic on mismatched spaces");
}

double Jet::partial(int axis) const {
  MultiIndex m{};
  m[axis] = 1;
  int k = space_->rank(m);
  if (k < 0) fail(ErrorKind::InvalidArgument, "jet order too low for gradient");
  return c_[k];
}

double Jet::partial2(int i, int j) const {
  MultiIndex m{};
  m[i] += 1;
  m[j] += 1;
  int k = space_->rank(m);
  if (k < 0) fail(ErrorKind::InvalidArgument, "jet order too low for hessian");
  return c_[k] * space_->index_factorial(k);
}

double Jet::partial3(int i, int j, int k3) const {
  MultiIndex m{};
  m[i] += 1;
  m[j] += 1;
  m[k3] += 1;
  int k = space_->rank(m);
  if (k < 0) fail(ErrorKind::InvalidArgument, "jet order too low for third derivative");
  return c_[k] * space_->index_factorial(k);
}

Jet Jet::truncated(int order) const {
  if (order == space_->order()) return *this;
  if (order > space_->order())
    fail(ErrorKind::InvalidArgument, "cannot extend jet order by truncation");
  auto target = JetSpace::get(space_->dim(), order);
  std::vector<double> c(target->size());
  for (int k = 0; k < target->size(); ++k)
    c[k] = c_[space_->rank(target->exponents(k))];
  return Jet(std::move(target), std::move(c));
}

Jet Jet::differentiated(int axis) const {
  if (space_->order() < 1)
    fail(ErrorKind::InvalidArgument, "cannot differentiate an order-0 jet");
  auto target = JetSpace::get(space_->dim(), space_->order() - 1);
  std::vector<double> c(target->size());
  for (int k = 0; k < target->size(); ++k) {
    MultiIndex m = target->exponents(k);
    m[axis] += 1;
    c[k] = c_[space_->rank(m)] * m[axis];
  }
  return Jet(std::move(target), std::move(c));
}

Jet operator-(const Jet& x) {
  std::vector<double> c(x.c_);
  for (double& v : c) v = -v;
  return Jet(x.space_, std::move(c));
}

Jet operator+(const Jet& x, const Jet& y) {
  Jet::check_same(x, y);
  std::vector<double> c(x.c_);
  for (size_t k = 0; k < c.size(); ++k) c[k] += y.c_[k];
  return Jet(x.space_, std::move(c));
}

Jet operator-(const Jet& x, const Jet& y) {
  Jet::check_same(x, y);
  std::vector<double> c(x.c_);
  for (size_t k = 0; k < c.size(); ++k) c[k] -= y.c_[k];
  return Jet(x.space_, std::move(c));
}

Jet operator*(const Jet& x, const Jet& y) {
  Jet::check_same(x, y);
  std::vector<double> c(x.c_.size(), 0.0);
  for (const auto& t : x.space_->mul_table()) c[t.out] += x.c_[t.a] * y.c_[t.b];
  return Jet(x.space_, std::move(c));
}

Jet operator/(const Jet& x, const Jet& y) {
  Jet::check_same(x, y);
  double v = y.value();
  if (v == 0.0) fail(ErrorKind::Domain, "jet division by zero");
  int K = y.order();
  std::vector<double> taylor(K + 1);
  double p = 1.0 / v;
  for (int j = 0; j <= K; ++j) {
    taylor[j] = p;  // d^j(1/u)/j! = (-1)^j / u^{j+1}
    p *= -1.0 / v;
  }
  return x * y.compose_analytic(taylor);
}

Jet operator+(const Jet& x, double s) {
  std::vector<double> c(x.c_);
  c[0] += s;
  return Jet(x.space_, std::move(c));
}
Jet operator+(double s, const Jet& x) { return x + s; }
Jet operator-(const Jet& x, double s) { return x + (-s); }
Jet operator-(double s, const Jet& x) { return (-x) + s; }
Jet operator*(const Jet& x, double s) {
  std::vector<double> c(x.c_);
  for (double& v : c) v *= s;
  return Jet(x.space_, std::move(c));
}
Jet operator*(double s, const Jet& x) { return x * s; }
Jet operator/(const Jet& x, double s) {
  if (s == 0.0) fail(ErrorKind::Domain, "jet division by zero");
  return x * (1.0 / s);
}
Jet operator/(double s, const Jet& x) { return Jet::constant(x.space_ptr(), s) / x; }

Jet Jet::compose_analytic(std::span<const double> taylor) const {
  int K = space_->order();
  if (static_cast<int>(taylor.size()) != K + 1)
    fail(ErrorKind::InvalidArgument, "compose_analytic: wrong taylor length");
  // Horner on the degree>=1 part, which is nilpotent to order K+1.
  Jet w = *this;
  w.c_[0] = 0.0;
  Jet acc = Jet::constant(space_, taylor[K]);
  for (int j = K - 1; j >= 0; --j) acc = acc * w + taylor[j];
  return acc;
}

Jet sin(const Jet& x) {
  double v = x.value();
  int K = x.order();
  double table[4] = {std::sin(v), std::cos(v), -std::sin(v) / 2.0, -std::cos(v) / 6.0};
  return x.compose_analytic(std::span<const double>(table, K + 1));
}

Jet cos(const Jet& x) {
  double v = x.value();
  int K = x.order();
  double table[4] = {std::cos(v), -std::sin(v), -std::cos(v) / 2.0, std::sin(v) / 6.0};
  return x.compose_analytic(std::span<const double>(table, K + 1));
}

Jet exp(const Jet& x) {
  double v = std::exp(x.value());
  if (!std::isfinite(v)) fail(ErrorKind::Domain, "exp overflow in jet");
  int K = x.order();
  double table[4] = {v, v, v / 2.0, v / 6.0};
  return x.compose_analytic(std::span<const double>(table, K + 1));
}

Jet log(const Jet& x) {
  double v = x.value();
  if (v <= 0.0) fail(ErrorKind::Domain, "log of non-positive value in jet");
  int K = x.order();
  double inv = 1.0 / v;
  double table[4] = {std::log(v), inv, -inv * inv / 2.0, inv * inv * inv / 3.0};
  return x.compose_analytic(std::span<const double>(table, K + 1));
}

Jet sqrt(const Jet& x) {
  double v = x.value();
  if (v < 0.0 || (v == 0.0 && x.order() >= 1))
    fail(ErrorKind::Domain, "sqrt domain error in jet");
  int K = x.order();
  double r = std::sqrt(v);
  double table[4] = {r, 0.5 / r, -1.0 / (8.0 * r * v), 1.0 / (16.0 * r * v * v)};
  return x.compose_analytic(std::span<const double>(table, K + 1));
}

Jet Jet::pow_int(int e) const {
  if (e == 0) return Jet::constant(space_, 1.0);
  if (e < 0 && value() == 0.0)
    fail(ErrorKind::Domain, "zero base with negative exponent in jet");
  Jet acc = Jet::constant(space_, 1.0);
  for (int k = 0; k < std::abs(e); ++k) acc = acc * (*this);
  if (e < 0) acc = Jet::constant(space_, 1.0) / acc;
  return acc;
}

Jet Jet::pow_real(double a) const {
  double v = value();
  if (v <= 0.0) fail(ErrorKind::Domain, "real power of non-positive base in jet");
  int K = order();
  std::vector<double> taylor(K + 1);
  double coef = std::pow(v, a);
  taylor[0] = coef;
  for (int j = 1; j <= K; ++j) {
    coef *= (a - (j - 1)) / j / v;
    taylor[j] = coef;
  }
  return compose_analytic(taylor);
}

// ---------------------------------------------------------------------------
// Expression evaluation on jets
// ---------------------------------------------------------------------------

namespace {

Jet eval_jets_rec(const ExprNode& n, const JetSpace::Ptr& s, std::span<const Jet> coords) {
  switch (n.op) {
    case ExprOp::Constant: return Jet::constant(s, n.value);
    case ExprOp::Coord:
      if (n.coord >= static_cast<int>(coords.size()))
        fail(ErrorKind::InvalidArgument, "jet evaluation point has too few coordinates");
      return coords[n.coord];
    case ExprOp::Neg: return -eval_jets_rec(*n.a, s, coords);
    case ExprOp::Sin: return sin(eval_jets_rec(*n.a, s, coords));
    case ExprOp::Cos: return cos(eval_jets_rec(*n.a, s, coords));
    case ExprOp::Exp: return exp(eval_jets_rec(*n.a, s, coords));
    case ExprOp::Log: return log(eval_jets_rec(*n.a, s, coords));
    case ExprOp::Sqrt: return sqrt(eval_jets_rec(*n.a, s, coords));
    case ExprOp::Add: return eval_jets_rec(*n.a, s, coords) + eval_jets_rec(*n.b, s, coords);
    case ExprOp::Sub: return eval_jets_rec(*n.a, s, coords) - eval_jets_rec(*n.b, s, coords);
    case ExprOp::Mul: return eval_jets_rec(*n.a, s, coords) * eval_jets_rec(*n.b, s, coords);
    case ExprOp::Div: return eval_jets_rec(*n.a, s, coords) / eval_jets_rec(*n.b, s, coords);
    case ExprOp::PowInt: return eval_jets_rec(*n.a, s, coords).pow_int(n.coord);
    case ExprOp::PowReal: return eval_jets_rec(*n.a, s, coords).pow_real(n.value);
  }
  fail(ErrorKind::InvalidArgument, "eval_on_jets: bad node");
}

}  // namespace

Jet eval_on_jets(const Expr& e, const JetSpace::Ptr& space, std::span<const Jet> coords) {
  Jet out = eval_jets_rec(e.node(), space, coords);
  for (double c : out.coefficients())
    if (!std::isfinite(c)) fail(ErrorKind::Domain, "non-finite jet coefficient");
  return out;
}

Jet eval_jet(const Expr& e, std::span<const double> p, int order) {
  if (order < 1 || order > 3) fail(ErrorKind::InvalidArgument, "jet order must be in 1..3");
  int dim = static_cast<int>(p.size());
  auto space = JetSpace::get(dim, order);
  std::vector<Jet> coords;
  coords.reserve(dim);
  for (int i = 0; i < dim; ++i) coords.push_back(Jet::coordinate(space, i, p[i]));
  return eval_on_jets(e, space, coords);
}

// ---------------------------------------------------------------------------
// Central differences
// ---------------------------------------------------------------------------

namespace {

double eval_shift(const Expr& e, std::span<const double> p, std::span<const int> axes,
                  std::span<const double> offsets, double h) {
  std::vector<double> q(p.begin(), p.end());
  for (size_t t = 0; t < axes.size(); ++t) q[axes[t]] += offsets[t] * h;
  return eval(e, q);
}

}  // namespace

Jet finite_difference_jet(const Expr& e, std::span<const double> p, int order, double step) {
  if (step <= 0.0) fail(ErrorKind::InvalidArgument, "finite-difference step must be positive");
  if (order < 1 || order > 3) fail(ErrorKind::InvalidArgument, "jet order must be in 1..3");
  int dim = static_cast<int>(p.size());
  auto space = JetSpace::get(dim, order);
  std::vector<double> c(space->size(), 0.0);
  const double h = step;

  auto E = [&](std::initializer_list<int> axes, std::initializer_list<double> offs) {
    std::vector<int> a(axes);
    std::vector<double> o(offs);
    return eval_shift(e, p, a, o, h);
  };

  for (int k = 0; k < space->size(); ++k) {
    const MultiIndex& m = space->exponents(k);
    int deg = space->degree(k);
    std::vector<int> axes;
    for (int i = 0; i < dim; ++i)
      for (int t = 0; t < m[i]; ++t) axes.push_back(i);
    double d = 0.0;
    switch (deg) {
      case 0:
        d = eval(e, p);
        break;
      case 1:
        d = (E({axes[0]}, {1}) - E({axes[0]}, {-1})) / (2 * h);
        break;
      case 2: {
        int i = axes[0], j = axes[1];
        if (i == j)
          d = (E({i}, {1}) - 2 * eval(e, p) + E({i}, {-1})) / (h * h);
        else
          d = (E({i, j}, {1, 1}) - E({i, j}, {1, -1}) - E({i, j}, {-1, 1}) +
               E({i, j}, {-1, -1})) /
              (4 * h * h);
        break;
      }
      case 3: {
        int i = axes[0], j = axes[1], l = axes[2];
        if (i == j && j == l) {
          d = (E({i}, {2}) - 2 * E({i}, {1}) + 2 * E({i}, {-1}) - E({i}, {-2})) /
              (2 * h * h * h);
        } else if (i == j || j == l || i == l) {
          int rep = (i == j) ? i : l;           // the doubled axis
          int single = (i == j) ? l : ((j == l) ? i : j);
          d = (E({rep, single}, {1, 1}) - 2 * E({single}, {1}) + E({rep, single}, {-1, 1}) -
               E({rep, single}, {1, -1}) + 2 * E({single}, {-1}) -
               E({rep, single}, {-1, -1})) /
              (2 * h * h * h);
        } else {
          d = 0.0;
          for (int s1 : {1, -1})
            for (int s2 : {1, -1})
              for (int s3 : {1, -1})
                d += s1 * s2 * s3 *
                     E({i, j, l}, {double(s1), double(s2), double(s3)});
          d /= 8 * h * h * h;
        }
        break;
      }
    }
    c[k] = d / space->index_factorial(k);
  }
  return Jet::from_coefficients(space, std::move(c));
}

}  // namespace actwarp
