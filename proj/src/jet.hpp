// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <memory>
#include <span>
#include <vector>

#include "expr.hpp"

namespace actwarp {

using MultiIndex = std::array<uint8_t, kMaxDim>;

/// Shared coefficient-layout tables for truncated Taylor arithmetic in a
/// fixed (dimension, order). Indices are enumerated by total degree, then
/// lexicographically; instances are cached and immutable.
class JetSpace {
public:
  using Ptr = std::shared_ptr<const JetSpace>;

  static Ptr get(int dim, int order);

  int dim() const { return dim_; }
  int order() const { return order_; }
  int size() const { return static_cast<int>(indices_.size()); }

  const MultiIndex& exponents(int k) const { return indices_[k]; }
  int degree(int k) const { return degree_[k]; }
  double index_factorial(int k) const { return factorial_[k]; }

  /// Rank of a multi-index in this space, or -1 when its degree exceeds
  /// the order.
  int rank(const MultiIndex& m) const;

  struct Triple {
    int a, b, out;
  };
  const std::vector<Triple>& mul_table() const { return mul_; }

private:
  JetSpace(int dim, int order);

  int dim_, order_;
  std::vector<MultiIndex> indices_;
  std::vector<int> degree_;
  std::vector<double> factorial_;
  std::vector<Triple> mul_;
  std::vector<std::pair<uint64_t, int>> rank_;  // sorted packed-key -> rank
};

/// Truncated Taylor expansion of a scalar quantity at a point: coefficient
/// for multi-index m is the m-th partial derivative divided by m!.
class Jet {
public:
  Jet() = default;

  static Jet constant(JetSpace::Ptr s, double v);
  static Jet coordinate(JetSpace::Ptr s, int axis, double value);
  static Jet from_coefficients(JetSpace::Ptr s, std::vector<double> c);

  bool valid() const { return static_cast<bool>(space_); }
  const JetSpace& space() const { return *space_; }
  JetSpace::Ptr space_ptr() const { return space_; }
  int dim() const { return space_->dim(); }
  int order() const { return space_->order(); }

  double value() const { return c_[0]; }
  double coefficient(int k) const { return c_[k]; }
  std::span<const double> coefficients() const { return c_; }

  double partial(int axis) const;
  double partial2(int i, int j) const;
  double partial3(int i, int j, int k) const;

  Jet truncated(int order) const;

  /// Jet of the partial derivative along `axis`, one order lower.
  Jet differentiated(int axis) const;

  /// f(u) for analytic f given the Taylor coefficients of f at value():
  /// taylor[j] = f^(j)(value()) / j!, j = 0..order().
  Jet compose_analytic(std::span<const double> taylor) const;

  Jet pow_int(int e) const;
  Jet pow_real(double a) const;

  friend Jet operator-(const Jet& x);
  friend Jet operator+(const Jet& x, const Jet& y);
  friend Jet operator-(const Jet& x, const Jet& y);
  friend Jet operator*(const Jet& x, const Jet& y);
  friend Jet operator/(const Jet& x, const Jet& y);
  friend Jet operator+(const Jet& x, double s);
  friend Jet operator+(double s, const Jet& x);
  friend Jet operator-(const Jet& x, double s);
  friend Jet operator-(double s, const Jet& x);
  friend Jet operator*(const Jet& x, double s);
  friend Jet operator*(double s, const Jet& x);
  friend Jet operator/(const Jet& x, double s);
  friend Jet operator/(double s, const Jet& x);

  friend Jet sin(const Jet& x);
  friend Jet cos(const Jet& x);
  friend Jet exp(const Jet& x);
  friend Jet log(const Jet& x);
  friend Jet sqrt(const Jet& x);

private:
  Jet(JetSpace::Ptr s, std::vector<double> c) : space_(std::move(s)), c_(std::move(c)) {}
  static void check_same(const Jet& x, const Jet& y);

  JetSpace::Ptr space_;
  std::vector<double> c_;
};

/// Evaluates an expression in jet arithmetic with the given jets standing in
/// for the coordinates; this is also how compositions f(Phi(x)) are expanded.
Jet eval_on_jets(const Expr& e, const JetSpace::Ptr& space, std::span<const Jet> coords);

/// Exact forward-mode jet of an expression at a point, order 1..3.
Jet eval_jet(const Expr& e, std::span<const double> p, int order);

/// Independent central-difference approximation of the same coefficient
/// table, built from plain evaluations only.
Jet finite_difference_jet(const Expr& e, std::span<const double> p, int order, double step);

}  // namespace actwarp
