// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"

namespace actwarp {

// Coordinates are limited to 16 axes; jet tables are dense in the dimension.
inline constexpr int kMaxDim = 16;

enum class ExprOp {
  Constant,
  Coord,
  Neg,
  Sin,
  Cos,
  Exp,
  Log,
  Sqrt,
  Add,
  Sub,
  Mul,
  Div,
  PowInt,
  PowReal,
};

struct ExprNode;
using ExprNodePtr = std::shared_ptr<const ExprNode>;

struct ExprNode {
  ExprOp op = ExprOp::Constant;
  double value = 0.0;  // Constant payload, or the exponent of PowReal
  int coord = -1;      // Coord payload, or the exponent of PowInt
  ExprNodePtr a, b;
};

/// Immutable closed-form scalar expression over chart coordinates x0..x{d-1}.
/// Shared subtrees are fine: nodes are never mutated after construction.
class Expr {
public:
  Expr() : node_(constant_node(0.0)) {}

  static Expr constant(double v) { return Expr(constant_node(v)); }
  static Expr coord(int i);

  const ExprNode& node() const { return *node_; }
  ExprNodePtr node_ptr() const { return node_; }

  /// Highest coordinate index used, plus one (0 for constant expressions).
  int min_dim() const;

  /// True when no coordinate appears anywhere in the tree.
  bool is_constant() const { return min_dim() == 0; }

  bool structurally_equal(const Expr& other) const;

  std::string str() const;

  friend Expr operator+(const Expr& a, const Expr& b) { return binary(ExprOp::Add, a, b); }
  friend Expr operator-(const Expr& a, const Expr& b) { return binary(ExprOp::Sub, a, b); }
  friend Expr operator*(const Expr& a, const Expr& b) { return binary(ExprOp::Mul, a, b); }
  friend Expr operator/(const Expr& a, const Expr& b) { return binary(ExprOp::Div, a, b); }
  friend Expr operator-(const Expr& a) { return unary(ExprOp::Neg, a); }

  friend Expr sin(const Expr& a) { return unary(ExprOp::Sin, a); }
  friend Expr cos(const Expr& a) { return unary(ExprOp::Cos, a); }
  friend Expr exp(const Expr& a) { return unary(ExprOp::Exp, a); }
  friend Expr log(const Expr& a) { return unary(ExprOp::Log, a); }
  friend Expr sqrt(const Expr& a) { return unary(ExprOp::Sqrt, a); }

  static Expr pow(const Expr& base, int e);
  static Expr pow(const Expr& base, double e);

  /// Substitutes coordinate i with replacement[i]; used to compose charts
  /// (e.g. fiber metrics re-addressed inside a product chart).
  Expr substitute(std::span<const Expr> replacement) const;

  /// Shifts every coordinate index by `offset`.
  Expr shift_coords(int offset) const;

private:
  explicit Expr(ExprNodePtr n) : node_(std::move(n)) {}
  static ExprNodePtr constant_node(double v);
  static Expr unary(ExprOp op, const Expr& a);
  static Expr binary(ExprOp op, const Expr& a, const Expr& b);

  ExprNodePtr node_;
};

/// Plain evaluation with domain checks (log/sqrt/pow/div) and a finiteness
/// guard on every primitive result.
double eval(const Expr& e, std::span<const double> x);

/// Parses the infix grammar: `+ - * /`, `^` with a numeric exponent,
/// function calls sin/cos/exp/log/sqrt, coordinates x0..x{d-1}, decimal
/// literals. Whitespace-insensitive. Coordinates at or past `dim` are
/// rejected, as is dim > 16.
Expr parse_expr(const std::string& text, int dim);

}  // namespace actwarp
