// SPDX-License-Identifier: Apache-2.0
#include "expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <sstream>

namespace actwarp {

ExprNodePtr Expr::constant_node(double v) {
  auto n = std::make_shared<ExprNode>();
  n->op = ExprOp::Constant;
  n->value = v;
  return n;
}

Expr Expr::coord(int i) {
  if (i < 0 || i >= kMaxDim) fail(ErrorKind::InvalidArgument, "coordinate index out of range");
  auto n = std::make_shared<ExprNode>();
  n->op = ExprOp::Coord;
  n->coord = i;
  return Expr(n);
}

Expr Expr::unary(ExprOp op, const Expr& a) {
  auto n = std::make_shared<ExprNode>();
  n->op = op;
  n->a = a.node_;
  return Expr(n);
}

Expr Expr::binary(ExprOp op, const Expr& a, const Expr& b) {
  auto n = std::make_shared<ExprNode>();
  n->op = op;
  n->a = a.node_;
  n->b = b.node_;
  return Expr(n);
}

Expr Expr::pow(const Expr& base, int e) {
  auto n = std::make_shared<ExprNode>();
  n->op = ExprOp::PowInt;
  n->coord = e;
  n->a = base.node_;
  return Expr(n);
}

Expr Expr::pow(const Expr& base, double e) {
  auto n = std::make_shared<ExprNode>();
  n->op = ExprOp::PowReal;
  n->value = e;
  n->a = base.node_;
  return Expr(n);
}

namespace {

int min_dim_rec(const ExprNode& n) {
  switch (n.op) {
    case ExprOp::Constant: return 0;
    case ExprOp::Coord: return n.coord + 1;
    default: {
      int d = n.a ? min_dim_rec(*n.a) : 0;
      if (n.b) d = std::max(d, min_dim_rec(*n.b));
      return d;
    }
  }
}

bool equal_rec(const ExprNode& a, const ExprNode& b) {
  if (a.op != b.op) return false;
  switch (a.op) {
    case ExprOp::Constant: return a.value == b.value;
    case ExprOp::Coord: return a.coord == b.coord;
    case ExprOp::PowInt:
      return a.coord == b.coord && equal_rec(*a.a, *b.a);
    case ExprOp::PowReal:
      return a.value == b.value && equal_rec(*a.a, *b.a);
    default:
      if (bool(a.a) != bool(b.a) || bool(a.b) != bool(b.b)) return false;
      if (a.a && !equal_rec(*a.a, *b.a)) return false;
      if (a.b && !equal_rec(*a.b, *b.b)) return false;
      return true;
  }
}

void str_rec(const ExprNode& n, std::ostringstream& out) {
  switch (n.op) {
    case ExprOp::Constant: out << n.value; return;
    case ExprOp::Coord: out << "x" << n.coord; return;
    case ExprOp::Neg: out << "(-"; str_rec(*n.a, out); out << ")"; return;
    case ExprOp::Sin: out << "sin("; str_rec(*n.a, out); out << ")"; return;
    case ExprOp::Cos: out << "cos("; str_rec(*n.a, out); out << ")"; return;
    case ExprOp::Exp: out << "exp("; str_rec(*n.a, out); out << ")"; return;
    case ExprOp::Log: out << "log("; str_rec(*n.a, out); out << ")"; return;
    case ExprOp::Sqrt: out << "sqrt("; str_rec(*n.a, out); out << ")"; return;
    case ExprOp::PowInt:
      out << "("; str_rec(*n.a, out); out << ")^" << n.coord; return;
    case ExprOp::PowReal:
      out << "("; str_rec(*n.a, out); out << ")^" << n.value; return;
    default: {
      const char* sym = n.op == ExprOp::Add ? "+" : n.op == ExprOp::Sub ? "-"
                        : n.op == ExprOp::Mul ? "*" : "/";
      out << "("; str_rec(*n.a, out); out << sym; str_rec(*n.b, out); out << ")";
      return;
    }
  }
}

Expr rebuild(const ExprNode& n, std::span<const Expr> repl, int offset, bool use_repl) {
  switch (n.op) {
    case ExprOp::Constant: return Expr::constant(n.value);
    case ExprOp::Coord:
      if (use_repl) {
        if (n.coord >= static_cast<int>(repl.size()))
          fail(ErrorKind::InvalidArgument, "substitute: missing replacement for coordinate");
        return repl[n.coord];
      }
      return Expr::coord(n.coord + offset);
    case ExprOp::PowInt: return Expr::pow(rebuild(*n.a, repl, offset, use_repl), n.coord);
    case ExprOp::PowReal: return Expr::pow(rebuild(*n.a, repl, offset, use_repl), n.value);
    default: break;
  }
  Expr a = rebuild(*n.a, repl, offset, use_repl);
  switch (n.op) {
    case ExprOp::Neg: return -a;
    case ExprOp::Sin: return sin(a);
    case ExprOp::Cos: return cos(a);
    case ExprOp::Exp: return exp(a);
    case ExprOp::Log: return log(a);
    case ExprOp::Sqrt: return sqrt(a);
    default: break;
  }
  Expr b = rebuild(*n.b, repl, offset, use_repl);
  switch (n.op) {
    case ExprOp::Add: return a + b;
    case ExprOp::Sub: return a - b;
    case ExprOp::Mul: return a * b;
    case ExprOp::Div: return a / b;
    default: fail(ErrorKind::InvalidArgument, "rebuild: bad node");
  }
}

double checked(double v, const char* what) {
  if (!std::isfinite(v)) fail(ErrorKind::Domain, std::string("non-finite result in ") + what);
  return v;
}

double eval_rec(const ExprNode& n, std::span<const double> x) {
  switch (n.op) {
    case ExprOp::Constant: return n.value;
    case ExprOp::Coord:
      if (n.coord >= static_cast<int>(x.size()))
        fail(ErrorKind::InvalidArgument, "evaluation point has too few coordinates");
      return x[n.coord];
    case ExprOp::Neg: return -eval_rec(*n.a, x);
    case ExprOp::Sin: return std::sin(eval_rec(*n.a, x));
    case ExprOp::Cos: return std::cos(eval_rec(*n.a, x));
    case ExprOp::Exp: return checked(std::exp(eval_rec(*n.a, x)), "exp");
    case ExprOp::Log: {
      double v = eval_rec(*n.a, x);
      if (v <= 0.0) fail(ErrorKind::Domain, "log of non-positive value");
      return std::log(v);
    }
    case ExprOp::Sqrt: {
      double v = eval_rec(*n.a, x);
      if (v < 0.0) fail(ErrorKind::Domain, "sqrt of negative value");
      return std::sqrt(v);
    }
    case ExprOp::Add: return checked(eval_rec(*n.a, x) + eval_rec(*n.b, x), "add");
    case ExprOp::Sub: return checked(eval_rec(*n.a, x) - eval_rec(*n.b, x), "sub");
    case ExprOp::Mul: return checked(eval_rec(*n.a, x) * eval_rec(*n.b, x), "mul");
    case ExprOp::Div: {
      double d = eval_rec(*n.b, x);
      if (d == 0.0) fail(ErrorKind::Domain, "division by zero");
      return checked(eval_rec(*n.a, x) / d, "div");
    }
    case ExprOp::PowInt: {
      double v = eval_rec(*n.a, x);
      int e = n.coord;
      if (e < 0 && v == 0.0) fail(ErrorKind::Domain, "zero base with negative exponent");
      double acc = 1.0;
      for (int k = 0; k < std::abs(e); ++k) acc *= v;
      return checked(e < 0 ? 1.0 / acc : acc, "pow");
    }
    case ExprOp::PowReal: {
      double v = eval_rec(*n.a, x);
      if (v <= 0.0) fail(ErrorKind::Domain, "real power of non-positive base");
      return checked(std::pow(v, n.value), "pow");
    }
  }
  fail(ErrorKind::InvalidArgument, "eval: bad node");
}

}  // namespace

int Expr::min_dim() const { return min_dim_rec(*node_); }

bool Expr::structurally_equal(const Expr& other) const {
  return equal_rec(*node_, *other.node_);
}

std::string Expr::str() const {
  std::ostringstream out;
  str_rec(*node_, out);
  return out.str();
}

Expr Expr::substitute(std::span<const Expr> replacement) const {
  return rebuild(*node_, replacement, 0, true);
}

Expr Expr::shift_coords(int offset) const {
  return rebuild(*node_, {}, offset, false);
}

double eval(const Expr& e, std::span<const double> x) {
  return eval_rec(e.node(), x);
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

namespace {

struct Parser {
  const std::string& s;
  size_t pos = 0;
  int dim;

  [[noreturn]] void error(const std::string& msg) const {
    fail(ErrorKind::Parse, "parse error at offset " + std::to_string(pos) + ": " + msg +
                               " in \"" + s + "\"");
  }

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }

  bool peek(char c) {
    skip_ws();
    return pos < s.size() && s[pos] == c;
  }

  bool accept(char c) {
    if (peek(c)) { ++pos; return true; }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) error(std::string("expected '") + c + "'");
  }

  bool at_number() {
    skip_ws();
    if (pos >= s.size()) return false;
    char c = s[pos];
    return std::isdigit(static_cast<unsigned char>(c)) || c == '.';
  }

  double number() {
    skip_ws();
    const char* begin = s.c_str() + pos;
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end == begin) error("expected number");
    pos += static_cast<size_t>(end - begin);
    if (!std::isfinite(v)) error("literal out of range");
    return v;
  }

  std::string ident() {
    skip_ws();
    size_t start = pos;
    while (pos < s.size() &&
           (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
      ++pos;
    if (start == pos) error("expected identifier");
    return s.substr(start, pos - start);
  }

  Expr expr() {
    Expr acc = term();
    for (;;) {
      if (accept('+')) acc = acc + term();
      else if (accept('-')) acc = acc - term();
      else return acc;
    }
  }

  Expr term() {
    Expr acc = factor();
    for (;;) {
      if (accept('*')) acc = acc * factor();
      else if (accept('/')) acc = acc / factor();
      else return acc;
    }
  }

  // '-' binds looser than '^': -x0^2 is -(x0^2).
  Expr factor() {
    if (accept('-')) return -factor();
    Expr base = primary();
    if (accept('^')) {
      bool neg = accept('-');
      if (!at_number()) error("exponent must be a numeric literal");
      size_t before = pos;
      double v = number();
      bool integral = s.find('.', before) >= pos && s.find('e', before) >= pos &&
                      s.find('E', before) >= pos;
      if (neg) v = -v;
      if (integral && std::abs(v) <= 64.0 && v == std::round(v))
        return Expr::pow(base, static_cast<int>(v));
      return Expr::pow(base, v);
    }
    return base;
  }

  Expr primary() {
    skip_ws();
    if (accept('(')) {
      Expr inner = expr();
      expect(')');
      return inner;
    }
    if (at_number()) return Expr::constant(number());
    std::string name = ident();
    if (name.size() >= 2 && name[0] == 'x' &&
        std::isdigit(static_cast<unsigned char>(name[1]))) {
      for (size_t i = 1; i < name.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(name[i])))
          error("bad coordinate name '" + name + "'");
      int idx = std::atoi(name.c_str() + 1);
      if (idx >= dim)
        error("coordinate " + name + " outside chart of dimension " + std::to_string(dim));
      return Expr::coord(idx);
    }
    Expr arg = [&] {
      expect('(');
      Expr inner = expr();
      expect(')');
      return inner;
    }();
    if (name == "sin") return sin(arg);
    if (name == "cos") return cos(arg);
    if (name == "exp") return exp(arg);
    if (name == "log") return log(arg);
    if (name == "sqrt") return sqrt(arg);
    error("unknown function '" + name + "'");
  }
};

}  // namespace

Expr parse_expr(const std::string& text, int dim) {
  if (dim < 0 || dim > kMaxDim)
    fail(ErrorKind::Validation,
         "chart dimension " + std::to_string(dim) + " outside supported range 0..16");
  Parser p{text, 0, dim};
  Expr e = p.expr();
  p.skip_ws();
  if (p.pos != text.size()) p.error("trailing input");
  return e;
}

}  // namespace actwarp
