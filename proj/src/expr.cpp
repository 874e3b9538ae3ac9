#include "apaths/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <utility>

namespace apaths {
namespace detail {

enum class Kind { Num, Var, Add, Sub, Mul, Div, Pow, Neg, Sin, Cos, Exp };

struct ExprNode {
  Kind kind;
  double value = 0.0;   // Num
  int index = 0;        // Var; exponent for Pow
  std::shared_ptr<const ExprNode> lhs, rhs;
};

using NodePtr = std::shared_ptr<const ExprNode>;

NodePtr make(Kind k, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
  auto n = std::make_shared<ExprNode>();
  n->kind = k;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

NodePtr make_num(double v) {
  auto n = std::make_shared<ExprNode>();
  n->kind = Kind::Num;
  n->value = v;
  return n;
}

NodePtr make_var(int i) {
  auto n = std::make_shared<ExprNode>();
  n->kind = Kind::Var;
  n->index = i;
  return n;
}

NodePtr make_pow(NodePtr base, int e) {
  auto n = std::make_shared<ExprNode>();
  n->kind = Kind::Pow;
  n->index = e;
  n->lhs = std::move(base);
  return n;
}

// Numeric literals in the grammar are nonnegative; negative constants are
// spelled as unary minus so that printing always re-parses.
NodePtr signed_num(double v) {
  if (v < 0.0) return make(Kind::Neg, make_num(-v));
  return make_num(v);
}

double eval_node(const ExprNode& n, std::span<const double> p) {
  switch (n.kind) {
    case Kind::Num:
      return n.value;
    case Kind::Var:
      if (n.index >= static_cast<int>(p.size()))
        throw EvalError("point dimension too small for x" +
                        std::to_string(n.index + 1));
      return p[n.index];
    case Kind::Add:
      return eval_node(*n.lhs, p) + eval_node(*n.rhs, p);
    case Kind::Sub:
      return eval_node(*n.lhs, p) - eval_node(*n.rhs, p);
    case Kind::Mul:
      return eval_node(*n.lhs, p) * eval_node(*n.rhs, p);
    case Kind::Div: {
      double num = eval_node(*n.lhs, p);
      double den = eval_node(*n.rhs, p);
      if (den == 0.0) throw EvalError("division by zero");
      return num / den;
    }
    case Kind::Pow: {
      double b = eval_node(*n.lhs, p);
      if (n.index < 0 && b == 0.0) throw EvalError("division by zero in power");
      return std::pow(b, n.index);
    }
    case Kind::Neg:
      return -eval_node(*n.lhs, p);
    case Kind::Sin:
      return std::sin(eval_node(*n.lhs, p));
    case Kind::Cos:
      return std::cos(eval_node(*n.lhs, p));
    case Kind::Exp:
      return std::exp(eval_node(*n.lhs, p));
  }
  throw EvalError("corrupt expression node");
}

NodePtr diff_node(const NodePtr& n, int i);

NodePtr d_mul(const NodePtr& a, const NodePtr& b, int i) {
  return make(Kind::Add, make(Kind::Mul, diff_node(a, i), b),
              make(Kind::Mul, a, diff_node(b, i)));
}

NodePtr diff_node(const NodePtr& n, int i) {
  switch (n->kind) {
    case Kind::Num:
      return make_num(0.0);
    case Kind::Var:
      return make_num(n->index == i ? 1.0 : 0.0);
    case Kind::Add:
      return make(Kind::Add, diff_node(n->lhs, i), diff_node(n->rhs, i));
    case Kind::Sub:
      return make(Kind::Sub, diff_node(n->lhs, i), diff_node(n->rhs, i));
    case Kind::Mul:
      return d_mul(n->lhs, n->rhs, i);
    case Kind::Div:
      // (u/v)' = (u'v - uv')/v^2
      return make(Kind::Div,
                  make(Kind::Sub, make(Kind::Mul, diff_node(n->lhs, i), n->rhs),
                       make(Kind::Mul, n->lhs, diff_node(n->rhs, i))),
                  make_pow(n->rhs, 2));
    case Kind::Pow: {
      if (n->index == 0) return make_num(0.0);
      // (b^k)' = k * b^(k-1) * b'
      return make(Kind::Mul,
                  make(Kind::Mul, signed_num(n->index),
                       make_pow(n->lhs, n->index - 1)),
                  diff_node(n->lhs, i));
    }
    case Kind::Neg:
      return make(Kind::Neg, diff_node(n->lhs, i));
    case Kind::Sin:
      return make(Kind::Mul, make(Kind::Cos, n->lhs), diff_node(n->lhs, i));
    case Kind::Cos:
      return make(Kind::Neg, make(Kind::Mul, make(Kind::Sin, n->lhs),
                                  diff_node(n->lhs, i)));
    case Kind::Exp:
      return make(Kind::Mul, make(Kind::Exp, n->lhs), diff_node(n->lhs, i));
  }
  throw EvalError("corrupt expression node");
}

NodePtr compose_node(const NodePtr& n, const std::vector<NodePtr>& subs) {
  switch (n->kind) {
    case Kind::Num:
      return n;
    case Kind::Var:
      if (n->index >= static_cast<int>(subs.size()))
        throw EvalError("substitution list shorter than variable index x" +
                        std::to_string(n->index + 1));
      return subs[n->index];
    case Kind::Pow:
      return make_pow(compose_node(n->lhs, subs), n->index);
    case Kind::Neg:
    case Kind::Sin:
    case Kind::Cos:
    case Kind::Exp:
      return make(n->kind, compose_node(n->lhs, subs));
    default:
      return make(n->kind, compose_node(n->lhs, subs),
                  compose_node(n->rhs, subs));
  }
}

// Precedence levels used when printing: additive 0, multiplicative 1,
// unary minus 2, power 3, atom 4.
int precedence(Kind k) {
  switch (k) {
    case Kind::Add:
    case Kind::Sub:
      return 0;
    case Kind::Mul:
    case Kind::Div:
      return 1;
    case Kind::Neg:
      return 2;
    case Kind::Pow:
      return 3;
    default:
      return 4;
  }
}

void print_node(const ExprNode& n, std::string& out);

void print_child(const ExprNode& child, int min_prec, std::string& out) {
  if (precedence(child.kind) < min_prec) {
    out += '(';
    print_node(child, out);
    out += ')';
  } else {
    print_node(child, out);
  }
}

void print_node(const ExprNode& n, std::string& out) {
  switch (n.kind) {
    case Kind::Num: {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", n.value);
      out += buf;
      return;
    }
    case Kind::Var:
      out += 'x';
      out += std::to_string(n.index + 1);
      return;
    case Kind::Add:
      print_child(*n.lhs, 0, out);
      out += " + ";
      print_child(*n.rhs, 1, out);  // right operand must not re-associate
      return;
    case Kind::Sub:
      print_child(*n.lhs, 0, out);
      out += " - ";
      print_child(*n.rhs, 1, out);
      return;
    case Kind::Mul:
      print_child(*n.lhs, 1, out);
      out += "*";
      print_child(*n.rhs, 2, out);
      return;
    case Kind::Div:
      print_child(*n.lhs, 1, out);
      out += "/";
      print_child(*n.rhs, 2, out);
      return;
    case Kind::Neg:
      out += '-';
      print_child(*n.lhs, 3, out);
      return;
    case Kind::Pow:
      print_child(*n.lhs, 4, out);
      out += '^';
      if (n.index < 0) {
        out += '(';
        out += std::to_string(n.index);
        out += ')';
      } else {
        out += std::to_string(n.index);
      }
      return;
    case Kind::Sin:
      out += "sin(";
      print_node(*n.lhs, out);
      out += ')';
      return;
    case Kind::Cos:
      out += "cos(";
      print_node(*n.lhs, out);
      out += ')';
      return;
    case Kind::Exp:
      out += "exp(";
      print_node(*n.lhs, out);
      out += ')';
      return;
  }
}

bool equal_node(const ExprNode& a, const ExprNode& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Kind::Num:
      return a.value == b.value;
    case Kind::Var:
      return a.index == b.index;
    case Kind::Pow:
      return a.index == b.index && equal_node(*a.lhs, *b.lhs);
    case Kind::Neg:
    case Kind::Sin:
    case Kind::Cos:
    case Kind::Exp:
      return equal_node(*a.lhs, *b.lhs);
    default:
      return equal_node(*a.lhs, *b.lhs) && equal_node(*a.rhs, *b.rhs);
  }
}

int min_dim_node(const ExprNode& n) {
  switch (n.kind) {
    case Kind::Num:
      return 0;
    case Kind::Var:
      return n.index + 1;
    case Kind::Pow:
    case Kind::Neg:
    case Kind::Sin:
    case Kind::Cos:
    case Kind::Exp:
      return min_dim_node(*n.lhs);
    default:
      return std::max(min_dim_node(*n.lhs), min_dim_node(*n.rhs));
  }
}

// ---------------------------------------------------------------------------
// Recursive-descent parser for the grammar
//   expr   := term (("+"|"-") term)*
//   term   := factor (("*"|"/") factor)*
//   factor := ("-")? power
//   power  := atom ("^" integer)?
//   atom   := number | ident | func "(" expr ")" | "(" expr ")"
// ---------------------------------------------------------------------------
class Parser {
 public:
  Parser(std::string_view src, int dim) : src_(src), dim_(dim) {}

  NodePtr parse() {
    NodePtr e = parse_expr();
    skip_ws();
    if (pos_ != src_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, pos_);
  }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  char peek() {
    skip_ws();
    return pos_ < src_.size() ? src_[pos_] : '\0';
  }

  NodePtr parse_expr() {
    NodePtr lhs = parse_term();
    for (;;) {
      if (accept('+')) {
        lhs = make(Kind::Add, lhs, parse_term());
      } else if (accept('-')) {
        lhs = make(Kind::Sub, lhs, parse_term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_factor();
    for (;;) {
      if (accept('*')) {
        lhs = make(Kind::Mul, lhs, parse_factor());
      } else if (accept('/')) {
        lhs = make(Kind::Div, lhs, parse_factor());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_factor() {
    if (accept('-')) return make(Kind::Neg, parse_power());
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_atom();
    if (accept('^')) return make_pow(base, parse_integer());
    return base;
  }

  int parse_integer() {
    skip_ws();
    std::size_t start = pos_;
    bool neg = false;
    if (pos_ < src_.size() && src_[pos_] == '(') {
      // parenthesized negative exponent, as printed by str()
      ++pos_;
      skip_ws();
      if (accept('-')) neg = true;
      int v = parse_integer();
      expect(')');
      return neg ? -v : v;
    }
    if (pos_ < src_.size() && src_[pos_] == '-') {
      neg = true;
      ++pos_;
    }
    if (pos_ >= src_.size() || !std::isdigit(static_cast<unsigned char>(src_[pos_])))
      fail("expected integer exponent");
    long v = 0;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
      v = v * 10 + (src_[pos_] - '0');
      if (v > 1000000) fail("exponent too large");
      ++pos_;
    }
    (void)start;
    return static_cast<int>(neg ? -v : v);
  }

  NodePtr parse_atom() {
    skip_ws();
    if (pos_ >= src_.size()) fail("unexpected end of input");
    char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = parse_expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c))) return parse_ident();
    fail("unexpected character");
  }

  NodePtr parse_number() {
    std::size_t start = pos_;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t mark = pos_;
      ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      } else {
        pos_ = mark;  // not an exponent suffix
      }
    }
    double v = std::strtod(std::string(src_.substr(start, pos_ - start)).c_str(), nullptr);
    return make_num(v);
  }

  NodePtr parse_ident() {
    std::size_t start = pos_;
    while (pos_ < src_.size() && std::isalpha(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    std::string name(src_.substr(start, pos_ - start));
    if (name == "sin" || name == "cos" || name == "exp") {
      Kind k = name == "sin" ? Kind::Sin : name == "cos" ? Kind::Cos : Kind::Exp;
      expect('(');
      NodePtr arg = parse_expr();
      expect(')');
      return make(k, arg);
    }
    if (name == "x") {
      if (pos_ >= src_.size() || !std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        pos_ = start;
        fail("expected variable index after 'x'");
      }
      if (src_[pos_] == '0') {
        pos_ = start;
        fail("variable indices start at x1");
      }
      long idx = 0;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        idx = idx * 10 + (src_[pos_] - '0');
        if (idx > 100000) {
          pos_ = start;
          fail("variable index out of range");
        }
        ++pos_;
      }
      if (idx > dim_) {
        pos_ = start;
        fail("variable x" + std::to_string(idx) + " exceeds chart dimension " +
             std::to_string(dim_));
      }
      return make_var(static_cast<int>(idx - 1));
    }
    pos_ = start;
    fail("unknown identifier '" + name + "'");
  }

  std::string_view src_;
  int dim_;
  std::size_t pos_ = 0;
};

}  // namespace detail

using detail::Kind;

Expr::Expr() : node_(detail::make_num(0.0)) {}
Expr::Expr(std::shared_ptr<const detail::ExprNode> node) : node_(std::move(node)) {}

Expr Expr::number(double v) { return Expr(detail::signed_num(v)); }

Expr Expr::var(int index) {
  if (index < 0) throw EvalError("negative variable index");
  return Expr(detail::make_var(index));
}

double Expr::eval(std::span<const double> point) const {
  double v = detail::eval_node(*node_, point);
  if (!std::isfinite(v)) throw EvalError("non-finite evaluation result");
  return v;
}

Expr Expr::diff(int index) const { return Expr(detail::diff_node(node_, index)); }

Expr Expr::compose(const std::vector<Expr>& substitution) const {
  if (min_dim() > static_cast<int>(substitution.size()))
    throw EvalError("substitution list shorter than expression dimension");
  std::vector<detail::NodePtr> subs;
  subs.reserve(substitution.size());
  for (const Expr& e : substitution) subs.push_back(e.node_);
  return Expr(detail::compose_node(node_, subs));
}

std::string Expr::str() const {
  std::string out;
  detail::print_node(*node_, out);
  return out;
}

bool Expr::same_structure(const Expr& other) const {
  return detail::equal_node(*node_, *other.node_);
}

int Expr::min_dim() const { return detail::min_dim_node(*node_); }

bool Expr::is_zero_literal() const {
  return node_->kind == Kind::Num && node_->value == 0.0;
}

Expr operator+(const Expr& a, const Expr& b) {
  return Expr(detail::make(Kind::Add, a.node_, b.node_));
}
Expr operator-(const Expr& a, const Expr& b) {
  return Expr(detail::make(Kind::Sub, a.node_, b.node_));
}
Expr operator*(const Expr& a, const Expr& b) {
  return Expr(detail::make(Kind::Mul, a.node_, b.node_));
}
Expr operator/(const Expr& a, const Expr& b) {
  return Expr(detail::make(Kind::Div, a.node_, b.node_));
}
Expr operator-(const Expr& a) { return Expr(detail::make(Kind::Neg, a.node_)); }
Expr pow(const Expr& a, int exponent) {
  return Expr(detail::make_pow(a.node_, exponent));
}
Expr sin(const Expr& a) { return Expr(detail::make(Kind::Sin, a.node_)); }
Expr cos(const Expr& a) { return Expr(detail::make(Kind::Cos, a.node_)); }
Expr exp(const Expr& a) { return Expr(detail::make(Kind::Exp, a.node_)); }

Expr parse_expr(std::string_view source, int dim) {
  detail::Parser p(source, dim);
  return Expr(p.parse());
}

}  // namespace apaths
