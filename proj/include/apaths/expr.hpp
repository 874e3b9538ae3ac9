#pragma once

#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace apaths {

/// Thrown by parse_expr with the byte offset of the offending token.
struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, std::size_t offset)
      : std::runtime_error(msg + " (at offset " + std::to_string(offset) + ")"),
        offset(offset) {}
  std::size_t offset;
};

/// Runtime evaluation failure (division by zero, bad point dimension, ...).
struct EvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {
struct ExprNode;
}

/// Immutable symbolic scalar field over chart coordinates x1..xn.
/// Cheap to copy (shared AST); all operations are pure.
class Expr {
 public:
  Expr();  // the constant 0

  static Expr number(double v);
  static Expr var(int index);  // 0-based coordinate index

  double eval(std::span<const double> point) const;
  Expr diff(int index) const;  // 0-based coordinate index
  Expr compose(const std::vector<Expr>& substitution) const;

  std::string str() const;
  bool same_structure(const Expr& other) const;

  /// 1 + highest coordinate index referenced (0 for constants).
  int min_dim() const;

  bool is_zero_literal() const;

  friend Expr operator+(const Expr&, const Expr&);
  friend Expr operator-(const Expr&, const Expr&);
  friend Expr operator*(const Expr&, const Expr&);
  friend Expr operator/(const Expr&, const Expr&);
  friend Expr operator-(const Expr&);
  friend Expr pow(const Expr&, int exponent);
  friend Expr sin(const Expr&);
  friend Expr cos(const Expr&);
  friend Expr exp(const Expr&);
  friend Expr parse_expr(std::string_view, int);

 private:
  explicit Expr(std::shared_ptr<const detail::ExprNode> node);
  std::shared_ptr<const detail::ExprNode> node_;
};

/// Parse `source` against the expression grammar; variables x1..x<dim>.
Expr parse_expr(std::string_view source, int dim);

}  // namespace apaths
