#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cotlab {

/// Thrown when evaluating an expression hits a pole (division by zero,
/// zero raised to a negative power). Poles are reported, never turned
/// into silent NaN/inf.
class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown on malformed input: carries the byte offset of the failure.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, std::size_t offset)
      : std::runtime_error(msg + " (at offset " + std::to_string(offset) + ")"),
        offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// Immutable scalar expression over chart coordinates x_0..x_{n-1}.
///
/// Supported operations: +, -, *, /, integer ^, unary -, sin, cos, exp.
/// Values are shared ASTs; copying is cheap and thread-safe for reads.
/// Construction folds constants (0+e, 1*e, literal arithmetic) but does
/// no other simplification.
class Expr {
 public:
  enum class Kind { Const, Var, Add, Sub, Mul, Div, Pow, Neg, Sin, Cos, Exp };

  /// Default: the constant 0.
  Expr();

  static Expr constant(double c);
  static Expr var(int index);
  static Expr pow(const Expr& base, long exponent);
  static Expr sin(const Expr& e);
  static Expr cos(const Expr& e);
  static Expr exp(const Expr& e);

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  Expr operator-() const;

  /// Evaluate at a point. `point.size()` must cover every variable used.
  double eval(std::span<const double> point) const;

  /// Exact partial derivative with respect to coordinate `coord`.
  Expr diff(int coord) const;

  /// Printable form; reparsing yields a structurally identical AST.
  /// Variables print as x0, x1, ... unless coordinate names are given.
  std::string str() const;
  std::string str(std::span<const std::string> coords) const;

  Kind kind() const;
  bool is_zero() const;      // structurally the constant 0
  bool is_constant() const;
  double constant_value() const;  // requires is_constant()

  /// Structural equality (same shape, same constants/indices).
  bool same_ast(const Expr& other) const;

  /// Highest variable index appearing, or -1 for closed expressions.
  int max_var() const;

  struct Node;  // implementation detail, defined in expr.cpp

 private:
  explicit Expr(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
  std::shared_ptr<const Node> n_;
};

/// Parse an infix expression. Precedence: ^ above unary minus above */
/// above +-. `coords` supplies the recognized variable names; anything
/// else (other than sin/cos/exp calls) is an unknown-identifier error.
Expr parse_expr(std::string_view src, std::span<const std::string> coords);

}  // namespace cotlab
