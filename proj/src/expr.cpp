#include "cotlab/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>

namespace cotlab {

struct Expr::Node {
  Kind kind;
  double value = 0.0;  // Const
  int var = -1;        // Var
  long expnt = 0;      // Pow
  std::shared_ptr<const Node> a, b;
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

NodePtr make_node(Expr::Kind k, double value, int var, long expnt, NodePtr a,
                  NodePtr b) {
  auto n = std::make_shared<Expr::Node>();
  n->kind = k;
  n->value = value;
  n->var = var;
  n->expnt = expnt;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

double ipow(double base, long e) {
  if (e < 0) {
    if (base == 0.0) throw EvalError("zero raised to a negative power");
    return 1.0 / ipow(base, -e);
  }
  double r = 1.0, b = base;
  for (long k = e; k > 0; k >>= 1) {
    if (k & 1) r *= b;
    b *= b;
  }
  return r;
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

Expr::Expr() : n_(make_node(Kind::Const, 0.0, -1, 0, nullptr, nullptr)) {}

Expr Expr::constant(double c) {
  return Expr(make_node(Kind::Const, c, -1, 0, nullptr, nullptr));
}

Expr Expr::var(int index) {
  return Expr(make_node(Kind::Var, 0.0, index, 0, nullptr, nullptr));
}

Expr::Kind Expr::kind() const { return n_->kind; }

bool Expr::is_constant() const { return n_->kind == Kind::Const; }

bool Expr::is_zero() const { return is_constant() && n_->value == 0.0; }

double Expr::constant_value() const { return n_->value; }

Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant())
    return Expr::constant(a.constant_value() + b.constant_value());
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  return Expr(make_node(Expr::Kind::Add, 0, -1, 0, a.n_, b.n_));
}

Expr operator-(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant())
    return Expr::constant(a.constant_value() - b.constant_value());
  if (b.is_zero()) return a;
  if (a.is_zero()) return -b;
  return Expr(make_node(Expr::Kind::Sub, 0, -1, 0, a.n_, b.n_));
}

Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant())
    return Expr::constant(a.constant_value() * b.constant_value());
  if (a.is_zero() || b.is_zero()) return Expr::constant(0.0);
  if (a.is_constant() && a.constant_value() == 1.0) return b;
  if (b.is_constant() && b.constant_value() == 1.0) return a;
  return Expr(make_node(Expr::Kind::Mul, 0, -1, 0, a.n_, b.n_));
}

Expr operator/(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant() && b.constant_value() != 0.0)
    return Expr::constant(a.constant_value() / b.constant_value());
  if (b.is_constant() && b.constant_value() == 1.0) return a;
  if (a.is_zero() && !(b.is_constant() && b.constant_value() == 0.0)) return a;
  return Expr(make_node(Expr::Kind::Div, 0, -1, 0, a.n_, b.n_));
}

Expr Expr::operator-() const {
  if (is_constant()) return constant(-constant_value());
  if (n_->kind == Kind::Neg) return Expr(n_->a);
  return Expr(make_node(Kind::Neg, 0, -1, 0, n_, nullptr));
}

Expr Expr::pow(const Expr& base, long exponent) {
  if (exponent == 0) return constant(1.0);
  if (exponent == 1) return base;
  if (base.is_constant() && !(base.constant_value() == 0.0 && exponent < 0))
    return constant(ipow(base.constant_value(), exponent));
  return Expr(make_node(Kind::Pow, 0, -1, exponent, base.n_, nullptr));
}

Expr Expr::sin(const Expr& e) {
  if (e.is_constant()) return constant(std::sin(e.constant_value()));
  return Expr(make_node(Kind::Sin, 0, -1, 0, e.n_, nullptr));
}

Expr Expr::cos(const Expr& e) {
  if (e.is_constant()) return constant(std::cos(e.constant_value()));
  return Expr(make_node(Kind::Cos, 0, -1, 0, e.n_, nullptr));
}

Expr Expr::exp(const Expr& e) {
  if (e.is_constant()) return constant(std::exp(e.constant_value()));
  return Expr(make_node(Kind::Exp, 0, -1, 0, e.n_, nullptr));
}

double Expr::eval(std::span<const double> point) const {
  const Node& n = *n_;
  switch (n.kind) {
    case Kind::Const:
      return n.value;
    case Kind::Var:
      if (n.var < 0 || static_cast<std::size_t>(n.var) >= point.size())
        throw EvalError("point dimension too small for variable index " +
                        std::to_string(n.var));
      return point[static_cast<std::size_t>(n.var)];
    case Kind::Add:
      return Expr(n.a).eval(point) + Expr(n.b).eval(point);
    case Kind::Sub:
      return Expr(n.a).eval(point) - Expr(n.b).eval(point);
    case Kind::Mul:
      return Expr(n.a).eval(point) * Expr(n.b).eval(point);
    case Kind::Div: {
      double num = Expr(n.a).eval(point);
      double den = Expr(n.b).eval(point);
      if (den == 0.0) throw EvalError("division by zero");
      return num / den;
    }
    case Kind::Pow:
      return ipow(Expr(n.a).eval(point), n.expnt);
    case Kind::Neg:
      return -Expr(n.a).eval(point);
    case Kind::Sin:
      return std::sin(Expr(n.a).eval(point));
    case Kind::Cos:
      return std::cos(Expr(n.a).eval(point));
    case Kind::Exp:
      return std::exp(Expr(n.a).eval(point));
  }
  throw std::logic_error("corrupt expression node");
}

Expr Expr::diff(int coord) const {
  const Node& n = *n_;
  switch (n.kind) {
    case Kind::Const:
      return constant(0.0);
    case Kind::Var:
      return constant(n.var == coord ? 1.0 : 0.0);
    case Kind::Add:
      return Expr(n.a).diff(coord) + Expr(n.b).diff(coord);
    case Kind::Sub:
      return Expr(n.a).diff(coord) - Expr(n.b).diff(coord);
    case Kind::Mul:
      return Expr(n.a).diff(coord) * Expr(n.b) +
             Expr(n.a) * Expr(n.b).diff(coord);
    case Kind::Div:
      return (Expr(n.a).diff(coord) * Expr(n.b) -
              Expr(n.a) * Expr(n.b).diff(coord)) /
             (Expr(n.b) * Expr(n.b));
    case Kind::Pow:
      return constant(static_cast<double>(n.expnt)) *
             pow(Expr(n.a), n.expnt - 1) * Expr(n.a).diff(coord);
    case Kind::Neg:
      return -Expr(n.a).diff(coord);
    case Kind::Sin:
      return cos(Expr(n.a)) * Expr(n.a).diff(coord);
    case Kind::Cos:
      return -(sin(Expr(n.a)) * Expr(n.a).diff(coord));
    case Kind::Exp:
      return exp(Expr(n.a)) * Expr(n.a).diff(coord);
  }
  throw std::logic_error("corrupt expression node");
}

bool Expr::same_ast(const Expr& other) const {
  if (n_ == other.n_) return true;
  const Node& x = *n_;
  const Node& y = *other.n_;
  if (x.kind != y.kind) return false;
  switch (x.kind) {
    case Kind::Const:
      return x.value == y.value;
    case Kind::Var:
      return x.var == y.var;
    case Kind::Pow:
      return x.expnt == y.expnt && Expr(x.a).same_ast(Expr(y.a));
    case Kind::Neg:
    case Kind::Sin:
    case Kind::Cos:
    case Kind::Exp:
      return Expr(x.a).same_ast(Expr(y.a));
    default:
      return Expr(x.a).same_ast(Expr(y.a)) && Expr(x.b).same_ast(Expr(y.b));
  }
}

int Expr::max_var() const {
  const Node& n = *n_;
  switch (n.kind) {
    case Kind::Const:
      return -1;
    case Kind::Var:
      return n.var;
    case Kind::Add:
    case Kind::Sub:
    case Kind::Mul:
    case Kind::Div:
      return std::max(Expr(n.a).max_var(), Expr(n.b).max_var());
    default:
      return Expr(n.a).max_var();
  }
}

// ---------------------------------------------------------------------------
// Printing. Precedence levels: Add/Sub 1, Mul/Div 2, Neg 3, Pow 4, atoms 5.
// Right operands of - and / are printed one level tighter so that the
// output reparses to the identical tree.

namespace {

int precedence(Expr::Kind k) {
  switch (k) {
    case Expr::Kind::Add:
    case Expr::Kind::Sub:
      return 1;
    case Expr::Kind::Mul:
    case Expr::Kind::Div:
      return 2;
    case Expr::Kind::Neg:
      return 3;
    case Expr::Kind::Pow:
      return 4;
    default:
      return 5;
  }
}

void print_node(const Expr::Node& n, int parent,
                std::span<const std::string> coords, std::string& out) {
  int prec = precedence(n.kind);
  bool parens = prec < parent;
  if (out.size() > (1u << 20))
    throw std::runtime_error("expression too large to print");
  if (parens) out += '(';
  switch (n.kind) {
    case Expr::Kind::Const:
      out += format_double(n.value);
      break;
    case Expr::Kind::Var:
      if (n.var >= 0 && static_cast<std::size_t>(n.var) < coords.size())
        out += coords[static_cast<std::size_t>(n.var)];
      else
        out += "x" + std::to_string(n.var);
      break;
    case Expr::Kind::Add:
      print_node(*n.a, prec, coords, out);
      out += '+';
      print_node(*n.b, prec + 1, coords, out);  // keep left association
      break;
    case Expr::Kind::Sub:
      print_node(*n.a, prec, coords, out);
      out += '-';
      print_node(*n.b, prec + 1, coords, out);
      break;
    case Expr::Kind::Mul:
      print_node(*n.a, prec, coords, out);
      out += '*';
      print_node(*n.b, prec + 1, coords, out);  // keep left association
      break;
    case Expr::Kind::Div:
      print_node(*n.a, prec, coords, out);
      out += '/';
      print_node(*n.b, prec + 1, coords, out);
      break;
    case Expr::Kind::Neg:
      out += '-';
      print_node(*n.a, prec, coords, out);
      break;
    case Expr::Kind::Pow:
      print_node(*n.a, prec + 1, coords, out);
      out += '^';
      out += std::to_string(n.expnt);
      break;
    case Expr::Kind::Sin:
      out += "sin(";
      print_node(*n.a, 0, coords, out);
      out += ')';
      break;
    case Expr::Kind::Cos:
      out += "cos(";
      print_node(*n.a, 0, coords, out);
      out += ')';
      break;
    case Expr::Kind::Exp:
      out += "exp(";
      print_node(*n.a, 0, coords, out);
      out += ')';
      break;
  }
  if (parens) out += ')';
}

}  // namespace

std::string Expr::str() const { return str({}); }

std::string Expr::str(std::span<const std::string> coords) const {
  std::string out;
  print_node(*n_, 0, coords, out);
  return out;
}

// ---------------------------------------------------------------------------
// Recursive-descent parser.

namespace {

class Parser {
 public:
  Parser(std::string_view src, std::span<const std::string> coords)
      : src_(src), coords_(coords) {}

  Expr parse() {
    Expr e = parse_sum();
    skip_ws();
    if (pos_ != src_.size())
      throw ParseError("unexpected trailing input", pos_);
    return e;
  }

 private:
  std::string_view src_;
  std::span<const std::string> coords_;
  std::size_t pos_ = 0;

  void skip_ws() {
    while (pos_ < src_.size() &&
           std::isspace(static_cast<unsigned char>(src_[pos_])))
      ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < src_.size() ? src_[pos_] : '\0';
  }

  Expr parse_sum() {
    Expr e = parse_term();
    for (;;) {
      if (eat('+'))
        e = e + parse_term();
      else if (eat('-'))
        e = e - parse_term();
      else
        return e;
    }
  }

  Expr parse_term() {
    Expr e = parse_unary();
    for (;;) {
      if (eat('*'))
        e = e * parse_unary();
      else if (eat('/'))
        e = e / parse_unary();
      else
        return e;
    }
  }

  Expr parse_unary() {
    if (eat('-')) return -parse_unary();
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_atom();
    if (eat('^')) {
      skip_ws();
      std::size_t start = pos_;
      if (pos_ < src_.size() && src_[pos_] == '-') ++pos_;
      std::size_t digits = pos_;
      while (pos_ < src_.size() &&
             std::isdigit(static_cast<unsigned char>(src_[pos_])))
        ++pos_;
      if (pos_ == digits)
        throw ParseError("expected integer exponent after '^'", start);
      long e = 0;
      auto res = std::from_chars(src_.data() + start, src_.data() + pos_, e);
      if (res.ec != std::errc())
        throw ParseError("invalid integer exponent", start);
      return Expr::pow(base, e);
    }
    return base;
  }

  Expr parse_atom() {
    skip_ws();
    if (pos_ >= src_.size())
      throw ParseError("unexpected end of input, expected an operand", pos_);
    char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = parse_sum();
      if (!eat(')')) throw ParseError("expected ')'", pos_);
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
      return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_')
      return parse_ident();
    throw ParseError(std::string("unexpected character '") + c + "'", pos_);
  }

  Expr parse_number() {
    std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isdigit(static_cast<unsigned char>(src_[pos_])) ||
            src_[pos_] == '.'))
      ++pos_;
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t save = pos_;
      ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-'))
        ++pos_;
      if (pos_ < src_.size() &&
          std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        while (pos_ < src_.size() &&
               std::isdigit(static_cast<unsigned char>(src_[pos_])))
          ++pos_;
      } else {
        pos_ = save;  // 'e' belongs to something else (or is an error later)
      }
    }
    double v = 0;
    auto res = std::from_chars(src_.data() + start, src_.data() + pos_, v);
    if (res.ec != std::errc() || res.ptr != src_.data() + pos_)
      throw ParseError("invalid number literal", start);
    return Expr::constant(v);
  }

  Expr parse_ident() {
    std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
            src_[pos_] == '_'))
      ++pos_;
    std::string_view name = src_.substr(start, pos_ - start);
    if (name == "sin" || name == "cos" || name == "exp") {
      if (!eat('(')) throw ParseError("expected '(' after function name", pos_);
      Expr arg = parse_sum();
      if (!eat(')')) throw ParseError("expected ')'", pos_);
      if (name == "sin") return Expr::sin(arg);
      if (name == "cos") return Expr::cos(arg);
      return Expr::exp(arg);
    }
    for (std::size_t i = 0; i < coords_.size(); ++i)
      if (coords_[i] == name) return Expr::var(static_cast<int>(i));
    throw ParseError("unknown identifier '" + std::string(name) + "'", start);
  }
};

}  // namespace

Expr parse_expr(std::string_view src, std::span<const std::string> coords) {
  return Parser(src, coords).parse();
}

}  // namespace cotlab
