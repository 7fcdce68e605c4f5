#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <map>
#include <memory>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "scalar_fn.hpp"

namespace quarterwave {

// Expression grammar (whitespace-insensitive):
//
//   expr   := term (("+" | "-") term)*
//   term   := factor (("*" | "/") factor)*
//   factor := "-" factor | power
//   power  := atom ("^" factor)?
//   atom   := NUMBER | IDENT | IDENT "(" expr ("," expr)* ")" | "(" expr ")"
//
// "^" is right-associative and binds tighter than unary minus, so
// "-x^2" parses as -(x^2) and "2^3^2" as 2^(3^2).

enum class Builtin {
  Sin, Cos, Tan, Exp, Ln, Sqrt, Abs, Sign, Tanh,  // one argument
  Min, Max, Pow,                                  // two arguments
  Bump,                                           // three arguments
};

struct BuiltinInfo {
  std::string_view name;
  Builtin id;
  int arity;
};

inline constexpr std::array<BuiltinInfo, 13> kBuiltins{{
    {"sin", Builtin::Sin, 1},
    {"cos", Builtin::Cos, 1},
    {"tan", Builtin::Tan, 1},
    {"exp", Builtin::Exp, 1},
    {"ln", Builtin::Ln, 1},
    {"sqrt", Builtin::Sqrt, 1},
    {"abs", Builtin::Abs, 1},
    {"sign", Builtin::Sign, 1},
    {"tanh", Builtin::Tanh, 1},
    {"min", Builtin::Min, 2},
    {"max", Builtin::Max, 2},
    {"pow", Builtin::Pow, 2},
    {"bump", Builtin::Bump, 3},
}};

inline const BuiltinInfo* find_builtin(std::string_view name) {
  for (const auto& b : kBuiltins)
    if (b.name == name) return &b;
  return nullptr;
}

/// Smooth compactly supported bump: exp(1 - 1/(1 - y^2)) with y = (x-c)/w
/// for |y| < 1, and 0 otherwise.  Peak value 1 at x = c.
inline double bump(double x, double c, double w) {
  const double y = (x - c) / w;
  const double y2 = y * y;
  if (!(y2 < 1.0)) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - y2));
}

/// x^y restricted to real results: 0^negative and negative^(non-integer)
/// are domain errors, overflow is a domain error.
inline double pow_checked(double x, double y) {
  if (x == 0.0 && y < 0.0)
    throw DomainError("0 raised to a negative power");
  if (x < 0.0) {
    const bool integer_exp = y == std::nearbyint(y) && std::abs(y) < 9.0e15;
    if (!integer_exp)
      throw DomainError("negative base with non-integer exponent");
  }
  const double r = std::pow(x, y);
  if (!std::isfinite(r)) throw DomainError("non-finite result in power");
  return r;
}

/// Locale-independent shortest representation that reparses to the same
/// double.
inline std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

/// Immutable expression tree over a declared set of variable names.
class Expr {
 public:
  enum class Kind { Number, Variable, Negate, Binary, Call };
  enum class BinaryOp { Add, Sub, Mul, Div, Pow };

  struct Node;
  using NodePtr = std::shared_ptr<const Node>;

  struct Node {
    Kind kind;
    double number = 0.0;           // Kind::Number
    std::string name;              // Kind::Variable
    int var_index = -1;            // position in the declared variable list
    BinaryOp op = BinaryOp::Add;   // Kind::Binary
    Builtin builtin = Builtin::Sin;  // Kind::Call
    std::vector<NodePtr> children;
  };

  Expr(NodePtr root, std::vector<std::string> variables)
      : root_(std::move(root)), variables_(std::move(variables)) {}

  const NodePtr& root() const noexcept { return root_; }
  const std::vector<std::string>& variables() const noexcept {
    return variables_;
  }

  /// Value at the given variable bindings (positional, aligned with the
  /// declared variable list).
  double eval(std::span<const double> values) const {
    if (values.size() != variables_.size())
      throw ArityMismatch("expression over " +
                          std::to_string(variables_.size()) +
                          " variable(s) evaluated with " +
                          std::to_string(values.size()));
    const double r = eval_node(*root_, values);
    if (!std::isfinite(r)) throw DomainError("expression value is not finite");
    return r;
  }

  double eval(const std::map<std::string, double>& bindings) const {
    std::vector<double> values(variables_.size());
    for (std::size_t i = 0; i < variables_.size(); ++i) {
      auto it = bindings.find(variables_[i]);
      if (it == bindings.end())
        throw Error("no binding for variable '" + variables_[i] + "'");
      values[i] = it->second;
    }
    return eval(values);
  }

  /// Fully parenthesized text that parses back to a structurally identical
  /// tree.
  std::string to_string() const { return print_node(*root_); }

  bool same_structure(const Expr& other) const {
    return same_node(*root_, *other.root_);
  }

 private:
  static double eval_node(const Node& n, std::span<const double> values);
  static std::string print_node(const Node& n);
  static bool same_node(const Node& a, const Node& b);

  NodePtr root_;
  std::vector<std::string> variables_;
};

inline double Expr::eval_node(const Node& n, std::span<const double> values) {
  switch (n.kind) {
    case Kind::Number:
      return n.number;
    case Kind::Variable:
      return values[static_cast<std::size_t>(n.var_index)];
    case Kind::Negate:
      return -eval_node(*n.children[0], values);
    case Kind::Binary: {
      const double a = eval_node(*n.children[0], values);
      const double b = eval_node(*n.children[1], values);
      double r = 0.0;
      switch (n.op) {
        case BinaryOp::Add: r = a + b; break;
        case BinaryOp::Sub: r = a - b; break;
        case BinaryOp::Mul: r = a * b; break;
        case BinaryOp::Div:
          if (b == 0.0) throw DomainError("division by zero");
          r = a / b;
          break;
        case BinaryOp::Pow:
          return pow_checked(a, b);
      }
      if (!std::isfinite(r)) throw DomainError("non-finite intermediate value");
      return r;
    }
    case Kind::Call: {
      auto arg = [&](int i) { return eval_node(*n.children[i], values); };
      double r = 0.0;
      switch (n.builtin) {
        case Builtin::Sin: r = std::sin(arg(0)); break;
        case Builtin::Cos: r = std::cos(arg(0)); break;
        case Builtin::Tan: r = std::tan(arg(0)); break;
        case Builtin::Exp: r = std::exp(arg(0)); break;
        case Builtin::Ln: {
          const double x = arg(0);
          if (!(x > 0.0)) throw DomainError("ln of a non-positive number");
          r = std::log(x);
          break;
        }
        case Builtin::Sqrt: {
          const double x = arg(0);
          if (x < 0.0) throw DomainError("sqrt of a negative number");
          r = std::sqrt(x);
          break;
        }
        case Builtin::Abs: r = std::abs(arg(0)); break;
        case Builtin::Sign: {
          const double x = arg(0);
          r = x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0);
          break;
        }
        case Builtin::Tanh: r = std::tanh(arg(0)); break;
        case Builtin::Min: r = std::min(arg(0), arg(1)); break;
        case Builtin::Max: r = std::max(arg(0), arg(1)); break;
        case Builtin::Pow: return pow_checked(arg(0), arg(1));
        case Builtin::Bump: r = bump(arg(0), arg(1), arg(2)); break;
      }
      if (!std::isfinite(r)) throw DomainError("non-finite intermediate value");
      return r;
    }
  }
  throw Error("corrupt expression node");
}

inline std::string Expr::print_node(const Node& n) {
  switch (n.kind) {
    case Kind::Number:
      return format_number(n.number);
    case Kind::Variable:
      return n.name;
    case Kind::Negate:
      return "(-" + print_node(*n.children[0]) + ")";
    case Kind::Binary: {
      const char* op = "+";
      switch (n.op) {
        case BinaryOp::Add: op = "+"; break;
        case BinaryOp::Sub: op = "-"; break;
        case BinaryOp::Mul: op = "*"; break;
        case BinaryOp::Div: op = "/"; break;
        case BinaryOp::Pow: op = "^"; break;
      }
      return "(" + print_node(*n.children[0]) + op + print_node(*n.children[1]) +
             ")";
    }
    case Kind::Call: {
      std::string out;
      for (const auto& b : kBuiltins)
        if (b.id == n.builtin) out = std::string(b.name);
      out += "(";
      for (std::size_t i = 0; i < n.children.size(); ++i) {
        if (i) out += ",";
        out += print_node(*n.children[i]);
      }
      out += ")";
      return out;
    }
  }
  throw Error("corrupt expression node");
}

inline bool Expr::same_node(const Node& a, const Node& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Kind::Number:
      return a.number == b.number;
    case Kind::Variable:
      return a.name == b.name && a.var_index == b.var_index;
    case Kind::Negate:
      break;
    case Kind::Binary:
      if (a.op != b.op) return false;
      break;
    case Kind::Call:
      if (a.builtin != b.builtin) return false;
      break;
  }
  if (a.children.size() != b.children.size()) return false;
  for (std::size_t i = 0; i < a.children.size(); ++i)
    if (!same_node(*a.children[i], *b.children[i])) return false;
  return true;
}

namespace expr_detail {

enum class Tok {
  Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma, End
};

struct Token {
  Tok kind;
  double number = 0.0;
  std::string_view text;
  std::size_t pos = 0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    while (i_ < src_.size() && is_space(src_[i_])) ++i_;
    const std::size_t start = i_;
    if (i_ >= src_.size()) return {Tok::End, 0.0, {}, start};
    const char c = src_[i_];
    switch (c) {
      case '+': ++i_; return {Tok::Plus, 0.0, src_.substr(start, 1), start};
      case '-': ++i_; return {Tok::Minus, 0.0, src_.substr(start, 1), start};
      case '*': ++i_; return {Tok::Star, 0.0, src_.substr(start, 1), start};
      case '/': ++i_; return {Tok::Slash, 0.0, src_.substr(start, 1), start};
      case '^': ++i_; return {Tok::Caret, 0.0, src_.substr(start, 1), start};
      case '(': ++i_; return {Tok::LParen, 0.0, src_.substr(start, 1), start};
      case ')': ++i_; return {Tok::RParen, 0.0, src_.substr(start, 1), start};
      case ',': ++i_; return {Tok::Comma, 0.0, src_.substr(start, 1), start};
      default: break;
    }
    if (is_digit(c)) return lex_number(start);
    if (is_ident_start(c)) {
      while (i_ < src_.size() && is_ident_char(src_[i_])) ++i_;
      return {Tok::Ident, 0.0, src_.substr(start, i_ - start), start};
    }
    throw ParseError(start, std::string("unexpected character '") + c + "'");
  }

 private:
  static bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n';
  }
  static bool is_digit(char c) { return c >= '0' && c <= '9'; }
  static bool is_ident_start(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
  }
  static bool is_ident_char(char c) { return is_ident_start(c) || is_digit(c); }

  Token lex_number(std::size_t start) {
    while (i_ < src_.size() && is_digit(src_[i_])) ++i_;
    if (i_ + 1 < src_.size() && src_[i_] == '.' && is_digit(src_[i_ + 1])) {
      ++i_;
      while (i_ < src_.size() && is_digit(src_[i_])) ++i_;
    }
    if (i_ < src_.size() && (src_[i_] == 'e' || src_[i_] == 'E')) {
      std::size_t j = i_ + 1;
      if (j < src_.size() && (src_[j] == '+' || src_[j] == '-')) ++j;
      if (j < src_.size() && is_digit(src_[j])) {
        i_ = j;
        while (i_ < src_.size() && is_digit(src_[i_])) ++i_;
      }
    }
    const std::string_view text = src_.substr(start, i_ - start);
    double value = 0.0;
    const auto res =
        std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
      throw ParseError(start, "malformed number '" + std::string(text) + "'");
    return {Tok::Number, value, text, start};
  }

  std::string_view src_;
  std::size_t i_ = 0;
};

class Parser {
 public:
  Parser(std::string_view src, std::vector<std::string> variables)
      : lexer_(src), variables_(std::move(variables)) {
    advance();
  }

  Expr parse() {
    if (cur_.kind == Tok::End) throw ParseError(cur_.pos, "empty expression");
    Expr::NodePtr root = parse_expr();
    if (cur_.kind != Tok::End)
      throw ParseError(cur_.pos, "unexpected trailing input '" +
                                     std::string(cur_.text) + "'");
    return Expr(std::move(root), std::move(variables_));
  }

 private:
  using Node = Expr::Node;
  using NodePtr = Expr::NodePtr;

  void advance() { cur_ = lexer_.next(); }

  bool accept(Tok k) {
    if (cur_.kind != k) return false;
    advance();
    return true;
  }

  NodePtr parse_expr() {
    NodePtr lhs = parse_term();
    while (cur_.kind == Tok::Plus || cur_.kind == Tok::Minus) {
      const auto op =
          cur_.kind == Tok::Plus ? Expr::BinaryOp::Add : Expr::BinaryOp::Sub;
      advance();
      lhs = binary(op, std::move(lhs), parse_term());
    }
    return lhs;
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_factor();
    while (cur_.kind == Tok::Star || cur_.kind == Tok::Slash) {
      const auto op =
          cur_.kind == Tok::Star ? Expr::BinaryOp::Mul : Expr::BinaryOp::Div;
      advance();
      lhs = binary(op, std::move(lhs), parse_factor());
    }
    return lhs;
  }

  NodePtr parse_factor() {
    if (accept(Tok::Minus)) {
      auto n = std::make_shared<Node>();
      n->kind = Expr::Kind::Negate;
      n->children.push_back(parse_factor());
      return n;
    }
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_atom();
    if (accept(Tok::Caret))
      return binary(Expr::BinaryOp::Pow, std::move(base), parse_factor());
    return base;
  }

  NodePtr parse_atom() {
    if (cur_.kind == Tok::Number) {
      auto n = std::make_shared<Node>();
      n->kind = Expr::Kind::Number;
      n->number = cur_.number;
      advance();
      return n;
    }
    if (cur_.kind == Tok::Ident) {
      const Token ident = cur_;
      advance();
      if (accept(Tok::LParen)) return parse_call(ident);
      return resolve_name(ident);
    }
    if (accept(Tok::LParen)) {
      NodePtr inner = parse_expr();
      if (!accept(Tok::RParen))
        throw ParseError(cur_.pos, "expected ')'");
      return inner;
    }
    if (cur_.kind == Tok::End)
      throw ParseError(cur_.pos, "unexpected end of input");
    throw ParseError(cur_.pos, "expected a number, a name, or '(', got '" +
                                   std::string(cur_.text) + "'");
  }

  NodePtr parse_call(const Token& ident) {
    const std::string name(ident.text);
    const BuiltinInfo* info = find_builtin(ident.text);
    if (!info)
      throw ParseError(ident.pos, "unknown function '" + name + "'");
    std::vector<NodePtr> args;
    args.push_back(parse_expr());
    while (accept(Tok::Comma)) args.push_back(parse_expr());
    if (!accept(Tok::RParen)) throw ParseError(cur_.pos, "expected ')'");
    if (static_cast<int>(args.size()) != info->arity)
      throw ParseError(ident.pos, "function '" + name + "' expects " +
                                      std::to_string(info->arity) +
                                      " argument(s), got " +
                                      std::to_string(args.size()));
    auto n = std::make_shared<Node>();
    n->kind = Expr::Kind::Call;
    n->builtin = info->id;
    n->children = std::move(args);
    return n;
  }

  NodePtr resolve_name(const Token& ident) {
    const auto it =
        std::find(variables_.begin(), variables_.end(), std::string(ident.text));
    if (it != variables_.end()) {
      auto n = std::make_shared<Node>();
      n->kind = Expr::Kind::Variable;
      n->name = std::string(ident.text);
      n->var_index = static_cast<int>(it - variables_.begin());
      return n;
    }
    if (ident.text == "pi" || ident.text == "e") {
      auto n = std::make_shared<Node>();
      n->kind = Expr::Kind::Number;
      n->number = ident.text == "pi" ? std::numbers::pi : std::numbers::e;
      return n;
    }
    if (find_builtin(ident.text))
      throw ParseError(ident.pos, "function '" + std::string(ident.text) +
                                      "' used without an argument list");
    throw ParseError(ident.pos,
                     "unknown variable '" + std::string(ident.text) + "'");
  }

  NodePtr binary(Expr::BinaryOp op, NodePtr lhs, NodePtr rhs) {
    auto n = std::make_shared<Node>();
    n->kind = Expr::Kind::Binary;
    n->op = op;
    n->children.push_back(std::move(lhs));
    n->children.push_back(std::move(rhs));
    return n;
  }

  Lexer lexer_;
  Token cur_;
  std::vector<std::string> variables_;
};

inline void collect_used(const Expr::Node& n, std::vector<int>& used) {
  if (n.kind == Expr::Kind::Variable) used.push_back(n.var_index);
  for (const auto& c : n.children) collect_used(*c, used);
}

}  // namespace expr_detail

/// Parses source text over the declared variable names.  Identifiers resolve
/// as declared variable, then constant (pi, e), then builtin function.
inline Expr parse(std::string_view src, std::vector<std::string> variables) {
  return expr_detail::Parser(src, std::move(variables)).parse();
}

/// Wraps an expression as a ScalarFn whose positional arguments follow
/// `order`.  Every variable used by the expression must appear in `order`.
inline ScalarFn to_scalar_fn(const Expr& e, std::vector<std::string> order) {
  if (order.empty() || order.size() > 3)
    throw ArityMismatch("argument order must list 1 to 3 variables");
  std::vector<int> slot(e.variables().size(), -1);
  for (std::size_t i = 0; i < e.variables().size(); ++i) {
    const auto it = std::find(order.begin(), order.end(), e.variables()[i]);
    if (it != order.end()) slot[i] = static_cast<int>(it - order.begin());
  }
  std::vector<int> used;
  expr_detail::collect_used(*e.root(), used);
  for (int idx : used)
    if (slot[static_cast<std::size_t>(idx)] < 0)
      throw Error("expression variable '" +
                  e.variables()[static_cast<std::size_t>(idx)] +
                  "' is not in the argument list");
  const int arity = static_cast<int>(order.size());
  return ScalarFn(
      arity,
      [e, slot](std::span<const double> args) {
        std::vector<double> values(slot.size(), 0.0);
        for (std::size_t i = 0; i < slot.size(); ++i)
          if (slot[i] >= 0) values[i] = args[static_cast<std::size_t>(slot[i])];
        return e.eval(values);
      },
      e.to_string());
}

}  // namespace quarterwave
