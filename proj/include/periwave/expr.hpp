#pragma once

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

namespace periwave::expr {

// Variables of the expression language. Coefficient functions are maps of
// (x, t) and optionally a perturbation parameter eps; nothing else is bound.
enum class Var { X, T, Eps };

enum class BinOp { Add, Sub, Mul, Div, Pow };
enum class Func { Sin, Cos, Exp, Log, Tanh, Sqrt };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  enum class Kind { Constant, NamedConst, Variable, Binary, Negate, Call };
  Kind kind = Kind::Constant;
  double value = 0.0;  // Constant and NamedConst (pi)
  Var var = Var::X;
  BinOp op = BinOp::Add;
  Func fn = Func::Sin;
  NodePtr lhs;  // Binary: left operand; Negate/Call: the single child
  NodePtr rhs;  // Binary: right operand
  std::size_t src = 0;  // byte offset into the source text, 0 for synthesized nodes
};

class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& msg, std::size_t offset);
  std::size_t offset() const { return offset_; }

private:
  std::size_t offset_;
};

// Domain failure during evaluation (log of a non-positive value, sqrt of a
// negative value, division by zero, fractional power of a negative base).
class EvalError : public std::runtime_error {
public:
  EvalError(const std::string& msg, std::string subexpr);
  const std::string& subexpr() const { return subexpr_; }

private:
  std::string subexpr_;
};

struct Env {
  double x = 0.0;
  double t = 0.0;
  double eps = 0.0;
};

class Program;

// Immutable expression tree with a compiled evaluation program attached.
// Copies share the tree; evaluation is reentrant and thread-safe.
class Expr {
public:
  Expr();  // the constant 0

  static Expr parse(std::string_view text);
  // Extra named constants (beyond pi) resolved at parse time, e.g. {"T", 1.0}.
  static Expr parse(std::string_view text, const std::map<std::string, double>& named);

  static Expr constant(double v);
  static Expr variable(Var v);
  static Expr call(Func f, const Expr& arg);
  static Expr pow(const Expr& base, const Expr& exponent);

  double eval(const Env& env) const;
  double operator()(double x, double t, double eps = 0.0) const {
    return eval(Env{x, t, eps});
  }

  Expr derivative(Var v) const;
  Expr substitute(Var v, const Expr& replacement) const;
  Expr substitute(Var v, double value) const;

  std::string to_string() const;
  bool same_structure(const Expr& other) const;
  // True if the tree is a plain constant; writes the value when requested.
  bool is_constant(double* value = nullptr) const;
  bool references(Var v) const;

  const Node* root() const { return root_.get(); }

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a);

private:
  explicit Expr(NodePtr n);

  NodePtr root_;
  std::shared_ptr<const Program> prog_;
};

std::string to_string(const Node& n);

}  // namespace periwave::expr
