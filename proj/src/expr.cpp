#include "periwave/expr.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <vector>

namespace periwave::expr {

namespace {

NodePtr make_node(Node n) { return std::make_shared<const Node>(std::move(n)); }

NodePtr const_node(double v, std::size_t src = 0) {
  Node n;
  n.kind = Node::Kind::Constant;
  n.value = v;
  n.src = src;
  return make_node(n);
}

NodePtr pi_node(std::size_t src = 0) {
  Node n;
  n.kind = Node::Kind::NamedConst;
  n.value = M_PI;
  n.src = src;
  return make_node(n);
}

NodePtr var_node(Var v, std::size_t src = 0) {
  Node n;
  n.kind = Node::Kind::Variable;
  n.var = v;
  n.src = src;
  return make_node(n);
}

NodePtr binary_node(BinOp op, NodePtr a, NodePtr b, std::size_t src = 0) {
  Node n;
  n.kind = Node::Kind::Binary;
  n.op = op;
  n.lhs = std::move(a);
  n.rhs = std::move(b);
  n.src = src;
  return make_node(n);
}

NodePtr neg_node(NodePtr a, std::size_t src = 0) {
  Node n;
  n.kind = Node::Kind::Negate;
  n.lhs = std::move(a);
  n.src = src;
  return make_node(n);
}

NodePtr call_node(Func f, NodePtr a, std::size_t src = 0) {
  Node n;
  n.kind = Node::Kind::Call;
  n.fn = f;
  n.lhs = std::move(a);
  n.src = src;
  return make_node(n);
}

bool node_is_const(const NodePtr& n, double* v = nullptr) {
  if (n->kind != Node::Kind::Constant) return false;
  if (v) *v = n->value;
  return true;
}

// Builders with light constant folding, used by derivative() and by the
// manufactured-solution construction. The parser never folds, so printing a
// parsed tree and re-parsing it reproduces the structure exactly.
NodePtr fold_add(NodePtr a, NodePtr b) {
  double ca, cb;
  if (node_is_const(a, &ca) && ca == 0.0) return b;
  if (node_is_const(b, &cb) && cb == 0.0) return a;
  if (node_is_const(a, &ca) && node_is_const(b, &cb)) return const_node(ca + cb);
  return binary_node(BinOp::Add, std::move(a), std::move(b));
}

NodePtr fold_neg(NodePtr a) {
  double ca;
  if (node_is_const(a, &ca)) return const_node(-ca);
  if (a->kind == Node::Kind::Negate) return a->lhs;
  return neg_node(std::move(a));
}

NodePtr fold_sub(NodePtr a, NodePtr b) {
  double ca, cb;
  if (node_is_const(b, &cb) && cb == 0.0) return a;
  if (node_is_const(a, &ca) && node_is_const(b, &cb)) return const_node(ca - cb);
  if (node_is_const(a, &ca) && ca == 0.0) return fold_neg(std::move(b));
  return binary_node(BinOp::Sub, std::move(a), std::move(b));
}

NodePtr fold_mul(NodePtr a, NodePtr b) {
  double ca, cb;
  const bool a_const = node_is_const(a, &ca);
  const bool b_const = node_is_const(b, &cb);
  if (a_const && ca == 0.0) return a;
  if (b_const && cb == 0.0) return b;
  if (a_const && ca == 1.0) return b;
  if (b_const && cb == 1.0) return a;
  if (a_const && b_const) return const_node(ca * cb);
  return binary_node(BinOp::Mul, std::move(a), std::move(b));
}

NodePtr fold_div(NodePtr a, NodePtr b) {
  double ca, cb;
  if (node_is_const(a, &ca) && ca == 0.0) return a;
  if (node_is_const(b, &cb) && cb == 1.0) return a;
  if (node_is_const(a, &ca) && node_is_const(b, &cb) && cb != 0.0)
    return const_node(ca / cb);
  return binary_node(BinOp::Div, std::move(a), std::move(b));
}

NodePtr fold_pow(NodePtr a, NodePtr b) {
  double cb;
  if (node_is_const(b, &cb)) {
    if (cb == 1.0) return a;
    if (cb == 0.0) return const_node(1.0);
  }
  return binary_node(BinOp::Pow, std::move(a), std::move(b));
}

// ---------------------------------------------------------------------------
// Lexer / Pratt parser
// ---------------------------------------------------------------------------

struct Token {
  enum class Type { Num, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma, End };
  Type type = Type::End;
  double num = 0.0;
  std::string_view text;
  std::size_t pos = 0;
};

class Lexer {
public:
  explicit Lexer(std::string_view s) : s_(s) { advance(); }

  const Token& peek() const { return cur_; }
  Token next() {
    Token t = cur_;
    advance();
    return t;
  }

private:
  void advance() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    cur_ = Token{};
    cur_.pos = i_;
    if (i_ >= s_.size()) {
      cur_.type = Token::Type::End;
      return;
    }
    const char c = s_[i_];
    switch (c) {
      case '+': cur_.type = Token::Type::Plus; ++i_; return;
      case '-': cur_.type = Token::Type::Minus; ++i_; return;
      case '*': cur_.type = Token::Type::Star; ++i_; return;
      case '/': cur_.type = Token::Type::Slash; ++i_; return;
      case '^': cur_.type = Token::Type::Caret; ++i_; return;
      case '(': cur_.type = Token::Type::LParen; ++i_; return;
      case ')': cur_.type = Token::Type::RParen; ++i_; return;
      case ',': cur_.type = Token::Type::Comma; ++i_; return;
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = s_.data() + i_;
      const char* end = s_.data() + s_.size();
      double value = 0.0;
      auto res = std::from_chars(begin, end, value);
      if (res.ec != std::errc{}) throw ParseError("malformed number", i_);
      cur_.type = Token::Type::Num;
      cur_.num = value;
      cur_.text = std::string_view(begin, static_cast<std::size_t>(res.ptr - begin));
      i_ += cur_.text.size();
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i_;
      while (j < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[j])) || s_[j] == '_'))
        ++j;
      cur_.type = Token::Type::Ident;
      cur_.text = s_.substr(i_, j - i_);
      i_ = j;
      return;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", i_);
  }

  std::string_view s_;
  std::size_t i_ = 0;
  Token cur_;
};

// Binding powers: + - (10) < * / (20) < unary - (30) < ^ (41, right-assoc 40).
constexpr int kAddBp = 10;
constexpr int kMulBp = 20;
constexpr int kNegBp = 30;
constexpr int kPowBp = 41;

class Parser {
public:
  Parser(std::string_view s, const std::map<std::string, double>* named)
      : lex_(s), named_(named) {}

  NodePtr parse() {
    NodePtr e = parse_bp(0);
    const Token& t = lex_.peek();
    if (t.type != Token::Type::End)
      throw ParseError("unexpected trailing input", t.pos);
    return e;
  }

private:
  NodePtr parse_bp(int min_bp) {
    NodePtr lhs = parse_prefix();
    for (;;) {
      const Token& t = lex_.peek();
      BinOp op;
      int lbp, rbp;
      switch (t.type) {
        case Token::Type::Plus: op = BinOp::Add; lbp = kAddBp; rbp = kAddBp + 1; break;
        case Token::Type::Minus: op = BinOp::Sub; lbp = kAddBp; rbp = kAddBp + 1; break;
        case Token::Type::Star: op = BinOp::Mul; lbp = kMulBp; rbp = kMulBp + 1; break;
        case Token::Type::Slash: op = BinOp::Div; lbp = kMulBp; rbp = kMulBp + 1; break;
        case Token::Type::Caret: op = BinOp::Pow; lbp = kPowBp; rbp = kPowBp - 1; break;
        default: return lhs;
      }
      if (lbp < min_bp) return lhs;
      const std::size_t pos = lex_.next().pos;
      NodePtr rhs = parse_bp(rbp);
      lhs = binary_node(op, std::move(lhs), std::move(rhs), pos);
    }
  }

  NodePtr parse_prefix() {
    Token t = lex_.next();
    switch (t.type) {
      case Token::Type::Num:
        return const_node(t.num, t.pos);
      case Token::Type::Minus:
        return neg_node(parse_bp(kNegBp), t.pos);
      case Token::Type::LParen: {
        NodePtr e = parse_bp(0);
        Token close = lex_.next();
        if (close.type != Token::Type::RParen)
          throw ParseError("expected ')'", close.pos);
        return e;
      }
      case Token::Type::Ident:
        return parse_ident(t);
      case Token::Type::End:
        throw ParseError("unexpected end of expression", t.pos);
      default:
        throw ParseError("unexpected token", t.pos);
    }
  }

  NodePtr parse_ident(const Token& t) {
    static const std::map<std::string_view, Func> kFuncs = {
        {"sin", Func::Sin}, {"cos", Func::Cos},   {"exp", Func::Exp},
        {"log", Func::Log}, {"tanh", Func::Tanh}, {"sqrt", Func::Sqrt}};
    if (auto it = kFuncs.find(t.text); it != kFuncs.end()) {
      Token open = lex_.next();
      if (open.type != Token::Type::LParen)
        throw ParseError("expected '(' after function name '" + std::string(t.text) + "'",
                         open.pos);
      NodePtr arg = parse_bp(0);
      Token close = lex_.next();
      if (close.type == Token::Type::Comma)
        throw ParseError("arity mismatch: '" + std::string(t.text) +
                             "' takes exactly one argument",
                         close.pos);
      if (close.type != Token::Type::RParen)
        throw ParseError("expected ')'", close.pos);
      return call_node(it->second, std::move(arg), t.pos);
    }
    if (t.text == "x") return var_node(Var::X, t.pos);
    if (t.text == "t") return var_node(Var::T, t.pos);
    if (t.text == "eps") return var_node(Var::Eps, t.pos);
    if (t.text == "pi") return pi_node(t.pos);
    if (named_) {
      if (auto it = named_->find(std::string(t.text)); it != named_->end())
        return const_node(it->second, t.pos);
    }
    throw ParseError("unknown identifier '" + std::string(t.text) + "'", t.pos);
  }

  Lexer lex_;
  const std::map<std::string, double>* named_;
};

// ---------------------------------------------------------------------------
// Printer
// ---------------------------------------------------------------------------

enum Prec { kPrecAdd = 1, kPrecMul = 2, kPrecNeg = 3, kPrecPow = 4, kPrecAtom = 5 };

int node_prec(const Node& n) {
  switch (n.kind) {
    case Node::Kind::Binary:
      switch (n.op) {
        case BinOp::Add:
        case BinOp::Sub: return kPrecAdd;
        case BinOp::Mul:
        case BinOp::Div: return kPrecMul;
        case BinOp::Pow: return kPrecPow;
      }
      return kPrecAtom;
    case Node::Kind::Negate: return kPrecNeg;
    case Node::Kind::Constant:
      return n.value < 0.0 ? kPrecNeg : kPrecAtom;
    default: return kPrecAtom;
  }
}

std::string format_double(double v) {
  std::array<char, 64> buf;
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

const char* func_name(Func f) {
  switch (f) {
    case Func::Sin: return "sin";
    case Func::Cos: return "cos";
    case Func::Exp: return "exp";
    case Func::Log: return "log";
    case Func::Tanh: return "tanh";
    case Func::Sqrt: return "sqrt";
  }
  return "?";
}

void print_node(const Node& n, int min_prec, std::string& out) {
  const int prec = node_prec(n);
  const bool parens = prec < min_prec;
  if (parens) out += '(';
  switch (n.kind) {
    case Node::Kind::Constant: out += format_double(n.value); break;
    case Node::Kind::NamedConst: out += "pi"; break;
    case Node::Kind::Variable:
      out += (n.var == Var::X ? "x" : n.var == Var::T ? "t" : "eps");
      break;
    case Node::Kind::Negate:
      out += '-';
      print_node(*n.lhs, kPrecNeg, out);
      break;
    case Node::Kind::Call:
      out += func_name(n.fn);
      out += '(';
      print_node(*n.lhs, 0, out);
      out += ')';
      break;
    case Node::Kind::Binary: {
      const char* sym = nullptr;
      int lp = prec, rp = prec + 1;
      switch (n.op) {
        case BinOp::Add: sym = "+"; break;
        case BinOp::Sub: sym = "-"; break;
        case BinOp::Mul: sym = "*"; break;
        case BinOp::Div: sym = "/"; break;
        case BinOp::Pow:
          sym = "^";
          lp = prec + 1;  // right-associative
          rp = prec;
          break;
      }
      print_node(*n.lhs, lp, out);
      out += sym;
      print_node(*n.rhs, rp, out);
      break;
    }
  }
  if (parens) out += ')';
}

bool same_node(const Node& a, const Node& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Node::Kind::Constant: return a.value == b.value;
    case Node::Kind::NamedConst: return true;
    case Node::Kind::Variable: return a.var == b.var;
    case Node::Kind::Negate: return same_node(*a.lhs, *b.lhs);
    case Node::Kind::Call: return a.fn == b.fn && same_node(*a.lhs, *b.lhs);
    case Node::Kind::Binary:
      return a.op == b.op && same_node(*a.lhs, *b.lhs) && same_node(*a.rhs, *b.rhs);
  }
  return false;
}

}  // namespace

std::string to_string(const Node& n) {
  std::string out;
  print_node(n, 0, out);
  return out;
}

// ---------------------------------------------------------------------------
// Compiled evaluation program
// ---------------------------------------------------------------------------

class Program {
public:
  enum class Op : std::uint8_t {
    PushConst, PushX, PushT, PushEps,
    Add, Sub, Mul, Div, Pow, Neg,
    Sin, Cos, Exp, Log, Tanh, Sqrt
  };

  struct Instr {
    Op op;
    double value = 0.0;
    const Node* node = nullptr;  // for domain-error reporting
  };

  explicit Program(const Node& root) {
    emit(root);
    int depth = 0;
    for (const Instr& in : code_) {
      switch (in.op) {
        case Op::PushConst: case Op::PushX: case Op::PushT: case Op::PushEps:
          ++depth;
          break;
        case Op::Add: case Op::Sub: case Op::Mul: case Op::Div: case Op::Pow:
          --depth;
          break;
        default: break;
      }
      max_depth_ = std::max(max_depth_, depth);
    }
  }

  double run(const Env& env) const {
    std::vector<double> heap;
    double local[64] = {};
    double* stack = local;
    if (max_depth_ > 64) {
      heap.resize(static_cast<std::size_t>(max_depth_));
      stack = heap.data();
    }
    int sp = 0;
    for (const Instr& in : code_) {
      switch (in.op) {
        case Op::PushConst: stack[sp++] = in.value; break;
        case Op::PushX: stack[sp++] = env.x; break;
        case Op::PushT: stack[sp++] = env.t; break;
        case Op::PushEps: stack[sp++] = env.eps; break;
        case Op::Add: --sp; stack[sp - 1] += stack[sp]; break;
        case Op::Sub: --sp; stack[sp - 1] -= stack[sp]; break;
        case Op::Mul: --sp; stack[sp - 1] *= stack[sp]; break;
        case Op::Div: {
          --sp;
          if (stack[sp] == 0.0)
            throw EvalError("division by zero", to_string(*in.node));
          stack[sp - 1] /= stack[sp];
          break;
        }
        case Op::Pow: {
          --sp;
          const double base = stack[sp - 1];
          const double e = stack[sp];
          if (base < 0.0 && std::nearbyint(e) != e)
            throw EvalError("fractional power of negative base", to_string(*in.node));
          if (base == 0.0 && e < 0.0)
            throw EvalError("zero raised to negative power", to_string(*in.node));
          stack[sp - 1] = std::pow(base, e);
          break;
        }
        case Op::Neg: stack[sp - 1] = -stack[sp - 1]; break;
        case Op::Sin: stack[sp - 1] = std::sin(stack[sp - 1]); break;
        case Op::Cos: stack[sp - 1] = std::cos(stack[sp - 1]); break;
        case Op::Exp: stack[sp - 1] = std::exp(stack[sp - 1]); break;
        case Op::Log:
          if (stack[sp - 1] <= 0.0)
            throw EvalError("log of non-positive value", to_string(*in.node));
          stack[sp - 1] = std::log(stack[sp - 1]);
          break;
        case Op::Tanh: stack[sp - 1] = std::tanh(stack[sp - 1]); break;
        case Op::Sqrt:
          if (stack[sp - 1] < 0.0)
            throw EvalError("sqrt of negative value", to_string(*in.node));
          stack[sp - 1] = std::sqrt(stack[sp - 1]);
          break;
      }
    }
    return stack[0];
  }

private:
  void emit(const Node& n) {
    switch (n.kind) {
      case Node::Kind::Constant:
      case Node::Kind::NamedConst:
        code_.push_back({Op::PushConst, n.value, &n});
        break;
      case Node::Kind::Variable:
        code_.push_back({n.var == Var::X   ? Op::PushX
                         : n.var == Var::T ? Op::PushT
                                           : Op::PushEps,
                         0.0, &n});
        break;
      case Node::Kind::Negate:
        emit(*n.lhs);
        code_.push_back({Op::Neg, 0.0, &n});
        break;
      case Node::Kind::Call: {
        emit(*n.lhs);
        Op op = Op::Sin;
        switch (n.fn) {
          case Func::Sin: op = Op::Sin; break;
          case Func::Cos: op = Op::Cos; break;
          case Func::Exp: op = Op::Exp; break;
          case Func::Log: op = Op::Log; break;
          case Func::Tanh: op = Op::Tanh; break;
          case Func::Sqrt: op = Op::Sqrt; break;
        }
        code_.push_back({op, 0.0, &n});
        break;
      }
      case Node::Kind::Binary: {
        emit(*n.lhs);
        emit(*n.rhs);
        Op op = Op::Add;
        switch (n.op) {
          case BinOp::Add: op = Op::Add; break;
          case BinOp::Sub: op = Op::Sub; break;
          case BinOp::Mul: op = Op::Mul; break;
          case BinOp::Div: op = Op::Div; break;
          case BinOp::Pow: op = Op::Pow; break;
        }
        code_.push_back({op, 0.0, &n});
        break;
      }
    }
  }

  std::vector<Instr> code_;
  int max_depth_ = 0;
};

// ---------------------------------------------------------------------------
// Expr
// ---------------------------------------------------------------------------

ParseError::ParseError(const std::string& msg, std::size_t offset)
    : std::runtime_error(msg + " (byte offset " + std::to_string(offset) + ")"),
      offset_(offset) {}

EvalError::EvalError(const std::string& msg, std::string subexpr)
    : std::runtime_error(msg + " in '" + subexpr + "'"), subexpr_(std::move(subexpr)) {}

Expr::Expr() : Expr(const_node(0.0)) {}

Expr::Expr(NodePtr n)
    : root_(std::move(n)), prog_(std::make_shared<const Program>(*root_)) {}

Expr Expr::parse(std::string_view text) { return parse(text, {}); }

Expr Expr::parse(std::string_view text, const std::map<std::string, double>& named) {
  if (text.find_first_not_of(" \t\r\n") == std::string_view::npos)
    throw ParseError("empty expression", 0);
  Parser p(text, &named);
  return Expr(p.parse());
}

Expr Expr::constant(double v) { return Expr(const_node(v)); }
Expr Expr::variable(Var v) { return Expr(var_node(v)); }
Expr Expr::call(Func f, const Expr& arg) { return Expr(call_node(f, arg.root_)); }
Expr Expr::pow(const Expr& base, const Expr& exponent) {
  return Expr(fold_pow(base.root_, exponent.root_));
}

double Expr::eval(const Env& env) const { return prog_->run(env); }

namespace {

NodePtr diff_node(const NodePtr& n, Var v);

NodePtr diff_call(const NodePtr& n, Var v) {
  const NodePtr& u = n->lhs;
  NodePtr du = diff_node(u, v);
  switch (n->fn) {
    case Func::Sin: return fold_mul(call_node(Func::Cos, u), du);
    case Func::Cos: return fold_neg(fold_mul(call_node(Func::Sin, u), du));
    case Func::Exp: return fold_mul(call_node(Func::Exp, u), du);
    case Func::Log: return fold_div(du, u);
    case Func::Tanh: {
      NodePtr th = call_node(Func::Tanh, u);
      NodePtr one_minus = fold_sub(const_node(1.0), binary_node(BinOp::Pow, th, const_node(2.0)));
      return fold_mul(one_minus, du);
    }
    case Func::Sqrt:
      return fold_div(du, fold_mul(const_node(2.0), call_node(Func::Sqrt, u)));
  }
  return const_node(0.0);
}

NodePtr diff_node(const NodePtr& n, Var v) {
  switch (n->kind) {
    case Node::Kind::Constant:
    case Node::Kind::NamedConst:
      return const_node(0.0);
    case Node::Kind::Variable:
      return const_node(n->var == v ? 1.0 : 0.0);
    case Node::Kind::Negate:
      return fold_neg(diff_node(n->lhs, v));
    case Node::Kind::Call:
      return diff_call(n, v);
    case Node::Kind::Binary: {
      const NodePtr& a = n->lhs;
      const NodePtr& b = n->rhs;
      switch (n->op) {
        case BinOp::Add: return fold_add(diff_node(a, v), diff_node(b, v));
        case BinOp::Sub: return fold_sub(diff_node(a, v), diff_node(b, v));
        case BinOp::Mul:
          return fold_add(fold_mul(diff_node(a, v), b), fold_mul(a, diff_node(b, v)));
        case BinOp::Div:
          return fold_div(
              fold_sub(fold_mul(diff_node(a, v), b), fold_mul(a, diff_node(b, v))),
              binary_node(BinOp::Pow, b, const_node(2.0)));
        case BinOp::Pow: {
          double c;
          NodePtr da = diff_node(a, v);
          if (node_is_const(b, &c)) {
            // d/dv a^c = c a^(c-1) a'
            return fold_mul(fold_mul(b, fold_pow(a, const_node(c - 1.0))), da);
          }
          // d/dv a^b = a^b (b' log a + b a'/a)
          NodePtr db = diff_node(b, v);
          NodePtr term = fold_add(fold_mul(db, call_node(Func::Log, a)),
                                  fold_mul(b, fold_div(da, a)));
          return fold_mul(binary_node(BinOp::Pow, a, b), term);
        }
      }
      break;
    }
  }
  return const_node(0.0);
}

NodePtr subst_node(const NodePtr& n, Var v, const NodePtr& repl) {
  switch (n->kind) {
    case Node::Kind::Constant:
    case Node::Kind::NamedConst:
      return n;
    case Node::Kind::Variable:
      return n->var == v ? repl : n;
    case Node::Kind::Negate:
      return neg_node(subst_node(n->lhs, v, repl), n->src);
    case Node::Kind::Call:
      return call_node(n->fn, subst_node(n->lhs, v, repl), n->src);
    case Node::Kind::Binary:
      return binary_node(n->op, subst_node(n->lhs, v, repl), subst_node(n->rhs, v, repl),
                         n->src);
  }
  return n;
}

}  // namespace

Expr Expr::derivative(Var v) const { return Expr(diff_node(root_, v)); }

Expr Expr::substitute(Var v, const Expr& replacement) const {
  return Expr(subst_node(root_, v, replacement.root_));
}

Expr Expr::substitute(Var v, double value) const {
  return substitute(v, Expr::constant(value));
}

std::string Expr::to_string() const { return expr::to_string(*root_); }

bool Expr::same_structure(const Expr& other) const {
  return same_node(*root_, *other.root_);
}

namespace {

bool node_references(const Node& n, Var v) {
  switch (n.kind) {
    case Node::Kind::Variable: return n.var == v;
    case Node::Kind::Negate:
    case Node::Kind::Call: return node_references(*n.lhs, v);
    case Node::Kind::Binary:
      return node_references(*n.lhs, v) || node_references(*n.rhs, v);
    default: return false;
  }
}

}  // namespace

bool Expr::references(Var v) const { return node_references(*root_, v); }

bool Expr::is_constant(double* value) const {
  if (root_->kind == Node::Kind::Constant || root_->kind == Node::Kind::NamedConst) {
    if (value) *value = root_->value;
    return true;
  }
  return false;
}

Expr operator+(const Expr& a, const Expr& b) { return Expr(fold_add(a.root_, b.root_)); }
Expr operator-(const Expr& a, const Expr& b) { return Expr(fold_sub(a.root_, b.root_)); }
Expr operator*(const Expr& a, const Expr& b) { return Expr(fold_mul(a.root_, b.root_)); }
Expr operator/(const Expr& a, const Expr& b) { return Expr(fold_div(a.root_, b.root_)); }
Expr operator-(const Expr& a) { return Expr(fold_neg(a.root_)); }

}  // namespace periwave::expr
