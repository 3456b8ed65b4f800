#include "latembed/expression.hpp"

#include <cctype>
#include <cmath>
#include <numbers>

#include "latembed/error.hpp"

namespace latembed {

namespace {

enum class Op { Const, Var, Neg, Add, Sub, Mul, Div, Pow, Sin, Cos, Exp };

}  // namespace

struct Expression::Node {
  Op op = Op::Const;
  double constant = 0.0;
  int var = -1;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
  bool depends_on_vars = false;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;

NodePtr make_const(double v) {
  auto n = std::make_shared<Expression::Node>();
  n->op = Op::Const;
  n->constant = v;
  return n;
}

NodePtr make_var(int idx) {
  auto n = std::make_shared<Expression::Node>();
  n->op = Op::Var;
  n->var = idx;
  n->depends_on_vars = true;
  return n;
}

NodePtr make_node(Op op, NodePtr lhs, NodePtr rhs = nullptr) {
  auto n = std::make_shared<Expression::Node>();
  n->op = op;
  n->depends_on_vars = lhs->depends_on_vars || (rhs && rhs->depends_on_vars);
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

// Recursive-descent parser:
//   expr   := term (('+'|'-') term)*
//   term   := unary (('*'|'/') unary)*
//   unary  := ('+'|'-') unary | power
//   power  := atom ('^' unary)?
//   atom   := number | 'pi' | var | func '(' expr ')' | '(' expr ')'
class Parser {
public:
  Parser(const std::string& text, int num_vars) : text_(text), num_vars_(num_vars) {}

  NodePtr parse() {
    NodePtr root = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return root;
  }

private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorCode::ParseError,
                "expression \"" + text_ + "\" at offset " + std::to_string(pos_) + ": " + msg);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = make_node(Op::Add, lhs, term());
      } else if (accept('-')) {
        lhs = make_node(Op::Sub, lhs, term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = make_node(Op::Mul, lhs, unary());
      } else if (accept('/')) {
        lhs = make_node(Op::Div, lhs, unary());
      } else {
        return lhs;
      }
    }
  }

  NodePtr unary() {
    if (accept('-')) return make_node(Op::Neg, unary());
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = atom();
    if (accept('^')) return make_node(Op::Pow, base, unary());
    return base;
  }

  NodePtr atom() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (accept('(')) {
      NodePtr inner = expr();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      const std::string ident = text_.substr(start, pos_ - start);
      if (ident == "pi") return make_const(std::numbers::pi);
      if (ident == "sin" || ident == "cos" || ident == "exp") {
        if (!accept('(')) fail("expected '(' after " + ident);
        NodePtr arg = expr();
        if (!accept(')')) fail("expected ')'");
        const Op op = ident == "sin" ? Op::Sin : ident == "cos" ? Op::Cos : Op::Exp;
        return make_node(op, arg);
      }
      if (ident.size() >= 2 && ident[0] == 'u') {
        int idx = 0;
        for (std::size_t i = 1; i < ident.size(); ++i) {
          if (!std::isdigit(static_cast<unsigned char>(ident[i]))) fail("unknown identifier " + ident);
          idx = idx * 10 + (ident[i] - '0');
        }
        if (idx < 1 || idx > num_vars_) {
          fail("variable " + ident + " out of range u1..u" + std::to_string(num_vars_));
        }
        return make_var(idx - 1);
      }
      fail("unknown identifier " + ident);
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  NodePtr number() {
    const char* begin = text_.c_str() + pos_;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) fail("malformed number");
    pos_ += static_cast<std::size_t>(end - begin);
    return make_const(v);
  }

  const std::string& text_;
  int num_vars_;
  std::size_t pos_ = 0;
};

double eval_value(const Expression::Node& n, const std::vector<double>& u) {
  switch (n.op) {
    case Op::Const: return n.constant;
    case Op::Var: return u[static_cast<std::size_t>(n.var)];
    case Op::Neg: return -eval_value(*n.lhs, u);
    case Op::Add: return eval_value(*n.lhs, u) + eval_value(*n.rhs, u);
    case Op::Sub: return eval_value(*n.lhs, u) - eval_value(*n.rhs, u);
    case Op::Mul: return eval_value(*n.lhs, u) * eval_value(*n.rhs, u);
    case Op::Div: return eval_value(*n.lhs, u) / eval_value(*n.rhs, u);
    case Op::Pow: return std::pow(eval_value(*n.lhs, u), eval_value(*n.rhs, u));
    case Op::Sin: return std::sin(eval_value(*n.lhs, u));
    case Op::Cos: return std::cos(eval_value(*n.lhs, u));
    case Op::Exp: return std::exp(eval_value(*n.lhs, u));
  }
  return 0.0;
}

void axpy(std::vector<double>& out, double a, const std::vector<double>& x) {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += a * x[i];
}

Dual eval_dual_node(const Expression::Node& n, const std::vector<double>& u) {
  const std::size_t d = u.size();
  Dual r;
  r.grad.assign(d, 0.0);
  switch (n.op) {
    case Op::Const:
      r.value = n.constant;
      return r;
    case Op::Var:
      r.value = u[static_cast<std::size_t>(n.var)];
      r.grad[static_cast<std::size_t>(n.var)] = 1.0;
      return r;
    default:
      break;
  }

  Dual a = eval_dual_node(*n.lhs, u);
  switch (n.op) {
    case Op::Neg:
      r.value = -a.value;
      axpy(r.grad, -1.0, a.grad);
      return r;
    case Op::Sin:
      r.value = std::sin(a.value);
      axpy(r.grad, std::cos(a.value), a.grad);
      return r;
    case Op::Cos:
      r.value = std::cos(a.value);
      axpy(r.grad, -std::sin(a.value), a.grad);
      return r;
    case Op::Exp:
      r.value = std::exp(a.value);
      axpy(r.grad, r.value, a.grad);
      return r;
    default:
      break;
  }

  Dual b = eval_dual_node(*n.rhs, u);
  switch (n.op) {
    case Op::Add:
      r.value = a.value + b.value;
      axpy(r.grad, 1.0, a.grad);
      axpy(r.grad, 1.0, b.grad);
      break;
    case Op::Sub:
      r.value = a.value - b.value;
      axpy(r.grad, 1.0, a.grad);
      axpy(r.grad, -1.0, b.grad);
      break;
    case Op::Mul:
      r.value = a.value * b.value;
      axpy(r.grad, b.value, a.grad);
      axpy(r.grad, a.value, b.grad);
      break;
    case Op::Div:
      r.value = a.value / b.value;
      axpy(r.grad, 1.0 / b.value, a.grad);
      axpy(r.grad, -a.value / (b.value * b.value), b.grad);
      break;
    case Op::Pow:
      r.value = std::pow(a.value, b.value);
      if (!n.rhs->depends_on_vars) {
        // constant exponent: valid for negative bases with integer powers
        if (b.value != 0.0) axpy(r.grad, b.value * std::pow(a.value, b.value - 1.0), a.grad);
      } else {
        axpy(r.grad, b.value * std::pow(a.value, b.value - 1.0), a.grad);
        axpy(r.grad, r.value * std::log(a.value), b.grad);
      }
      break;
    default:
      break;
  }
  return r;
}

}  // namespace

Expression Expression::parse(const std::string& text, int num_vars) {
  if (num_vars < 1) throw Error(ErrorCode::InvalidArgument, "expression needs at least one variable");
  Parser parser(text, num_vars);
  return Expression(parser.parse(), text, num_vars);
}

double Expression::eval(const std::vector<double>& u) const { return eval_value(*root_, u); }

Dual Expression::eval_dual(const std::vector<double>& u) const { return eval_dual_node(*root_, u); }

}  // namespace latembed
