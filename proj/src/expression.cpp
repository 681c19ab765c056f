#include "stratwave/expression.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <vector>

#include "stratwave/error.hpp"

namespace stratwave {

namespace {

Dual operator+(Dual a, Dual b) { return {a.v + b.v, a.d + b.d}; }
Dual operator-(Dual a, Dual b) { return {a.v - b.v, a.d - b.d}; }
Dual operator*(Dual a, Dual b) { return {a.v * b.v, a.d * b.v + a.v * b.d}; }
Dual operator/(Dual a, Dual b) {
  return {a.v / b.v, (a.d * b.v - a.v * b.d) / (b.v * b.v)};
}

Dual dpow(Dual a, Dual b) {
  const double v = std::pow(a.v, b.v);
  double d = 0.0;
  if (a.d != 0.0) d += b.v * std::pow(a.v, b.v - 1.0) * a.d;
  if (b.d != 0.0) d += v * std::log(a.v) * b.d;
  return {v, d};
}

enum class Op { num, var, add, sub, mul, div, neg, pow, call };

enum class Fn { sin, cos, tan, exp, log, sqrt, tanh, sinh, cosh, abs, pow, min, max };

Dual apply(Fn f, Dual a, Dual b) {
  switch (f) {
    case Fn::sin: return {std::sin(a.v), std::cos(a.v) * a.d};
    case Fn::cos: return {std::cos(a.v), -std::sin(a.v) * a.d};
    case Fn::tan: {
      const double t = std::tan(a.v);
      return {t, (1.0 + t * t) * a.d};
    }
    case Fn::exp: {
      const double e = std::exp(a.v);
      return {e, e * a.d};
    }
    case Fn::log: return {std::log(a.v), a.d / a.v};
    case Fn::sqrt: {
      const double s = std::sqrt(a.v);
      return {s, a.d / (2.0 * s)};
    }
    case Fn::tanh: {
      const double t = std::tanh(a.v);
      return {t, (1.0 - t * t) * a.d};
    }
    case Fn::sinh: return {std::sinh(a.v), std::cosh(a.v) * a.d};
    case Fn::cosh: return {std::cosh(a.v), std::sinh(a.v) * a.d};
    case Fn::abs: return {std::abs(a.v), (a.v < 0.0 ? -a.d : a.d)};
    case Fn::pow: return dpow(a, b);
    case Fn::min: return a.v <= b.v ? a : b;
    case Fn::max: return a.v >= b.v ? a : b;
  }
  return a;
}

int arity(Fn f) { return (f == Fn::pow || f == Fn::min || f == Fn::max) ? 2 : 1; }

bool lookup_fn(const std::string& name, Fn& out) {
  static const std::pair<const char*, Fn> table[] = {
      {"sin", Fn::sin},   {"cos", Fn::cos},   {"tan", Fn::tan},   {"exp", Fn::exp},
      {"log", Fn::log},   {"sqrt", Fn::sqrt}, {"tanh", Fn::tanh}, {"sinh", Fn::sinh},
      {"cosh", Fn::cosh}, {"abs", Fn::abs},   {"pow", Fn::pow},   {"min", Fn::min},
      {"max", Fn::max}};
  for (const auto& [n, f] : table) {
    if (name == n) {
      out = f;
      return true;
    }
  }
  return false;
}

}  // namespace

struct Expression::Node {
  Op op = Op::num;
  double value = 0.0;
  Fn fn = Fn::sin;
  std::shared_ptr<const Node> a, b;

  Dual eval(Dual x) const {
    switch (op) {
      case Op::num: return {value, 0.0};
      case Op::var: return x;
      case Op::add: return a->eval(x) + b->eval(x);
      case Op::sub: return a->eval(x) - b->eval(x);
      case Op::mul: return a->eval(x) * b->eval(x);
      case Op::div: return a->eval(x) / b->eval(x);
      case Op::neg: {
        const Dual r = a->eval(x);
        return {-r.v, -r.d};
      }
      case Op::pow: return dpow(a->eval(x), b->eval(x));
      case Op::call: return apply(fn, a->eval(x), b ? b->eval(x) : Dual{});
    }
    return {};
  }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;

class Parser {
 public:
  Parser(std::string_view s, const std::string& var) : s_(s), var_(var) {}

  NodePtr parse() {
    NodePtr n = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return n;
  }

 private:
  std::string_view s_;
  const std::string& var_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw InvalidInput("expression '" + std::string(s_) + "': " + what + " at column " +
                       std::to_string(pos_ + 1));
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  static NodePtr make(Op op, NodePtr a = {}, NodePtr b = {}, double v = 0.0) {
    auto n = std::make_shared<Expression::Node>();
    n->op = op;
    n->a = std::move(a);
    n->b = std::move(b);
    n->value = v;
    return n;
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+')) lhs = make(Op::add, lhs, term());
      else if (accept('-')) lhs = make(Op::sub, lhs, term());
      else return lhs;
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*')) lhs = make(Op::mul, lhs, unary());
      else if (accept('/')) lhs = make(Op::div, lhs, unary());
      else return lhs;
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(Op::neg, unary());
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return make(Op::pow, base, unary());
    return base;
  }

  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr n = expr();
      if (!accept(')')) fail("expected ')'");
      return n;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return name();
    fail(std::string("unexpected character '") + c + "'");
  }

  NodePtr number() {
    const char* begin = s_.data() + pos_;
    char* end = nullptr;
    const std::string tmp(begin, s_.size() - pos_);
    const double v = std::strtod(tmp.c_str(), &end);
    const std::size_t used = static_cast<std::size_t>(end - tmp.c_str());
    if (used == 0) fail("bad number");
    pos_ += used;
    return make(Op::num, {}, {}, v);
  }

  NodePtr name() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
      ++pos_;
    const std::string id(s_.substr(start, pos_ - start));
    if (id == var_) return make(Op::var);
    if (id == "pi") return make(Op::num, {}, {}, std::numbers::pi);
    if (id == "e") return make(Op::num, {}, {}, std::numbers::e);
    Fn f;
    if (!lookup_fn(id, f)) fail("unknown name '" + id + "'");
    if (!accept('(')) fail("expected '(' after " + id);
    auto n = std::make_shared<Expression::Node>();
    n->op = Op::call;
    n->fn = f;
    n->a = expr();
    if (arity(f) == 2) {
      if (!accept(',')) fail("expected ',' in " + id);
      n->b = expr();
    }
    if (!accept(')')) fail("expected ')' after arguments of " + id);
    return n;
  }
};

}  // namespace

Expression Expression::parse(std::string_view text, std::string variable) {
  Expression e;
  e.variable_ = std::move(variable);
  e.text_ = std::string(text);
  e.root_ = Parser(text, e.variable_).parse();
  return e;
}

double Expression::operator()(double x) const { return root_->eval({x, 0.0}).v; }

Dual Expression::eval(Dual x) const { return root_->eval(x); }

}  // namespace stratwave
