#include "thinlim/expression.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <vector>

#include "thinlim/error.hpp"
#include "thinlim/extended_real.hpp"

namespace thinlim {

struct Expression::Node {
  enum class Kind { Constant, Variable, Neg, Add, Sub, Mul, Div, Pow, Call } kind = Kind::Constant;
  double value = 0.0;
  int var = 0;
  std::string fn;
  std::vector<std::shared_ptr<const Node>> args;

  double eval(std::span<const double> v) const {
    switch (kind) {
      case Kind::Constant: return value;
      case Kind::Variable: return var < static_cast<int>(v.size()) ? v[var] : 0.0;
      case Kind::Neg: return -args[0]->eval(v);
      case Kind::Add: return args[0]->eval(v) + args[1]->eval(v);
      case Kind::Sub: return args[0]->eval(v) - args[1]->eval(v);
      case Kind::Mul: return args[0]->eval(v) * args[1]->eval(v);
      case Kind::Div: return args[0]->eval(v) / args[1]->eval(v);
      case Kind::Pow: {
        const double b = args[0]->eval(v), e = args[1]->eval(v);
        if (e == 2.0) return b * b;
        return std::pow(b, e);
      }
      case Kind::Call: {
        const double a = args[0]->eval(v);
        if (fn == "abs") return std::abs(a);
        if (fn == "sqrt") return std::sqrt(a);
        if (fn == "exp") return std::exp(a);
        if (fn == "log") return std::log(a);
        double r = a;
        for (std::size_t i = 1; i < args.size(); ++i) {
          const double b = args[i]->eval(v);
          r = fn == "min" ? std::min(r, b) : std::max(r, b);
        }
        return r;
      }
    }
    return 0.0;
  }

  int max_var() const {
    int m = kind == Kind::Variable ? var : -1;
    for (const auto& a : args) m = std::max(m, a->max_var());
    return m;
  }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Kind = Expression::Node::Kind;

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  NodePtr parse() {
    NodePtr n = sum();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ValidationError("expression: " + what + " at position " + std::to_string(pos_) + " in '" + s_ + "'");
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

  static NodePtr binary(Kind k, NodePtr a, NodePtr b) {
    auto n = std::make_shared<Expression::Node>();
    n->kind = k;
    n->args = {std::move(a), std::move(b)};
    return n;
  }

  NodePtr sum() {
    NodePtr lhs = product();
    for (;;) {
      if (accept('+')) lhs = binary(Kind::Add, lhs, product());
      else if (accept('-')) lhs = binary(Kind::Sub, lhs, product());
      else return lhs;
    }
  }

  NodePtr product() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*')) lhs = binary(Kind::Mul, lhs, unary());
      else if (accept('/')) lhs = binary(Kind::Div, lhs, unary());
      else return lhs;
    }
  }

  NodePtr unary() {
    if (accept('-')) {
      auto n = std::make_shared<Expression::Node>();
      n->kind = Kind::Neg;
      n->args = {unary()};
      return n;
    }
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return binary(Kind::Pow, base, unary());  // right associative
    return base;
  }

  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    const char c = s_[pos_];
    if (accept('(')) {
      NodePtr n = sum();
      if (!accept(')')) fail("expected ')'");
      return n;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(s_.substr(pos_), &used);
      } catch (const std::exception&) {
        fail("bad number");
      }
      pos_ += used;
      auto n = std::make_shared<Expression::Node>();
      n->value = v;
      return n;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      const std::string id = s_.substr(start, pos_ - start);
      auto n = std::make_shared<Expression::Node>();
      if (id == "x" || id == "z1" || id == "xi1") {
        n->kind = Kind::Variable;
        n->var = 0;
      } else if (id == "y" || id == "z2" || id == "xi2") {
        n->kind = Kind::Variable;
        n->var = 1;
      } else if (id == "z" || id == "zeta" || id == "xi3") {
        n->kind = Kind::Variable;
        n->var = 2;
      } else if (id == "pi") {
        n->value = std::numbers::pi;
      } else if (id == "inf") {
        n->value = kInf;
      } else if (id == "abs" || id == "sqrt" || id == "exp" || id == "log" || id == "min" || id == "max") {
        n->kind = Kind::Call;
        n->fn = id;
        if (!accept('(')) fail("expected '(' after " + id);
        n->args.push_back(sum());
        while (accept(',')) n->args.push_back(sum());
        if (!accept(')')) fail("expected ')'");
        const bool variadic = id == "min" || id == "max";
        if (variadic ? n->args.size() < 2 : n->args.size() != 1) fail("wrong argument count for " + id);
      } else {
        fail("unknown identifier '" + id + "'");
      }
      return n;
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression::Expression(const std::string& source) : source_(source), root_(Parser(source).parse()) {}
Expression::~Expression() = default;
Expression::Expression(const Expression&) = default;
Expression& Expression::operator=(const Expression&) = default;
Expression::Expression(Expression&&) noexcept = default;
Expression& Expression::operator=(Expression&&) noexcept = default;

double Expression::operator()(std::span<const double> vars) const { return root_->eval(vars); }
int Expression::max_variable() const { return root_->max_var(); }

}  // namespace thinlim
