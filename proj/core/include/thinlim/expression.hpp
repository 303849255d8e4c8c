#pragma once

#include <memory>
#include <span>
#include <string>

namespace thinlim {

/// Compiled arithmetic expression over up to three variables.
///
/// Variables: `x y z`, `z1 z2 zeta` or `xi1 xi2 xi3` name coordinates 0, 1, 2.
/// Operators `+ - * / ^`, unary minus, functions `abs sqrt exp log min max`,
/// constants `pi` and `inf`. Throws ValidationError on malformed input.
class Expression {
 public:
  explicit Expression(const std::string& source);
  ~Expression();
  Expression(const Expression&);
  Expression& operator=(const Expression&);
  Expression(Expression&&) noexcept;
  Expression& operator=(Expression&&) noexcept;

  double operator()(std::span<const double> vars) const;
  const std::string& source() const { return source_; }
  /// Highest variable index referenced, or -1.
  int max_variable() const;

  struct Node;

 private:
  std::string source_;
  std::shared_ptr<const Node> root_;
};

}  // namespace thinlim
