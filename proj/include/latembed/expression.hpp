#pragma once

#include <memory>
#include <string>
#include <vector>

namespace latembed {

/// Value of an expression together with its gradient in the variables u1..ud.
struct Dual {
  double value = 0.0;
  std::vector<double> grad;
};

/// Small arithmetic expression over the variables u1..ud.
///
/// Grammar: numbers, `pi`, variables `u1`..`ud`, binary `+ - * / ^`
/// (`^` is right associative and binds tighter than unary minus), unary
/// `+ -`, parentheses and the functions `sin`, `cos`, `exp`.
/// Evaluation is forward-mode differentiated, so chart Jacobians built from
/// expressions are exact rather than finite-differenced.
class Expression {
public:
  struct Node;

  static Expression parse(const std::string& text, int num_vars);

  double eval(const std::vector<double>& u) const;
  Dual eval_dual(const std::vector<double>& u) const;

  const std::string& source() const { return source_; }
  int num_vars() const { return num_vars_; }

private:
  Expression(std::shared_ptr<const Node> root, std::string source, int num_vars)
      : root_(std::move(root)), source_(std::move(source)), num_vars_(num_vars) {}

  std::shared_ptr<const Node> root_;
  std::string source_;
  int num_vars_ = 0;
};

}  // namespace latembed
