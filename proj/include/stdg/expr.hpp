#pragma once

#include <memory>
#include <string>

namespace stdg {

// Scalar expression in the variables x, y, t. Supports + - * / ^, unary
// minus, parentheses, the constant pi, and the functions sin cos tan exp log
// sqrt abs. Used for `custom` problem data; derivatives are symbolic so that
// exact gradients of custom reference solutions are available.
class Expr {
 public:
  Expr() = default;

  static Expr parse(const std::string& text);  // throws ParseError

  double operator()(double x, double y, double t) const;
  Expr diff(char var) const;  // var in {'x','y','t'}

  bool valid() const { return root_ != nullptr; }
  std::string str() const;

  struct Node;

 private:
  explicit Expr(std::shared_ptr<const Node> root) : root_(std::move(root)) {}
  std::shared_ptr<const Node> root_;
};

}  // namespace stdg
