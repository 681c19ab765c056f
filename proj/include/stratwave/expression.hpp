#pragma once

#include <memory>
#include <string>
#include <string_view>

namespace stratwave {

// Forward-mode dual number: value and first derivative.
struct Dual {
  double v = 0.0;
  double d = 0.0;
};

// Small arithmetic grammar in one variable:
//   expr   := term (('+'|'-') term)*
//   term   := unary (('*'|'/') unary)*
//   unary  := ('+'|'-') unary | power
//   power  := primary ('^' unary)?
//   primary:= number | name | func '(' expr [',' expr] ')' | '(' expr ')'
// Functions: sin cos tan exp log sqrt tanh sinh cosh abs pow min max.
// Constants: pi, e.
class Expression {
 public:
  struct Node;

  static Expression parse(std::string_view text, std::string variable = "y");

  double operator()(double x) const;
  Dual eval(Dual x) const;
  double derivative(double x) const { return eval({x, 1.0}).d; }

  const std::string& text() const { return text_; }
  const std::string& variable() const { return variable_; }

 private:
  std::shared_ptr<const Node> root_;
  std::string text_;
  std::string variable_;
};

}  // namespace stratwave
