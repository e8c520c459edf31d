#ifndef RIESZ_EXPRESSION_H_
#define RIESZ_EXPRESSION_H_

#include <memory>
#include <string>

#include "riesz/linalg.h"

namespace riesz {

// Scalar expressions in the coordinates of a point of R^n.
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?
//   primary := number | 'x'K (1-based) | 'r' (= |x|) | '(' expr ')'
//            | abs(expr) | log(expr) | max(expr, expr, ...)
//
// log(0) evaluates to -infinity.
class Expression {
 public:
  // Throws std::invalid_argument with the offending position.
  static Expression Parse(const std::string& text);

  double Evaluate(const Vector& x) const;
  // Largest coordinate index referenced (1-based), 0 if none.
  int max_coordinate() const { return max_coordinate_; }
  const std::string& text() const { return text_; }

  struct Node;

 private:
  std::shared_ptr<const Node> root_;
  std::string text_;
  int max_coordinate_ = 0;
};

}  // namespace riesz

#endif  // RIESZ_EXPRESSION_H_
