// Arithmetic expressions for user-defined vector fields.
//
// Grammar (round-trips through to_string):
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := ('-'|'+') factor | power
//   power  := atom ('^' factor)?          (right associative)
//   atom   := number | 'x'<k> | 'z'<k> | '(' expr ')'
// x1..xn are current-state components, z1..zn components of the delayed
// sample bound to the expression's equation.

#ifndef MONOCERT_EXPR_HPP
#define MONOCERT_EXPR_HPP

#include <memory>
#include <span>
#include <string>

#include "monocert/vec.hpp"

namespace monocert {

class Expr {
 public:
  static Expr parse(const std::string& text);

  double eval(std::span<const double> x, std::span<const double> z) const;

  // Canonical fully parenthesized form; parse(to_string(e)) == e structurally.
  std::string to_string() const;

  // Highest variable index referenced (0 when none).
  std::size_t max_x_index() const;
  std::size_t max_z_index() const;

  Expr(Expr&&) noexcept;
  Expr& operator=(Expr&&) noexcept;
  Expr(const Expr& other);
  Expr& operator=(const Expr& other);
  ~Expr();

  struct Node;

 private:
  explicit Expr(std::unique_ptr<Node> root);
  std::unique_ptr<Node> root_;
};

}  // namespace monocert

#endif
