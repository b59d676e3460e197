#ifndef STRAT_EXPR_HPP
#define STRAT_EXPR_HPP

#include "strat/types.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace strat {

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

class EvalError : public Error {
 public:
  using Error::Error;
};

// Immutable scalar expression over named variables.
//
// Grammar (tightest first): ^ with integer exponent, unary -, * /, + -.
// Identifiers [a-z][a-z0-9]*; `sqrt` is the only function. Nodes are stored
// flat in evaluation order (children before parents), so eval and the
// forward-mode derivative are single passes over the node array.
class Expression {
 public:
  enum class Op : std::uint8_t { Const, Var, Add, Sub, Mul, Div, Neg, Pow, Sqrt };

  struct Node {
    Op op;
    double value = 0.0;       // Const
    int var = -1;             // Var
    long long exponent = 0;   // Pow
    int a = -1, b = -1;       // children
  };

  Expression() = default;

  // Free variables collected in order of first appearance.
  static Expression parse(std::string_view text);
  // Fixed variable order; identifiers outside `variables` are a parse error.
  static Expression parse(std::string_view text, std::vector<std::string> variables);

  static Expression constant(double c, std::vector<std::string> variables = {});
  static Expression variable(std::size_t index, std::vector<std::string> variables);
  // intercept + coeffs . vars
  static Expression affine(std::vector<std::string> variables, double intercept, const Vec& coeffs);

  double eval(const Vec& point) const;
  // Forward-mode derivative; exact for the AST (no finite differences).
  Vec gradient(const Vec& point) const;
  double eval_with_gradient(const Vec& point, Vec& grad) const;

  std::string str() const;

  const std::vector<std::string>& variables() const { return vars_; }
  Index arity() const { return static_cast<Index>(vars_.size()); }
  bool empty() const { return nodes_.empty(); }

  bool same_tree(const Expression& other) const;

  // Replace variable i by replacements[i]; all replacements must share one
  // variable list, which becomes the result's list.
  Expression substitute(const std::vector<Expression>& replacements) const;

  const std::vector<Node>& nodes() const { return nodes_; }
  int root() const { return root_; }

 private:
  int append(Node n);
  void check_point(const Vec& point) const;
  std::string print_node(int id, int parent_prec) const;

  std::vector<Node> nodes_;
  int root_ = -1;
  std::vector<std::string> vars_;
};

}  // namespace strat

#endif
