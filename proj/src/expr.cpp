#include "strat/expr.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>

namespace strat {

namespace {

bool ident_start(char c) { return c >= 'a' && c <= 'z'; }
bool ident_char(char c) { return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9'); }
bool digit(char c) { return c >= '0' && c <= '9'; }

// x^e by binary exponentiation; exact product chains keep AD consistent
// with eval to the last ulp ordering.
double ipow(double x, long long e) {
  if (e == 0) return 1.0;
  bool inv = e < 0;
  unsigned long long k = inv ? static_cast<unsigned long long>(-(e + 1)) + 1ULL
                             : static_cast<unsigned long long>(e);
  double base = x, acc = 1.0;
  while (k) {
    if (k & 1ULL) acc *= base;
    base *= base;
    k >>= 1;
  }
  if (inv) {
    if (acc == 0.0) throw EvalError("division by zero in negative power");
    return 1.0 / acc;
  }
  return acc;
}

class Parser {
 public:
  Parser(std::string_view text, Expression::Node* /*unused*/) : text_(text) {}

  std::string_view text_;
  std::size_t pos_ = 0;
  std::vector<Expression::Node> nodes_;
  std::vector<std::string> vars_;
  bool fixed_vars_ = false;

  void skip_ws() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' ||
                                   text_[pos_] == '\n' || text_[pos_] == '\r'))
      ++pos_;
  }

  bool at_end() {
    skip_ws();
    return pos_ >= text_.size();
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  bool accept(char c) {
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, pos_); }

  int push(Expression::Node n) {
    nodes_.push_back(n);
    return static_cast<int>(nodes_.size()) - 1;
  }

  int make(Expression::Op op, int a, int b = -1) {
    Expression::Node n;
    n.op = op;
    n.a = a;
    n.b = b;
    return push(n);
  }

  int parse_expr() {
    int lhs = parse_term();
    for (;;) {
      if (accept('+'))
        lhs = make(Expression::Op::Add, lhs, parse_term());
      else if (accept('-'))
        lhs = make(Expression::Op::Sub, lhs, parse_term());
      else
        return lhs;
    }
  }

  int parse_term() {
    int lhs = parse_unary();
    for (;;) {
      if (accept('*'))
        lhs = make(Expression::Op::Mul, lhs, parse_unary());
      else if (accept('/'))
        lhs = make(Expression::Op::Div, lhs, parse_unary());
      else
        return lhs;
    }
  }

  int parse_unary() {
    if (accept('-')) return make(Expression::Op::Neg, parse_unary());
    return parse_power();
  }

  int parse_power() {
    int base = parse_atom();
    if (!accept('^')) return base;
    skip_ws();
    const std::size_t mark = pos_;
    bool neg = false;
    if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) {
      neg = text_[pos_] == '-';
      ++pos_;
    }
    if (pos_ >= text_.size() || !digit(text_[pos_])) {
      pos_ = mark;
      fail("expected integer exponent after '^'");
    }
    long long e = 0;
    while (pos_ < text_.size() && digit(text_[pos_])) {
      e = e * 10 + (text_[pos_] - '0');
      if (e > (1LL << 31)) {
        pos_ = mark;
        fail("integer overflow in exponent");
      }
      ++pos_;
    }
    Expression::Node n;
    n.op = Expression::Op::Pow;
    n.a = base;
    n.exponent = neg ? -e : e;
    return push(n);
  }

  int parse_atom() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      int inner = parse_expr();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (digit(c) || c == '.') return parse_number();
    if (ident_start(c)) return parse_ident();
    fail(std::string("unknown character '") + c + "'");
  }

  int parse_number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && digit(text_[pos_])) ++pos_;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      while (pos_ < text_.size() && digit(text_[pos_])) ++pos_;
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t mark = pos_;
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (pos_ < text_.size() && digit(text_[pos_])) {
        while (pos_ < text_.size() && digit(text_[pos_])) ++pos_;
      } else {
        pos_ = mark;  // 'e' belongs to a following identifier, not the literal
      }
    }
    double value = 0.0;
    auto res = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (res.ec != std::errc() || res.ptr != text_.data() + pos_) {
      pos_ = start;
      fail("malformed numeric literal");
    }
    Expression::Node n;
    n.op = Expression::Op::Const;
    n.value = value;
    return push(n);
  }

  int parse_ident() {
    const std::size_t start = pos_;
    ++pos_;
    while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
    std::string name(text_.substr(start, pos_ - start));
    if (name == "sqrt") {
      if (!accept('(')) fail("expected '(' after sqrt");
      int inner = parse_expr();
      if (!accept(')')) fail("expected ')'");
      return make(Expression::Op::Sqrt, inner);
    }
    auto it = std::find(vars_.begin(), vars_.end(), name);
    int var;
    if (it != vars_.end()) {
      var = static_cast<int>(it - vars_.begin());
    } else {
      if (fixed_vars_) {
        pos_ = start;
        fail("unknown variable '" + name + "'");
      }
      vars_.push_back(name);
      var = static_cast<int>(vars_.size()) - 1;
    }
    Expression::Node n;
    n.op = Expression::Op::Var;
    n.var = var;
    return push(n);
  }
};

int precedence(Expression::Op op) {
  switch (op) {
    case Expression::Op::Add:
    case Expression::Op::Sub:
      return 1;
    case Expression::Op::Mul:
    case Expression::Op::Div:
      return 2;
    case Expression::Op::Neg:
      return 3;
    case Expression::Op::Pow:
      return 4;
    default:
      return 5;
  }
}

}  // namespace

Expression Expression::parse(std::string_view text) {
  Parser p(text, nullptr);
  int root = p.parse_expr();
  if (!p.at_end()) p.fail("trailing input");
  Expression e;
  e.nodes_ = std::move(p.nodes_);
  e.root_ = root;
  e.vars_ = std::move(p.vars_);
  return e;
}

Expression Expression::parse(std::string_view text, std::vector<std::string> variables) {
  Parser p(text, nullptr);
  p.vars_ = std::move(variables);
  p.fixed_vars_ = true;
  int root = p.parse_expr();
  if (!p.at_end()) p.fail("trailing input");
  Expression e;
  e.nodes_ = std::move(p.nodes_);
  e.root_ = root;
  e.vars_ = std::move(p.vars_);
  return e;
}

int Expression::append(Node n) {
  nodes_.push_back(n);
  root_ = static_cast<int>(nodes_.size()) - 1;
  return root_;
}

Expression Expression::constant(double c, std::vector<std::string> variables) {
  Expression e;
  e.vars_ = std::move(variables);
  Node n;
  n.op = Op::Const;
  n.value = std::abs(c);
  e.append(n);
  if (c < 0) {
    Node neg;
    neg.op = Op::Neg;
    neg.a = e.root_;
    e.append(neg);
  }
  return e;
}

Expression Expression::variable(std::size_t index, std::vector<std::string> variables) {
  if (index >= variables.size()) throw Error("variable index out of range");
  Expression e;
  e.vars_ = std::move(variables);
  Node n;
  n.op = Op::Var;
  n.var = static_cast<int>(index);
  e.append(n);
  return e;
}

Expression Expression::affine(std::vector<std::string> variables, double intercept, const Vec& coeffs) {
  if (static_cast<std::size_t>(coeffs.size()) != variables.size())
    throw Error("affine: coefficient count must match variable count");
  Expression e = constant(intercept, variables);
  for (Index i = 0; i < coeffs.size(); ++i) {
    if (coeffs[i] == 0.0) continue;
    Expression term = constant(coeffs[i], e.vars_);
    int coeff_root = -1;
    {
      // splice coefficient then variable then Mul/Add nodes by hand
      const int base = static_cast<int>(e.nodes_.size());
      for (const Node& n : term.nodes_) {
        Node copy = n;
        if (copy.a >= 0) copy.a += base;
        if (copy.b >= 0) copy.b += base;
        e.nodes_.push_back(copy);
      }
      coeff_root = base + term.root_;
    }
    Node v;
    v.op = Op::Var;
    v.var = static_cast<int>(i);
    e.nodes_.push_back(v);
    const int var_id = static_cast<int>(e.nodes_.size()) - 1;
    Node mul;
    mul.op = Op::Mul;
    mul.a = coeff_root;
    mul.b = var_id;
    e.nodes_.push_back(mul);
    Node add;
    add.op = Op::Add;
    add.a = e.root_;
    add.b = static_cast<int>(e.nodes_.size()) - 1;
    e.append(add);
  }
  return e;
}

void Expression::check_point(const Vec& point) const {
  if (point.size() != arity())
    throw EvalError("arity mismatch: expression over " + std::to_string(vars_.size()) +
                    " variables evaluated at a point of length " + std::to_string(point.size()));
}

double Expression::eval(const Vec& point) const {
  check_point(point);
  if (root_ < 0) throw EvalError("empty expression");
  double stack_buf[96];
  std::vector<double> heap_buf;
  double* val = stack_buf;
  if (nodes_.size() > 96) {
    heap_buf.resize(nodes_.size());
    val = heap_buf.data();
  }
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const Node& n = nodes_[i];
    switch (n.op) {
      case Op::Const: val[i] = n.value; break;
      case Op::Var: val[i] = point[n.var]; break;
      case Op::Add: val[i] = val[n.a] + val[n.b]; break;
      case Op::Sub: val[i] = val[n.a] - val[n.b]; break;
      case Op::Mul: val[i] = val[n.a] * val[n.b]; break;
      case Op::Div:
        if (val[n.b] == 0.0) throw EvalError("division by zero");
        val[i] = val[n.a] / val[n.b];
        break;
      case Op::Neg: val[i] = -val[n.a]; break;
      case Op::Pow: val[i] = ipow(val[n.a], n.exponent); break;
      case Op::Sqrt:
        if (val[n.a] < 0.0) throw EvalError("sqrt of negative value");
        val[i] = std::sqrt(val[n.a]);
        break;
    }
  }
  return val[root_];
}

double Expression::eval_with_gradient(const Vec& point, Vec& grad) const {
  check_point(point);
  if (root_ < 0) throw EvalError("empty expression");
  const Index m = arity();
  std::vector<double> val(nodes_.size());
  Mat d(nodes_.size(), m);
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const Node& n = nodes_[i];
    switch (n.op) {
      case Op::Const:
        val[i] = n.value;
        d.row(i).setZero();
        break;
      case Op::Var:
        val[i] = point[n.var];
        d.row(i).setZero();
        d(i, n.var) = 1.0;
        break;
      case Op::Add:
        val[i] = val[n.a] + val[n.b];
        d.row(i) = d.row(n.a) + d.row(n.b);
        break;
      case Op::Sub:
        val[i] = val[n.a] - val[n.b];
        d.row(i) = d.row(n.a) - d.row(n.b);
        break;
      case Op::Mul:
        val[i] = val[n.a] * val[n.b];
        d.row(i) = val[n.b] * d.row(n.a) + val[n.a] * d.row(n.b);
        break;
      case Op::Div: {
        if (val[n.b] == 0.0) throw EvalError("division by zero");
        val[i] = val[n.a] / val[n.b];
        d.row(i) = (d.row(n.a) - val[i] * d.row(n.b)) / val[n.b];
        break;
      }
      case Op::Neg:
        val[i] = -val[n.a];
        d.row(i) = -d.row(n.a);
        break;
      case Op::Pow: {
        val[i] = ipow(val[n.a], n.exponent);
        if (n.exponent == 0) {
          d.row(i).setZero();
        } else {
          if (n.exponent < 0 && val[n.a] == 0.0)
            throw EvalError("division by zero in negative power");
          d.row(i) = static_cast<double>(n.exponent) * ipow(val[n.a], n.exponent - 1) * d.row(n.a);
        }
        break;
      }
      case Op::Sqrt:
        if (val[n.a] < 0.0) throw EvalError("sqrt of negative value");
        if (val[n.a] == 0.0) throw EvalError("sqrt not differentiable at 0");
        val[i] = std::sqrt(val[n.a]);
        d.row(i) = d.row(n.a) / (2.0 * val[i]);
        break;
    }
  }
  grad = d.row(root_).transpose();
  return val[root_];
}

Vec Expression::gradient(const Vec& point) const {
  Vec g;
  eval_with_gradient(point, g);
  return g;
}

std::string Expression::print_node(int id, int parent_prec) const {
  const Node& n = nodes_[id];
  const int prec = precedence(n.op);
  std::string out;
  switch (n.op) {
    case Op::Const: out = format_double(n.value); break;
    case Op::Var: out = vars_[n.var]; break;
    case Op::Add: out = print_node(n.a, 1) + " + " + print_node(n.b, 2); break;
    case Op::Sub: out = print_node(n.a, 1) + " - " + print_node(n.b, 2); break;
    case Op::Mul: out = print_node(n.a, 2) + "*" + print_node(n.b, 3); break;
    case Op::Div: out = print_node(n.a, 2) + "/" + print_node(n.b, 3); break;
    case Op::Neg: out = "-" + print_node(n.a, 3); break;
    case Op::Pow:
      out = print_node(n.a, 5) + "^" + std::to_string(n.exponent);
      break;
    case Op::Sqrt: out = "sqrt(" + print_node(n.a, 0) + ")"; break;
  }
  if (prec < parent_prec) return "(" + out + ")";
  return out;
}

std::string Expression::str() const {
  if (root_ < 0) return "";
  return print_node(root_, 0);
}

bool Expression::same_tree(const Expression& other) const {
  if (vars_ != other.vars_) return false;
  std::function<bool(int, int)> eq = [&](int a, int b) -> bool {
    if ((a < 0) != (b < 0)) return false;
    if (a < 0) return true;
    const Node& x = nodes_[a];
    const Node& y = other.nodes_[b];
    if (x.op != y.op || x.value != y.value || x.var != y.var || x.exponent != y.exponent)
      return false;
    return eq(x.a, y.a) && eq(x.b, y.b);
  };
  return eq(root_, other.root_);
}

Expression Expression::substitute(const std::vector<Expression>& replacements) const {
  if (replacements.size() != vars_.size())
    throw Error("substitute: need one replacement per variable");
  std::vector<std::string> new_vars =
      replacements.empty() ? std::vector<std::string>{} : replacements[0].variables();
  for (const auto& r : replacements)
    if (r.variables() != new_vars) throw Error("substitute: replacements must share one variable list");
  Expression out;
  out.vars_ = new_vars;
  std::vector<int> mapped(nodes_.size(), -1);
  std::function<int(int)> clone = [&](int id) -> int {
    const Node& n = nodes_[id];
    if (n.op == Op::Var) {
      const Expression& r = replacements[n.var];
      const int base = static_cast<int>(out.nodes_.size());
      for (const Node& rn : r.nodes_) {
        Node copy = rn;
        if (copy.a >= 0) copy.a += base;
        if (copy.b >= 0) copy.b += base;
        out.nodes_.push_back(copy);
      }
      return base + r.root();
    }
    Node copy = n;
    if (n.a >= 0) copy.a = clone(n.a);
    if (n.b >= 0) copy.b = clone(n.b);
    out.nodes_.push_back(copy);
    return static_cast<int>(out.nodes_.size()) - 1;
  };
  out.root_ = clone(root_);
  return out;
}

}  // namespace strat
