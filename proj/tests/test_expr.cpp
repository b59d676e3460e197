#include "strat/expr.hpp"

#include <doctest.h>

#include <cmath>

using namespace strat;

namespace {

Vec pt(std::initializer_list<double> v) {
  Vec p(static_cast<Index>(v.size()));
  Index i = 0;
  for (double x : v) p[i++] = x;
  return p;
}

}  // namespace

TEST_CASE("parse collects variables in order of first appearance") {
  const Expression e = Expression::parse("x^2 + y^2 - 1");
  CHECK(e.variables() == std::vector<std::string>{"x", "y"});
  CHECK(e.nodes().back().op == Expression::Op::Sub);
  CHECK(e.eval(pt({1.0, 0.0})) == doctest::Approx(0.0));
}

TEST_CASE("single variable is an identity") {
  const Expression e = Expression::parse("x");
  CHECK(e.eval(pt({3.5})) == doctest::Approx(3.5));
  CHECK(e.gradient(pt({7.0}))[0] == doctest::Approx(1.0));
}

TEST_CASE("cone polynomial parses with expected precedence") {
  const Expression e = Expression::parse("(x-1)^2 + y^2 - z^2");
  CHECK(e.variables() == std::vector<std::string>{"x", "y", "z"});
  CHECK(e.eval(pt({1.0, 0.0, 0.0})) == doctest::Approx(0.0));
  // hand-checked gradient at (2,1,1)
  const Vec g = e.gradient(pt({2.0, 1.0, 1.0}));
  CHECK(g[0] == doctest::Approx(2.0));
  CHECK(g[1] == doctest::Approx(2.0));
  CHECK(g[2] == doctest::Approx(-2.0));
}

TEST_CASE("precedence: power binds tighter than unary minus than product") {
  CHECK(Expression::parse("-2^2").eval(Vec(0)) == doctest::Approx(-4.0));
  CHECK(Expression::parse("-x^2").eval(pt({3.0})) == doctest::Approx(-9.0));
  CHECK(Expression::parse("-x*y").eval(pt({2.0, 5.0})) == doctest::Approx(-10.0));
  CHECK(Expression::parse("6/3/2").eval(Vec(0)) == doctest::Approx(1.0));
  CHECK(Expression::parse("2 - 3 - 4").eval(Vec(0)) == doctest::Approx(-5.0));
  CHECK(Expression::parse("x^-2").eval(pt({2.0})) == doctest::Approx(0.25));
}

TEST_CASE("parse errors carry byte offsets") {
  CHECK_THROWS_AS(Expression::parse("x +"), ParseError);
  CHECK_THROWS_AS(Expression::parse("x ? y"), ParseError);
  CHECK_THROWS_AS(Expression::parse("x ^ 99999999999999999999"), ParseError);
  CHECK_THROWS_AS(Expression::parse("x ^ y"), ParseError);
  CHECK_THROWS_AS(Expression::parse("(x + y"), ParseError);
  try {
    Expression::parse("x + $");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 4);
  }
}

TEST_CASE("eval domain errors") {
  CHECK_THROWS_AS(Expression::parse("sqrt(x)").eval(pt({-1.0})), EvalError);
  CHECK_THROWS_AS(Expression::parse("1/x").eval(pt({0.0})), EvalError);
  CHECK_THROWS_AS(Expression::parse("x^2").eval(pt({1.0, 2.0})), EvalError);  // arity
  CHECK_THROWS_AS(Expression::parse("sqrt(x)").gradient(pt({0.0})), EvalError);
}

TEST_CASE("fixed variable lists reject unknown identifiers") {
  const Expression e = Expression::parse("u*v", {"u", "v", "w"});
  CHECK(e.arity() == 3);
  CHECK(e.eval(pt({2.0, 3.0, 9.0})) == doctest::Approx(6.0));
  CHECK_THROWS_AS(Expression::parse("u*q", std::vector<std::string>{"u", "v"}), ParseError);
}

TEST_CASE("print/parse round trip is the identity on ASTs") {
  const char* cases[] = {
      "x^2 + y^2 - 1",
      "(x-1)^2 + y^2 - z^2",
      "-x^2",
      "x*-y + -z",
      "x - (y - z)",
      "x*(y/z)",
      "sqrt(x^2 + 1)/(1 + y^2)",
      "2*t/(1 + t^2)",
      "--x",
      "x^-3 + 0.25",
      "1e-05 + x",
  };
  for (const char* text : cases) {
    const Expression e = Expression::parse(text);
    const Expression round = Expression::parse(e.str(), e.variables());
    CHECK_MESSAGE(e.same_tree(round), "round trip failed for: ", text, " printed as ", e.str());
    // print-parse-print is idempotent on strings
    CHECK(round.str() == e.str());
  }
}

TEST_CASE("gradient matches central differences on random polynomial ASTs") {
  // random AST generator: +, -, *, pow over constants/variables
  Rng rng(20240817);
  const int n_vars = 3;
  std::function<Expression(int)> gen = [&](int depth) -> Expression {
    const std::vector<std::string> vars{"x", "y", "z"};
    if (depth == 0 || rng.uniform() < 0.25) {
      if (rng.uniform() < 0.5) return Expression::constant(rng.uniform(-1.5, 1.5), vars);
      return Expression::variable(rng.below(n_vars), vars);
    }
    const double pick = rng.uniform();
    const std::string a = gen(depth - 1).str();
    if (pick < 0.6) {
      const std::string b = gen(depth - 1).str();
      const char* op = pick < 0.3 ? " + " : (pick < 0.45 ? " - " : "*");
      return Expression::parse("(" + a + ")" + op + "(" + b + ")", vars);
    }
    const int e = 2 + static_cast<int>(rng.below(2));
    return Expression::parse("(" + a + ")^" + std::to_string(e), vars);
  };

  int tested = 0;
  while (tested < 1000) {
    const Expression e = gen(1 + static_cast<int>(rng.below(5)));
    Vec p(3);
    for (Index i = 0; i < 3; ++i) p[i] = rng.uniform(-1.0, 1.0);
    double val;
    Vec g;
    try {
      val = e.eval_with_gradient(p, g);
    } catch (const EvalError&) {
      continue;
    }
    if (!std::isfinite(val) || std::abs(val) > 1e3 || g.cwiseAbs().maxCoeff() > 1e3) continue;
    const double h = 1e-5;
    bool skip = false;
    Vec fd(3);
    for (Index i = 0; i < 3 && !skip; ++i) {
      Vec hi = p, lo = p;
      hi[i] += h;
      lo[i] -= h;
      try {
        fd[i] = (e.eval(hi) - e.eval(lo)) / (2.0 * h);
      } catch (const EvalError&) {
        skip = true;
      }
    }
    if (skip) continue;
    ++tested;
    for (Index i = 0; i < 3; ++i)
      CHECK_MESSAGE(std::abs(g[i] - fd[i]) <= 1e-6 * (1.0 + g.norm()),
                    "analytic ", g[i], " vs fd ", fd[i], " for ", e.str());
  }
}

TEST_CASE("substitute composes maps for path charts") {
  const Expression e = Expression::parse("u^2 + v", {"u", "v"});
  Vec cu(1), cv(1);
  cu << 2.0;
  cv << -1.0;
  const Expression pu = Expression::affine({"t"}, 1.0, cu);  // 1 + 2t
  const Expression pv = Expression::affine({"t"}, 0.5, cv);  // 0.5 - t
  const Expression composed = e.substitute({pu, pv});
  CHECK(composed.variables() == std::vector<std::string>{"t"});
  const double t = 0.3;
  const double expect = std::pow(1.0 + 2.0 * t, 2) + (0.5 - t);
  CHECK(composed.eval(pt({t})) == doctest::Approx(expect));
}
