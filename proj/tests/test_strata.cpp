#include "strat/fixtures.hpp"
#include "strat/strata.hpp"

#include <doctest.h>

#include <cmath>

using namespace strat;

namespace {

Vec pt3(double x, double y, double z) {
  Vec p(3);
  p << x, y, z;
  return p;
}

Stratum implicit_circle() {
  ImplicitForm form;
  form.equalities = {Expression::parse("x^2 + y^2 - 1", {"x", "y"})};
  form.sampling_box = Box::cube(2, -2.0, 2.0);
  return Stratum::implicit("circle2d", 2, std::move(form));
}

}  // namespace

TEST_CASE("tangent of the implicit unit circle at (1,0)") {
  const Stratum circle = implicit_circle();
  Vec p(2);
  p << 1.0, 0.0;
  const Subspace t = circle.tangent_space(p);
  REQUIRE(t.dim() == 1);
  CHECK(std::abs(t.frame()(1, 0)) == doctest::Approx(1.0));
  CHECK(std::abs(t.frame()(0, 0)) < 1e-12);
}

TEST_CASE("tangent of a parametric plane is constant") {
  const std::vector<std::string> vars{"u", "v"};
  Chart c;
  c.map = {Expression::parse("u", vars), Expression::parse("v", vars),
           Expression::parse("0", vars)};
  c.domain = Box::cube(2, -1.0, 1.0);
  const Stratum plane = Stratum::parametric("plane", 3, {c});
  Vec u(2);
  u << 0.3, -0.8;
  const Subspace t = plane.tangent_space_chart(0, u);
  REQUIRE(t.dim() == 2);
  CHECK(t.contains(pt3(1, 0, 0), 1e-12));
  CHECK(t.contains(pt3(0, 1, 0), 1e-12));
  CHECK_FALSE(t.contains(pt3(0, 0, 1), 1e-6));
}

TEST_CASE("tangent of the hat cone matches the analytic ruled plane") {
  // cone z = sqrt((x-1)^2 + y^2) at (1+h, 0, h): span{(1,0,1)/sqrt2, (0,1,0)}
  const PairXY hat = fixtures::santa_hat();
  const Vec x = pt3(1.5, 0.0, 0.5);
  const Subspace t = hat.X().tangent_space(x);
  REQUIRE(t.dim() == 2);
  CHECK(t.contains(pt3(1.0, 0.0, 1.0), 1e-7));
  CHECK(t.contains(pt3(0.0, 1.0, 0.0), 1e-7));
}

TEST_CASE("implicit and parametric tangents of the same fixture agree") {
  // the fixture cone, implicit form z^2 = x^2 + y^2 (z > 0)
  ImplicitForm form;
  form.equalities = {Expression::parse("x^2 + y^2 - z^2", {"x", "y", "z"})};
  form.inequalities = {Expression::parse("z", {"x", "y", "z"})};
  const Stratum cone_implicit = Stratum::implicit("cone_imp", 3, std::move(form));
  const PairXY cone_pair = fixtures::cone();

  const Stratum::Sample s = cone_pair.X().sample(40, 11);
  for (Index i = 0; i < s.points.cols(); ++i) {
    const Subspace tp = cone_pair.X().tangent_space_chart(
        static_cast<std::size_t>(s.chart[static_cast<std::size_t>(i)]), s.params.col(i));
    const Subspace ti = cone_implicit.tangent_space(s.points.col(i));
    CHECK(symmetric_angle(tp, ti) < 1e-6);
  }
}

TEST_CASE("sampling honors residuals, inequalities and determinism") {
  const PairXY umbrella = fixtures::whitney_umbrella();
  const Stratum::Sample a = umbrella.X().sample(200, 7);
  const Stratum::Sample b = umbrella.X().sample(200, 7);
  REQUIRE(a.points.cols() == 200);
  CHECK((a.points - b.points).cwiseAbs().maxCoeff() == 0.0);  // bit-identical
  for (Index i = 0; i < a.points.cols(); ++i) {
    const double x = a.points(0, i), y = a.points(1, i), z = a.points(2, i);
    CHECK(std::abs(x * x - z * y * y) < 1e-8);
    CHECK(std::abs(y) > 0.0);
  }
  const Stratum::Sample c = umbrella.X().sample(200, 8);
  CHECK((a.points - c.points).cwiseAbs().maxCoeff() > 1e-3);  // seed matters

  const Stratum point = Stratum::point("pt", pt3(1, 2, 3));
  const Stratum::Sample ps = point.sample(5, 1);
  REQUIRE(ps.points.cols() == 5);
  for (Index i = 0; i < 5; ++i) CHECK((ps.points.col(i) - pt3(1, 2, 3)).norm() == 0.0);

  const Stratum circle = implicit_circle();
  const Stratum::Sample cs = circle.sample(100, 42);
  REQUIRE(cs.points.cols() == 100);
  for (Index i = 0; i < cs.points.cols(); ++i)
    CHECK(std::abs(cs.points.col(i).squaredNorm() - 1.0) < 1e-8);
}

TEST_CASE("nearest points: affine, point stratum, circle") {
  const std::vector<std::string> vars{"t"};
  Chart axis;
  axis.map = {Expression::parse("t", vars), Expression::parse("0", vars),
              Expression::parse("0", vars)};
  axis.domain = Box::cube(1, -10.0, 10.0);
  const Stratum x_axis = Stratum::parametric("x_axis", 3, {axis});
  const Vec q = pt3(3.0, 4.0, 0.0);
  const Vec n = x_axis.nearest_point(q);
  CHECK((n - pt3(3, 0, 0)).norm() < 1e-12);

  const Stratum point = Stratum::point("pt", pt3(0, 1, 0));
  CHECK((point.nearest_point(q) - pt3(0, 1, 0)).norm() == 0.0);

  const Stratum circle = implicit_circle();
  Vec q2(2);
  q2 << 2.0, 0.0;
  const Vec nc = circle.nearest_point(q2);
  // oracle: dense angular sampling
  double best = 1e9;
  Vec best_p(2);
  for (int i = 0; i < 20000; ++i) {
    const double t = i * 6.283185307179586 / 20000.0;
    Vec p(2);
    p << std::cos(t), std::sin(t);
    if ((p - q2).norm() < best) {
      best = (p - q2).norm();
      best_p = p;
    }
  }
  CHECK((nc - best_p).norm() < 1e-4);
  CHECK(circle.nearest(q2).distance == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("nearest_point fixes points already on the stratum") {
  const PairXY hat = fixtures::santa_hat();
  const Stratum::Sample s = hat.X().sample(60, 3);
  for (Index i = 0; i < s.points.cols(); ++i)
    CHECK(hat.X().nearest(s.points.col(i)).distance < 1e-8);
}

TEST_CASE("grid samples include closed-box midpoints") {
  const PairXY hat = fixtures::santa_hat();
  const Stratum::Sample g = hat.Y().grid_sample(64);
  bool has_apex = false;
  for (Index i = 0; i < g.points.cols(); ++i)
    if ((g.points.col(i) - pt3(1, 0, 0)).norm() < 1e-12) has_apex = true;
  CHECK(has_apex);
}

TEST_CASE("pair invariants") {
  // dim Y < dim X enforced
  const Stratum point = Stratum::point("pt", pt3(0, 0, 0));
  CHECK_THROWS_AS(PairXY(point, point), Error);

  // sampled closure certification accepts fixtures...
  for (auto& [name, pair] : fixtures::all_pairs()) {
    const PairValidation v = pair.validate(24);
    CHECK_MESSAGE(v.ok, name, ": ", v.message);
  }

  // ...and rejects the cone sheet alone over the full circle
  const SetDescription hat = fixtures::santa_hat_set();
  const PairXY bad(hat.find("cone"), hat.find("circle"));
  CHECK_FALSE(bad.validate(24).ok);
}

TEST_CASE("immersion and regularity rank checks pass on fixture strata") {
  for (auto& [name, pair] : fixtures::all_pairs()) {
    CHECK_NOTHROW(pair.X().verify(1000, 5));
    CHECK_NOTHROW(pair.Y().verify(1000, 6));
  }
}

TEST_CASE("box splitting keeps pieces exactly disjoint") {
  Box b = Box::cube(2, 0.0, 1.0);
  auto [lo, hi] = b.split(0);
  CHECK(lo.disjoint(hi));
  Vec mid(2);
  mid << 0.5, 0.5;
  CHECK(lo.contains(mid));
  CHECK_FALSE(hi.contains(mid));
  CHECK(lo.volume() == doctest::Approx(0.5));
}
