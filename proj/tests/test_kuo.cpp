#include "strat/fixtures.hpp"
#include "strat/kuo.hpp"

#include <doctest.h>

#include <cmath>

using namespace strat;

namespace {

Vec pt3(double x, double y, double z) {
  Vec p(3);
  p << x, y, z;
  return p;
}

}  // namespace

TEST_CASE("p_a is the empty sum when Y is a point") {
  const PairXY pair = fixtures::cone();
  const KuoContext ctx(pair, Vec::Zero(3));
  CHECK(ctx.k() == 0);
  const Stratum::Sample s = pair.X().sample(50, 2);
  for (Index i = 0; i < s.points.cols(); ++i) CHECK(ctx.p_a(s.points.col(i)) == 0.0);
}

TEST_CASE("hand-computed p_a: frame vector orthogonal to a coordinate plane") {
  // Y = x-axis, X tangent = span{e_y, e_z}: p_a = ||pi_N(e_x)||^2 = 1
  const std::vector<std::string> vars{"u", "v"};
  Chart sheet;
  sheet.map = {Expression::parse("0.5 + 0*u", vars), Expression::parse("u", vars),
               Expression::parse("v + 1", vars)};
  sheet.domain = Box::cube(2, -1.0, 1.0);
  const Stratum X = Stratum::parametric("yz_sheet", 3, {sheet});

  const std::vector<std::string> t{"t"};
  Chart axis;
  axis.map = {Expression::parse("t", t), Expression::parse("0", t), Expression::parse("0", t)};
  axis.domain = Box::cube(1, -2.0, 2.0);
  const Stratum Y = Stratum::parametric("x_axis", 3, {axis});

  // the sheet never adheres to Y; construct the context directly anyway
  const PairXY pair(X, Y);
  const KuoContext ctx(pair, pt3(0, 0, 0));
  REQUIRE(ctx.k() == 1);
  CHECK(ctx.p_a(pt3(0.5, 0.3, 1.2)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("santa hat brim is coplanar with the circle tangent: p_a = 0") {
  const PairXY hat = fixtures::santa_hat();
  const KuoContext ctx(hat, fixtures::santa_hat_apex());
  REQUIRE(ctx.k() == 1);
  // brim points near the apex
  for (double rho : {1.05, 1.2, 1.5})
    for (double ang : {-0.3, 0.0, 0.4}) {
      const Vec x = pt3(rho * std::cos(ang), rho * std::sin(ang), 0.0);
      CHECK(ctx.p_a(x) < 1e-10);
    }
  // cone points at angle phi around the apex: p_a = sin(phi)^2 / 2
  for (double phi : {0.0, 0.7, 1.5707963267948966, 2.5})
    for (double h : {0.2, 0.6}) {
      const Vec x = pt3(1.0 + h * std::cos(phi), h * std::sin(phi), h);
      CHECK(ctx.p_a(x) ==
            doctest::Approx(std::sin(phi) * std::sin(phi) / 2.0).epsilon(1e-6));
    }
}

TEST_CASE("paraboloid secant defect at (1,0,1) is exactly 1/10") {
  const PairXY pair = fixtures::paraboloid();
  const KuoContext ctx(pair, Vec::Zero(3));
  const Vec x = pt3(1.0, 0.0, 1.0);
  CHECK(ctx.p_b_prime(x) == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(ctx.p_a(x) == 0.0);
  CHECK(ctx.p_b(x) == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("ruled cone has vanishing p_b along every ray") {
  const PairXY pair = fixtures::cone();
  const KuoContext ctx(pair, Vec::Zero(3));
  const Stratum::Sample s = pair.X().sample(100, 4);
  for (Index i = 0; i < s.points.cols(); ++i) {
    const double pb = ctx.p_b(s.points.col(i));
    CHECK(pb >= 0.0);
    CHECK(pb < 1e-9);
  }
}

TEST_CASE("degenerate secant is rejected") {
  const PairXY pair = fixtures::half_plane_pair();
  const KuoContext ctx(pair, pt3(0, 0, 0));
  CHECK_THROWS_AS(ctx.p_b_prime(pt3(0.0, 1e-14, 0.0)), Error);
}

TEST_CASE("p_a is invariant under re-choice of the orthonormal frame") {
  // two random rotations of the tangent frame of Y give the same p_a
  const PairXY hat = fixtures::santa_hat();
  const KuoContext ctx(hat, fixtures::santa_hat_apex());
  // k = 1: the only re-choices are +-e1; verify via the subspace formulation
  const Vec x = pt3(1.0 + 0.3, 0.3, std::hypot(0.3, 0.3));
  const Subspace tangent = hat.X().tangent_space(x);
  Mat flipped = ctx.frame() * -1.0;
  double pa_flipped = 0.0;
  for (Index i = 0; i < flipped.cols(); ++i) {
    Vec r = flipped.col(i);
    r -= tangent.frame() * (tangent.frame().transpose() * r);
    r -= tangent.frame() * (tangent.frame().transpose() * r);
    pa_flipped += r.squaredNorm();
  }
  CHECK(std::abs(ctx.p_a(tangent) - pa_flipped) <= 1e-9);
}

TEST_CASE("p_a vanishes iff the Y tangent angle vanishes (two-sided bound)") {
  // delta(T_yY, T_xX)^2 <= p_a <= k * delta^2
  const PairXY hat = fixtures::santa_hat();
  const Vec apex = fixtures::santa_hat_apex();
  const KuoContext ctx(hat, apex);
  const Subspace t_y = hat.Y().tangent_space(apex);
  const Stratum::Sample s = hat.X().sample(200, 9);
  for (Index i = 0; i < s.points.cols(); ++i) {
    const Subspace t_x = hat.X().tangent_space_chart(
        static_cast<std::size_t>(s.chart[static_cast<std::size_t>(i)]), s.params.col(i));
    const double pa = ctx.p_a(t_x);
    const double delta = angle(t_y, t_x);
    CHECK(pa <= 1.0 * delta * delta + 1e-9);
    CHECK(delta * delta <= pa + 1e-9);
    CHECK(pa >= 0.0);
    CHECK(pa <= 1.0 + 1e-12);  // p_a in [0, k]
  }
}

TEST_CASE("base point must lie on Y") {
  const PairXY pair = fixtures::paraboloid();
  CHECK_THROWS_AS(KuoContext(pair, pt3(0.5, 0, 0)), Error);
}
