#include "strat/grassmann.hpp"

#include <doctest.h>

#include <cmath>

using namespace strat;

namespace {

Subspace random_subspace(Rng& rng, Index ambient, Index dim) {
  Mat m(ambient, dim);
  for (Index j = 0; j < dim; ++j) m.col(j) = rng.gaussian_vec(ambient);
  Subspace s = Subspace::from_span(m);
  REQUIRE(s.dim() == dim);
  return s;
}

Vec unit2(double theta) {
  Vec v(2);
  v << std::cos(theta), std::sin(theta);
  return v;
}

}  // namespace

TEST_CASE("projection onto axis and full space") {
  Mat axis(2, 1);
  axis << 1.0, 0.0;
  const Subspace L = Subspace::from_orthonormal(axis);
  Vec v(2);
  v << 3.0, 4.0;
  const Vec p = L.project(v);
  CHECK(p[0] == doctest::Approx(3.0));
  CHECK(p[1] == doctest::Approx(0.0));

  const Subspace full = Subspace::full(2);
  CHECK((full.project(v) - v).norm() == doctest::Approx(0.0));
}

TEST_CASE("projection onto diagonal line minimizes distance over the line") {
  Mat diag(2, 1);
  diag << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  const Subspace L = Subspace::from_orthonormal(diag);
  Vec v(2);
  v << 1.0, 0.0;
  const Vec p = L.project(v);
  CHECK(p[0] == doctest::Approx(0.5));
  CHECK(p[1] == doctest::Approx(0.5));
  // oracle: dense samples of the line never beat the projection
  double best = 1e9;
  for (int i = -2000; i <= 2000; ++i) {
    const double t = i / 1000.0;
    Vec w(2);
    w << t / std::sqrt(2.0), t / std::sqrt(2.0);
    best = std::min(best, (v - w).norm());
  }
  CHECK((v - p).norm() <= best + 1e-6);
  CHECK((L.project(p) - p).norm() < 1e-14);  // idempotent
}

TEST_CASE("orthogonal complements") {
  Mat xy(3, 2);
  xy << 1, 0, 0, 1, 0, 0;
  const Subspace plane = Subspace::from_orthonormal(xy);
  const Subspace normal = plane.orthogonal_complement();
  REQUIRE(normal.dim() == 1);
  CHECK(std::abs(normal.frame()(2, 0)) == doctest::Approx(1.0));

  const Subspace zero(3);
  CHECK(zero.orthogonal_complement().dim() == 3);

  Mat diag(3, 1);
  diag << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0), 0.0;
  const Subspace line = Subspace::from_orthonormal(diag);
  const Subspace comp = line.orthogonal_complement();
  REQUIRE(comp.dim() == 2);
  // Gram test: [frame | comp] is an orthonormal basis of R^3
  Mat all(3, 3);
  all << line.frame(), comp.frame();
  CHECK((all.transpose() * all - Mat::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("angle of nested subspaces") {
  Rng rng(7);
  for (int rep = 0; rep < 50; ++rep) {
    const Index n = 3 + static_cast<Index>(rng.below(5));
    const Index qd = 2 + static_cast<Index>(rng.below(n - 1));
    const Subspace Q = random_subspace(rng, n, qd);
    const Index pd = 1 + static_cast<Index>(rng.below(qd));
    // P spanned by random combinations of Q's frame: P subset Q
    Mat comb(n, pd);
    for (Index j = 0; j < pd; ++j) comb.col(j) = Q.frame() * rng.gaussian_vec(qd);
    const Subspace P = Subspace::from_span(comb);
    CHECK(angle(P, Q) <= 1e-12);
    if (P.dim() < Q.dim()) CHECK(angle(Q, P) == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("angle between plane lines equals the sine of their angle") {
  const double theta = 3.14159265358979323846 / 6.0;
  const Subspace P = Subspace::from_span(unit2(0.0));
  const Subspace Q = Subspace::from_span(unit2(theta));
  CHECK(angle(P, Q) == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("spectral angle matches brute-force sup over sampled unit vectors") {
  Rng rng(1234);
  for (int rep = 0; rep < 20; ++rep) {
    const Index n = 3 + static_cast<Index>(rng.below(4));
    const Subspace P = random_subspace(rng, n, 2);
    const Subspace Q = random_subspace(rng, n, 1 + static_cast<Index>(rng.below(n - 1)));
    double sup = 0.0;
    for (int i = 0; i < 100000; ++i) {
      const double t = i * 6.283185307179586 / 100000.0;
      const Vec lambda = P.frame().col(0) * std::cos(t) + P.frame().col(1) * std::sin(t);
      sup = std::max(sup, (lambda - Q.project(lambda)).norm());
    }
    CHECK(std::abs(sup - angle(P, Q)) < 1e-2);
  }
}

TEST_CASE("delta symmetry for equal dimensions and triangle inequality") {
  Rng rng(99);
  for (int rep = 0; rep < 300; ++rep) {
    const Index n = 2 + static_cast<Index>(rng.below(7));
    const Index d = 1 + static_cast<Index>(rng.below(n));
    const Subspace P = random_subspace(rng, n, d);
    const Subspace Q = random_subspace(rng, n, d);
    CHECK(std::abs(angle(P, Q) - angle(Q, P)) <= 1e-9);
  }
  for (int rep = 0; rep < 300; ++rep) {
    const Index n = 3 + static_cast<Index>(rng.below(6));
    const Index dt = 1 + static_cast<Index>(rng.below(n - 2));
    const Index dp = dt + static_cast<Index>(rng.below(n - 1 - dt));
    const Index dq = dp + static_cast<Index>(rng.below(n - dp));
    const Subspace T = random_subspace(rng, n, dt);
    const Subspace P = random_subspace(rng, n, dp);
    const Subspace Q = random_subspace(rng, n, dq);
    CHECK(angle(T, Q) <= angle(T, P) + angle(P, Q) + 1e-9);
  }
}

TEST_CASE("zero subspace convention") {
  const Subspace zero(4);
  Rng rng(3);
  const Subspace Q = random_subspace(rng, 4, 2);
  CHECK(angle(zero, Q) == 0.0);
  CHECK(angle(Q, zero) == doctest::Approx(1.0));
}

TEST_CASE("grassmann limit of subspace sequences") {
  // constant sequence
  Mat axis(3, 1);
  axis << 1, 0, 0;
  const Subspace x_axis = Subspace::from_orthonormal(axis);
  std::vector<Subspace> constant(6, x_axis);
  const GrassmannLimit gl = grassmann_limit(constant, 1e-9);
  CHECK(gl.converged);
  CHECK(angle(gl.limit, x_axis) < 1e-12);

  // drifting planes span{(1,0,0),(0,1,1/n)} converge to the xy-plane
  std::vector<Subspace> drift;
  for (int n = 1; n <= 40; ++n) {
    Mat m(3, 2);
    m << 1, 0, 0, 1, 0, 1.0 / n;
    drift.push_back(Subspace::from_span(m));
  }
  const GrassmannLimit gd = grassmann_limit(drift, 0.05);
  CHECK(gd.converged);
  Mat xy(3, 2);
  xy << 1, 0, 0, 1, 0, 0;
  CHECK(angle(gd.limit, Subspace::from_orthonormal(xy)) < 0.03);

  // alternating axes never become Cauchy
  Mat ay(3, 1);
  ay << 0, 1, 0;
  std::vector<Subspace> alternating;
  for (int n = 0; n < 16; ++n)
    alternating.push_back(n % 2 ? Subspace::from_orthonormal(ay) : x_axis);
  CHECK_FALSE(grassmann_limit(alternating, 0.5).converged);

  // mixed dimensions are rejected
  std::vector<Subspace> mixed = {x_axis, Subspace::from_orthonormal(xy)};
  CHECK_THROWS_AS(grassmann_limit(mixed, 0.1), Error);
}
