#include "strat/kuo.hpp"

namespace strat {

KuoContext::KuoContext(const PairXY& pair, const Vec& base_point)
    : pair_(&pair), y_(base_point) {
  if (pair.Y().residual(base_point) > 1e-8)
    throw Error("KuoContext: base point is not on Y (residual above 1e-8)");
  frame_ = pair.Y().tangent_space(base_point).frame();
}

namespace {

// Squared norm of the residual of v against a subspace with frame T:
// ||(I - pi_T) v||^2, evaluated as a stable two-pass projection.
double normal_component_sq(const Mat& tangent_frame, const Vec& v) {
  Vec r = v;
  for (int pass = 0; pass < 2; ++pass)
    r -= tangent_frame * (tangent_frame.transpose() * r);
  return r.squaredNorm();
}

}  // namespace

double KuoContext::p_a(const Subspace& tangent_at_x) const {
  double sum = 0.0;
  for (Index i = 0; i < frame_.cols(); ++i)
    sum += normal_component_sq(tangent_at_x.frame(), frame_.col(i));
  return sum;
}

double KuoContext::p_a(const Vec& x) const { return p_a(pair_->X().tangent_space(x)); }

Vec KuoContext::secant(const Vec& x) const {
  const Vec proj = pair_->Y().nearest_point(x);
  const Vec d = x - proj;
  const double norm = d.norm();
  if (norm <= 1e-12)
    throw Error("p_b': point is within 1e-12 of Y, secant direction undefined");
  return d / norm;
}

double KuoContext::p_b_prime(const Vec& x, const Subspace& tangent_at_x) const {
  return normal_component_sq(tangent_at_x.frame(), secant(x));
}

double KuoContext::p_b_prime(const Vec& x) const {
  return p_b_prime(x, pair_->X().tangent_space(x));
}

double KuoContext::p_b(const Vec& x, const Subspace& tangent_at_x) const {
  // fixed evaluation order: p_a first, then the secant term
  return p_a(tangent_at_x) + p_b_prime(x, tangent_at_x);
}

double KuoContext::p_b(const Vec& x) const { return p_b(x, pair_->X().tangent_space(x)); }

}  // namespace strat
