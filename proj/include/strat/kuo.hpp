#ifndef STRAT_KUO_HPP
#define STRAT_KUO_HPP

#include "strat/strata.hpp"

namespace strat {

// Frame data for evaluating the Kuo functions of a pair at a base point:
// y on Y together with an orthonormal basis e_1..e_k of T_yY.
class KuoContext {
 public:
  KuoContext(const PairXY& pair, const Vec& base_point);

  const PairXY& pair() const { return *pair_; }
  const Vec& base_point() const { return y_; }
  const Mat& frame() const { return frame_; }  // ambient x k
  Index k() const { return frame_.cols(); }

  // p_a(x) = sum_i || pi_{N_xX}(e_i) ||^2, in [0, k]. The normal space
  // N_xX is the orthogonal complement of T_xX.
  double p_a(const Vec& x) const;
  double p_a(const Subspace& tangent_at_x) const;

  // p_b'(x) = || pi_{N_xX}(p(x)) ||^2 with p(x) the unit secant
  // (x - pi_Y(x)) / ||x - pi_Y(x)||, in [0, 1].
  double p_b_prime(const Vec& x) const;
  double p_b_prime(const Vec& x, const Subspace& tangent_at_x) const;

  // p_b = p_a + p_b', in [0, k+1].
  double p_b(const Vec& x) const;
  double p_b(const Vec& x, const Subspace& tangent_at_x) const;

  // Unit secant direction p(x); throws if x is within 1e-12 of Y.
  Vec secant(const Vec& x) const;

 private:
  const PairXY* pair_;
  Vec y_;
  Mat frame_;
};

}  // namespace strat

#endif
