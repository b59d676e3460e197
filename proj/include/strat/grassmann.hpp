#ifndef STRAT_GRASSMANN_HPP
#define STRAT_GRASSMANN_HPP

#include "strat/types.hpp"

#include <span>

namespace strat {

// Linear subspace of R^n held as an orthonormal frame (one column per
// dimension; zero columns encode the zero subspace).
class Subspace {
 public:
  explicit Subspace(Index ambient_dim) : frame_(Mat::Zero(ambient_dim, 0)) {}

  // Orthonormalizes `spanning` by modified Gram-Schmidt with one
  // re-orthogonalization pass; near-dependent columns are dropped.
  static Subspace from_span(const Mat& spanning);

  // `frame` must already satisfy frame^T frame = I within 1e-10.
  static Subspace from_orthonormal(Mat frame);

  static Subspace full(Index ambient_dim);

  Index ambient_dim() const { return frame_.rows(); }
  Index dim() const { return frame_.cols(); }
  const Mat& frame() const { return frame_; }

  Vec project(const Vec& v) const;
  Subspace orthogonal_complement() const;
  bool contains(const Vec& v, double tol = 1e-9) const;

 private:
  Subspace() = default;
  Mat frame_;
};

// The angle delta(P, Q) = sup over unit vectors of P of ||v - proj_Q(v)||:
// the sine of the largest principal angle, in [0,1]. Asymmetric in general;
// delta from the zero subspace is 0 by convention.
double angle(const Subspace& P, const Subspace& Q);

double symmetric_angle(const Subspace& P, const Subspace& Q);

struct GrassmannLimit {
  Subspace limit;
  bool converged = false;
  double max_tail_gap = 0.0;  // largest pairwise delta inside the window
};

// Cauchy test over the trailing quarter of the sequence (at least 4
// elements when available); the limit estimate is the final frame.
GrassmannLimit grassmann_limit(std::span<const Subspace> seq, double tol);

// Modified Gram-Schmidt with re-orthogonalization; returns an orthonormal
// basis of the column space (may have fewer columns than the input).
Mat orthonormalize(const Mat& columns, double drop_tol = 1e-12);

}  // namespace strat

#endif
