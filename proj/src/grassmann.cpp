#include "strat/grassmann.hpp"

#include <Eigen/SVD>

#include <algorithm>

namespace strat {

Mat orthonormalize(const Mat& columns, double drop_tol) {
  const Index n = columns.rows();
  Mat q(n, columns.cols());
  Index kept = 0;
  for (Index j = 0; j < columns.cols(); ++j) {
    Vec v = columns.col(j);
    const double original = v.norm();
    // two MGS passes; the second repairs cancellation in the first
    for (int pass = 0; pass < 2; ++pass)
      for (Index i = 0; i < kept; ++i) v -= q.col(i).dot(v) * q.col(i);
    const double norm = v.norm();
    // dependence is judged relative to the column's own norm, so badly
    // scaled but independent columns survive (pinched-chart Jacobians)
    if (norm <= drop_tol * original || original == 0.0) continue;
    q.col(kept++) = v / norm;
  }
  return q.leftCols(kept);
}

Subspace Subspace::from_span(const Mat& spanning) {
  Subspace s;
  s.frame_ = orthonormalize(spanning);
  return s;
}

Subspace Subspace::from_orthonormal(Mat frame) {
  if (frame.cols() > 0) {
    const Mat gram = frame.transpose() * frame;
    const double defect =
        (gram - Mat::Identity(frame.cols(), frame.cols())).cwiseAbs().maxCoeff();
    if (defect > 1e-10)
      throw Error("Subspace: frame is not orthonormal (defect " + format_double(defect) + ")");
  }
  Subspace s;
  s.frame_ = std::move(frame);
  return s;
}

Subspace Subspace::full(Index ambient_dim) {
  Subspace s;
  s.frame_ = Mat::Identity(ambient_dim, ambient_dim);
  return s;
}

Vec Subspace::project(const Vec& v) const {
  if (v.size() != ambient_dim())
    throw Error("Subspace::project: vector length " + std::to_string(v.size()) +
                " does not match ambient dimension " + std::to_string(ambient_dim()));
  if (dim() == 0) return Vec::Zero(ambient_dim());
  return frame_ * (frame_.transpose() * v);
}

Subspace Subspace::orthogonal_complement() const {
  const Index n = ambient_dim();
  const Index k = dim();
  Mat candidates(n, k + n);
  candidates.leftCols(k) = frame_;
  candidates.rightCols(n) = Mat::Identity(n, n);
  Mat q = orthonormalize(candidates, 1e-10);
  // the first k columns reproduce this subspace; the rest span the complement
  Subspace s;
  s.frame_ = q.rightCols(q.cols() - k);
  if (s.frame_.cols() != n - k)
    throw Error("orthogonal_complement: rank bookkeeping failed");
  return s;
}

bool Subspace::contains(const Vec& v, double tol) const {
  const double norm = v.norm();
  if (norm < 1e-300) return true;
  return (v - project(v)).norm() <= tol * norm;
}

double angle(const Subspace& P, const Subspace& Q) {
  if (P.ambient_dim() != Q.ambient_dim())
    throw Error("angle: ambient dimensions differ");
  if (P.dim() == 0) return 0.0;  // dim-0 convention
  // residual R = (I - pi_Q) P has operator norm = sin of the largest
  // principal angle; singular values of R are clipped into [0,1]
  Mat residual = P.frame();
  if (Q.dim() > 0) residual -= Q.frame() * (Q.frame().transpose() * P.frame());
  Eigen::JacobiSVD<Mat> svd(residual);
  const double s = svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
  return std::min(1.0, std::max(0.0, s));
}

double symmetric_angle(const Subspace& P, const Subspace& Q) {
  return std::max(angle(P, Q), angle(Q, P));
}

GrassmannLimit grassmann_limit(std::span<const Subspace> seq, double tol) {
  if (seq.empty()) throw Error("grassmann_limit: empty sequence");
  const Index dim = seq.front().dim();
  const Index ambient = seq.front().ambient_dim();
  for (const Subspace& s : seq)
    if (s.dim() != dim || s.ambient_dim() != ambient)
      throw Error("grassmann_limit: mixed subspace dimensions");
  GrassmannLimit out{seq.back(), true, 0.0};
  const std::size_t window = std::min(seq.size(), std::max<std::size_t>(4, seq.size() / 4));
  const std::size_t start = seq.size() - window;
  for (std::size_t i = start; i < seq.size(); ++i)
    for (std::size_t j = i + 1; j < seq.size(); ++j)
      out.max_tail_gap = std::max(out.max_tail_gap, angle(seq[i], seq[j]));
  out.converged = out.max_tail_gap < tol;
  return out;
}

}  // namespace strat
