#include "strat/strata.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace strat {

// ---------------------------------------------------------------------------
// Box

Box::Box(Vec lo_, Vec hi_) : lo(std::move(lo_)), hi(std::move(hi_)) {
  if (lo.size() != hi.size()) throw Error("Box: lo/hi length mismatch");
  for (Index i = 0; i < lo.size(); ++i)
    if (!(lo[i] <= hi[i])) throw Error("Box: lo > hi");
  lo_open.assign(static_cast<std::size_t>(lo.size()), false);
  hi_open.assign(static_cast<std::size_t>(lo.size()), false);
}

Box Box::cube(Index dim, double a, double b) {
  return Box(Vec::Constant(dim, a), Vec::Constant(dim, b));
}

bool Box::contains(const Vec& u, double tol) const {
  if (u.size() != dim()) return false;
  for (Index i = 0; i < dim(); ++i) {
    if (lo_open[i] ? (u[i] <= lo[i] - tol) : (u[i] < lo[i] - tol)) return false;
    if (hi_open[i] ? (u[i] >= hi[i] + tol) : (u[i] > hi[i] + tol)) return false;
  }
  return true;
}

Vec Box::clamp_inside(Vec u, double rel_inset) const {
  for (Index i = 0; i < dim(); ++i) {
    const double inset = rel_inset * std::max(hi[i] - lo[i], 1e-3);
    const double a = lo_open[i] ? lo[i] + inset : lo[i];
    const double b = hi_open[i] ? hi[i] - inset : hi[i];
    u[i] = std::min(b, std::max(a, u[i]));
  }
  return u;
}

double Box::volume() const {
  double v = 1.0;
  for (Index i = 0; i < dim(); ++i) v *= (hi[i] - lo[i]);
  return v;
}

Index Box::longest_edge() const {
  Index best = 0;
  for (Index i = 1; i < dim(); ++i)
    if (hi[i] - lo[i] > hi[best] - lo[best]) best = i;
  return best;
}

std::pair<Box, Box> Box::split(Index axis) const {
  const double mid = 0.5 * (lo[axis] + hi[axis]);
  Box lower = *this, upper = *this;
  lower.hi[axis] = mid;
  lower.hi_open[axis] = false;  // shared face belongs to the lower piece
  upper.lo[axis] = mid;
  upper.lo_open[axis] = true;
  return {lower, upper};
}

bool Box::disjoint(const Box& other) const {
  for (Index i = 0; i < dim(); ++i) {
    const double a1 = lo[i], b1 = hi[i], a2 = other.lo[i], b2 = other.hi[i];
    if (b1 < a2 || b2 < a1) return true;
    if (b1 == a2 && (hi_open[i] || other.lo_open[i])) return true;
    if (b2 == a1 && (other.hi_open[i] || lo_open[i])) return true;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Chart

Vec Chart::eval(const Vec& u) const {
  Vec x(ambient_dim());
  for (Index i = 0; i < ambient_dim(); ++i) x[i] = map[i].eval(u);
  return x;
}

Mat Chart::jacobian(const Vec& u) const {
  Mat j(ambient_dim(), param_dim());
  Vec g;
  for (Index i = 0; i < ambient_dim(); ++i) {
    map[i].eval_with_gradient(u, g);
    j.row(i) = g.transpose();
  }
  return j;
}

bool Chart::feasible(const Vec& u, double box_tol) const {
  if (!domain.contains(u, box_tol)) return false;
  for (const Expression& h : inequalities)
    if (!(h.eval(u) > 0.0)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Stratum construction

Stratum Stratum::parametric(std::string name, Index ambient_dim, std::vector<Chart> charts) {
  if (charts.empty()) throw Error("Stratum: parametric stratum needs at least one chart");
  const Index m = charts.front().param_dim();
  for (const Chart& c : charts) {
    if (c.ambient_dim() != ambient_dim)
      throw Error("Stratum '" + name + "': chart map length != ambient dimension");
    if (c.param_dim() != m)
      throw Error("Stratum '" + name + "': charts have mixed parameter dimensions");
    for (const Expression& e : c.map)
      if (e.arity() != m) throw Error("Stratum '" + name + "': map arity mismatch");
    for (const Expression& h : c.inequalities)
      if (h.arity() != m) throw Error("Stratum '" + name + "': inequality arity mismatch");
  }
  if (m > ambient_dim) throw Error("Stratum '" + name + "': parameter dim exceeds ambient dim");
  Stratum s;
  s.name_ = std::move(name);
  s.ambient_dim_ = ambient_dim;
  s.dim_ = m;
  s.kind_ = Kind::Parametric;
  s.charts_ = std::move(charts);
  s.affine_cache_.assign(s.charts_.size(), -1);
  return s;
}

Stratum Stratum::implicit(std::string name, Index ambient_dim, ImplicitForm form) {
  if (form.equalities.empty())
    throw Error("Stratum '" + name + "': implicit stratum needs equalities");
  for (const Expression& e : form.equalities)
    if (e.arity() != ambient_dim) throw Error("Stratum '" + name + "': equality arity mismatch");
  for (const Expression& h : form.inequalities)
    if (h.arity() != ambient_dim) throw Error("Stratum '" + name + "': inequality arity mismatch");
  const Index k = static_cast<Index>(form.equalities.size());
  if (k >= ambient_dim) throw Error("Stratum '" + name + "': too many equalities");
  if (form.sampling_box.dim() == 0) form.sampling_box = Box::cube(ambient_dim, -3.0, 3.0);
  if (form.sampling_box.dim() != ambient_dim)
    throw Error("Stratum '" + name + "': sampling box dimension mismatch");
  Stratum s;
  s.name_ = std::move(name);
  s.ambient_dim_ = ambient_dim;
  s.dim_ = ambient_dim - k;
  s.kind_ = Kind::Implicit;
  s.implicit_ = std::move(form);
  return s;
}

Stratum Stratum::point(std::string name, const Vec& location) {
  Chart c;
  for (Index i = 0; i < location.size(); ++i)
    c.map.push_back(Expression::constant(location[i]));
  c.domain = Box::empty0();
  c.label = "point";
  return parametric(std::move(name), location.size(), {std::move(c)});
}

// ---------------------------------------------------------------------------
// Tangent spaces

Subspace Stratum::tangent_space_chart(std::size_t chart, const Vec& u) const {
  if (kind_ != Kind::Parametric) throw Error("tangent_space_chart: not a parametric stratum");
  const Chart& c = charts_.at(chart);
  const Mat j = c.jacobian(u);
  Mat q = orthonormalize(j, 1e-7);
  if (q.cols() != dim_)
    throw Error("Stratum '" + name_ + "': rank-deficient Jacobian (non-immersion point)");
  return Subspace::from_orthonormal(std::move(q));
}

Subspace Stratum::tangent_space(const Vec& x) const {
  if (x.size() != ambient_dim_) throw Error("tangent_space: ambient dimension mismatch");
  if (kind_ == Kind::Parametric) {
    const Near n = nearest(x);
    if (n.distance > 1e-7)
      throw Error("Stratum '" + name_ + "': tangent_space at off-set point (distance " +
                  format_double(n.distance) + ")");
    return tangent_space_chart(static_cast<std::size_t>(n.chart), n.param);
  }
  for (const Expression& e : implicit_.equalities)
    if (std::abs(e.eval(x)) > 1e-8)
      throw Error("Stratum '" + name_ + "': tangent_space at off-set point (residual)");
  const Index m = static_cast<Index>(implicit_.equalities.size());
  Mat grads(ambient_dim_, m);
  Vec g;
  for (Index i = 0; i < m; ++i) {
    implicit_.equalities[i].eval_with_gradient(x, g);
    grads.col(i) = g;
  }
  Mat q = orthonormalize(grads, 1e-7);
  if (q.cols() != m)
    throw Error("Stratum '" + name_ + "': rank-deficient equality Jacobian (non-regular point)");
  return Subspace::from_orthonormal(std::move(q)).orthogonal_complement();
}

// ---------------------------------------------------------------------------
// Sampling

namespace {

// Damped Gauss-Newton projection onto {h = 0}. Returns true when the
// residual drops below `target`.
bool project_to_zero_set(const std::vector<Expression>& eqs, Vec& x, double target, int max_iter) {
  const Index m = static_cast<Index>(eqs.size());
  const Index n = x.size();
  Vec h(m), g;
  Mat j(m, n);
  auto residual = [&](const Vec& p, Vec& out) {
    for (Index i = 0; i < m; ++i) out[i] = eqs[i].eval(p);
    return out.norm();
  };
  double r = residual(x, h);
  for (int it = 0; it < max_iter; ++it) {
    if (r < target) return true;
    for (Index i = 0; i < m; ++i) {
      eqs[i].eval_with_gradient(x, g);
      j.row(i) = g.transpose();
    }
    const Vec dx = j.completeOrthogonalDecomposition().solve(-h);
    if (!dx.allFinite()) return false;
    double alpha = 1.0;
    bool moved = false;
    Vec h_new(m);
    for (int halve = 0; halve < 25; ++halve) {
      Vec x_new = x + alpha * dx;
      const double r_new = residual(x_new, h_new);
      if (r_new < r) {
        x = x_new;
        h = h_new;
        r = r_new;
        moved = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!moved) return r < target;
  }
  return r < target;
}

Vec clamp_to_box(const Box& box, Vec u) {
  for (Index i = 0; i < box.dim(); ++i) u[i] = std::min(box.hi[i], std::max(box.lo[i], u[i]));
  return u;
}

}  // namespace

Stratum::Sample Stratum::sample(int n, std::uint64_t seed) const {
  if (n < 1) throw Error("sample: need n >= 1");
  Sample out;
  std::vector<Vec> pts, params;
  std::vector<int> charts;
  bool truncated = false;

  if (kind_ == Kind::Parametric) {
    std::vector<double> cumulative(charts_.size());
    double total = 0.0;
    for (std::size_t c = 0; c < charts_.size(); ++c) {
      total += std::max(charts_[c].domain.volume(), 1e-300);
      cumulative[c] = total;
    }
    for (int i = 0; i < n; ++i) {
      Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
      bool accepted = false;
      for (int attempt = 0; attempt < 256 && !accepted; ++attempt) {
        const double pick = rng.uniform() * total;
        std::size_t c = 0;
        while (c + 1 < charts_.size() && pick > cumulative[c]) ++c;
        const Chart& chart = charts_[c];
        Vec u(chart.param_dim());
        for (Index d = 0; d < u.size(); ++d)
          u[d] = rng.uniform(chart.domain.lo[d], chart.domain.hi[d]);
        if (!chart.feasible(u)) continue;
        pts.push_back(chart.eval(u));
        params.push_back(u);
        charts.push_back(static_cast<int>(c));
        accepted = true;
      }
      if (!accepted) truncated = true;
    }
  } else {
    const Box& box = implicit_.sampling_box;
    for (int i = 0; i < n; ++i) {
      Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
      bool accepted = false;
      for (int attempt = 0; attempt < 64 && !accepted; ++attempt) {
        Vec x(ambient_dim_);
        for (Index d = 0; d < ambient_dim_; ++d) x[d] = rng.uniform(box.lo[d], box.hi[d]);
        if (!project_to_zero_set(implicit_.equalities, x, 1e-10, 50)) continue;
        bool ok = true;
        for (const Expression& h : implicit_.inequalities)
          if (!(h.eval(x) > 0.0)) { ok = false; break; }
        if (!ok) continue;
        pts.push_back(x);
        charts.push_back(-1);
        accepted = true;
      }
      if (!accepted) truncated = true;
    }
  }

  out.points.resize(ambient_dim_, static_cast<Index>(pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) out.points.col(static_cast<Index>(i)) = pts[i];
  if (!params.empty()) {
    out.params.resize(dim_, static_cast<Index>(params.size()));
    for (std::size_t i = 0; i < params.size(); ++i)
      out.params.col(static_cast<Index>(i)) = params[i];
  }
  out.chart = std::move(charts);
  out.truncated = truncated;
  return out;
}

namespace {

std::vector<double> axis_grid(double lo, double hi, bool lo_open, bool hi_open, int k) {
  std::vector<double> out;
  if (k < 1) return out;
  if (lo == hi) {
    out.push_back(lo);
    return out;
  }
  if (!lo_open && !hi_open) {
    if (k == 1) {
      out.push_back(0.5 * (lo + hi));
    } else {
      if (k % 2 == 0) ++k;  // odd count => midpoint lands on the grid
      for (int i = 0; i < k; ++i) out.push_back(lo + (hi - lo) * i / (k - 1));
    }
  } else if (!lo_open && hi_open) {
    for (int i = 0; i < k; ++i) out.push_back(lo + (hi - lo) * i / k);
  } else if (lo_open && !hi_open) {
    for (int i = 0; i < k; ++i) out.push_back(lo + (hi - lo) * (i + 1) / k);
  } else {
    for (int i = 0; i < k; ++i) out.push_back(lo + (hi - lo) * (i + 1) / (k + 1));
  }
  return out;
}

}  // namespace

Stratum::Sample Stratum::grid_sample(int n) const {
  if (n < 1) throw Error("grid_sample: need n >= 1");
  if (kind_ == Kind::Implicit) return sample(n, 0x9e3779b9ULL);

  Sample out;
  std::vector<Vec> pts, params;
  std::vector<int> chart_ids;

  const std::size_t nc = charts_.size();
  // volume-proportional allocation, at least one point per chart while n allows
  std::vector<double> vol(nc);
  double total = 0.0;
  for (std::size_t c = 0; c < nc; ++c) {
    vol[c] = std::max(charts_[c].domain.volume(), 1e-300);
    total += vol[c];
  }
  std::vector<int> alloc(nc, 0);
  if (static_cast<std::size_t>(n) < nc) {
    const double stride = static_cast<double>(nc) / n;
    for (int i = 0; i < n; ++i) alloc[static_cast<std::size_t>(i * stride)] = 1;
  } else {
    int assigned = 0;
    for (std::size_t c = 0; c < nc; ++c) {
      alloc[c] = std::max(1, static_cast<int>(std::floor(n * vol[c] / total)));
      assigned += alloc[c];
    }
    std::size_t c = 0;
    while (assigned < n) {  // distribute the remainder round-robin
      ++alloc[c % nc];
      ++assigned;
      ++c;
    }
  }

  for (std::size_t c = 0; c < nc; ++c) {
    if (alloc[c] == 0) continue;
    const Chart& chart = charts_[c];
    const Index m = chart.param_dim();
    if (m == 0) {
      Vec u(0);
      pts.push_back(chart.eval(u));
      params.push_back(u);
      chart_ids.push_back(static_cast<int>(c));
      continue;
    }
    const int per_dim = std::max(1, static_cast<int>(std::llround(
                                         std::pow(static_cast<double>(alloc[c]), 1.0 / m))));
    std::vector<std::vector<double>> axes;
    for (Index d = 0; d < m; ++d)
      axes.push_back(axis_grid(chart.domain.lo[d], chart.domain.hi[d], chart.domain.lo_open[d],
                               chart.domain.hi_open[d], per_dim));
    std::vector<std::size_t> idx(m, 0);
    for (;;) {
      Vec u(m);
      for (Index d = 0; d < m; ++d) u[d] = axes[d][idx[d]];
      if (chart.feasible(u)) {
        pts.push_back(chart.eval(u));
        params.push_back(u);
        chart_ids.push_back(static_cast<int>(c));
      }
      Index d = 0;
      while (d < m) {
        if (++idx[d] < axes[d].size()) break;
        idx[d] = 0;
        ++d;
      }
      if (d == m) break;
    }
  }

  out.points.resize(ambient_dim_, static_cast<Index>(pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) out.points.col(static_cast<Index>(i)) = pts[i];
  out.params.resize(dim_, static_cast<Index>(params.size()));
  for (std::size_t i = 0; i < params.size(); ++i)
    out.params.col(static_cast<Index>(i)) = params[i];
  out.chart = std::move(chart_ids);
  return out;
}

// ---------------------------------------------------------------------------
// Nearest point

bool Stratum::chart_affine(std::size_t c) const {
  if (affine_cache_[c] >= 0) return affine_cache_[c] == 1;
  const Chart& chart = charts_[c];
  if (chart.param_dim() == 0) {
    affine_cache_[c] = 1;
    return true;
  }
  const Vec center = chart.domain.center();
  const Mat j0 = chart.jacobian(center);
  bool affine = true;
  for (int probe = 0; probe < 3 && affine; ++probe) {
    Rng rng(derive_seed(0xAFF1E, probe));
    Vec u(chart.param_dim());
    for (Index d = 0; d < u.size(); ++d) u[d] = rng.uniform(chart.domain.lo[d], chart.domain.hi[d]);
    const Mat j = chart.jacobian(u);
    if ((j - j0).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + j0.cwiseAbs().maxCoeff())) affine = false;
  }
  affine_cache_[c] = affine ? 1 : 0;
  return affine;
}

Stratum::Near Stratum::nearest_on_chart(std::size_t c, const Vec& q) const {
  const Chart& chart = charts_.at(c);
  const Index m = chart.param_dim();
  Near best;
  best.chart = static_cast<int>(c);

  if (m == 0) {
    best.param = Vec(0);
    best.point = chart.eval(best.param);
    best.distance = (best.point - q).norm();
    return best;
  }

  auto objective = [&](const Vec& u) { return (chart.eval(u) - q).norm(); };

  std::vector<Vec> starts;
  if (chart_affine(c)) {
    const Vec u0 = chart.domain.center();
    const Mat j = chart.jacobian(u0);
    const Vec du = j.completeOrthogonalDecomposition().solve(q - chart.eval(u0));
    Vec u = u0 + du;
    const bool inside = chart.domain.contains(u, 1e-12);
    u = clamp_to_box(chart.domain, u);
    if (inside && chart.feasible(u, 1e-12)) {
      best.param = u;
      best.point = chart.eval(u);
      best.distance = (best.point - q).norm();
      return best;  // exact orthogonal projection
    }
    starts.push_back(u);
  }

  // coarse scan + low-discrepancy starts
  {
    const int k = (m == 1) ? 17 : 5;
    std::vector<std::vector<double>> axes;
    for (Index d = 0; d < m; ++d)
      axes.push_back(axis_grid(chart.domain.lo[d], chart.domain.hi[d], false, false, k));
    std::vector<std::size_t> idx(m, 0);
    std::vector<std::pair<double, Vec>> scored;
    for (;;) {
      Vec u(m);
      for (Index d = 0; d < m; ++d) u[d] = axes[d][idx[d]];
      scored.emplace_back(objective(u), u);
      Index d = 0;
      while (d < m) {
        if (++idx[d] < axes[d].size()) break;
        idx[d] = 0;
        ++d;
      }
      if (d == m) break;
    }
    std::sort(scored.begin(), scored.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 0; i < scored.size() && starts.size() < 4; ++i)
      starts.push_back(scored[i].second);
  }
  static const std::uint64_t primes[] = {2, 3, 5, 7, 11, 13};
  for (std::uint64_t i = 0; starts.size() < 8; ++i) {
    Vec u(m);
    for (Index d = 0; d < m; ++d)
      u[d] = chart.domain.lo[d] +
             (chart.domain.hi[d] - chart.domain.lo[d]) * halton(i, primes[d % 6]);
    starts.push_back(u);
  }

  best.distance = std::numeric_limits<double>::infinity();
  for (Vec u : starts) {
    u = clamp_to_box(chart.domain, u);
    double f = objective(u);
    for (int it = 0; it < 60; ++it) {
      const Vec r = chart.eval(u) - q;
      const Mat j = chart.jacobian(u);
      Vec du = j.completeOrthogonalDecomposition().solve(-r);
      if (!du.allFinite() || du.norm() < 1e-14) break;
      double alpha = 1.0;
      bool moved = false;
      for (int halve = 0; halve < 30; ++halve) {
        Vec u_new = clamp_to_box(chart.domain, u + alpha * du);
        const double f_new = objective(u_new);
        if (f_new < f - 1e-16) {
          u = u_new;
          f = f_new;
          moved = true;
          break;
        }
        alpha *= 0.5;
      }
      if (!moved) break;
    }
    if (f < best.distance) {
      best.distance = f;
      best.param = u;
      best.point = chart.eval(u);
    }
  }
  return best;
}

Stratum::Near Stratum::nearest(const Vec& q) const {
  if (q.size() != ambient_dim_) throw Error("nearest: ambient dimension mismatch");
  if (kind_ == Kind::Parametric) {
    Near best;
    best.distance = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < charts_.size(); ++c) {
      Near n = nearest_on_chart(c, q);
      if (n.distance < best.distance) best = n;
    }
    if (!std::isfinite(best.distance)) throw Error("nearest: no start converged");
    return best;
  }

  // implicit: project, then alternate tangential steps toward q with
  // re-projection
  Near best;
  best.distance = std::numeric_limits<double>::infinity();
  const double scale =
      std::max(1.0, (implicit_.sampling_box.hi - implicit_.sampling_box.lo).norm() * 0.05);
  std::vector<Vec> starts = {q};
  for (Index d = 0; d < std::min<Index>(3, ambient_dim_); ++d) {
    Vec off = Vec::Zero(ambient_dim_);
    off[d] = 0.1 * scale;
    starts.push_back(q + off);
    starts.push_back(q - off);
  }
  for (Vec x : starts) {
    if (!project_to_zero_set(implicit_.equalities, x, 1e-11, 60)) continue;
    double dist = (x - q).norm();
    for (int it = 0; it < 50; ++it) {
      Subspace tangent(ambient_dim_);
      try {
        tangent = tangent_space(x);
      } catch (const Error&) {
        break;
      }
      Vec step = tangent.project(q - x);
      if (step.norm() < 1e-13 * (1.0 + dist)) break;
      bool moved = false;
      double alpha = 1.0;
      for (int halve = 0; halve < 20; ++halve) {
        Vec x_new = x + alpha * step;
        if (project_to_zero_set(implicit_.equalities, x_new, 1e-11, 30)) {
          const double d_new = (x_new - q).norm();
          if (d_new < dist - 1e-15) {
            x = x_new;
            dist = d_new;
            moved = true;
            break;
          }
        }
        alpha *= 0.5;
      }
      if (!moved) break;
    }
    if (dist < best.distance) {
      best.distance = dist;
      best.point = x;
      best.chart = -1;
    }
  }
  if (!std::isfinite(best.distance)) throw Error("nearest: no start converged");
  return best;
}

double Stratum::residual(const Vec& x) const {
  if (kind_ == Kind::Implicit) {
    double r = 0.0;
    for (const Expression& e : implicit_.equalities) r = std::max(r, std::abs(e.eval(x)));
    for (const Expression& h : implicit_.inequalities)
      if (!(h.eval(x) > 0.0)) r = std::max(r, 1.0);
    return r;
  }
  return nearest(x).distance;
}

bool Stratum::contains(const Vec& x, double tol) const { return residual(x) < tol; }

void Stratum::verify(int n_samples, std::uint64_t seed) const {
  const Sample s = sample(n_samples, seed);
  for (Index i = 0; i < s.points.cols(); ++i) {
    if (kind_ == Kind::Parametric) {
      tangent_space_chart(static_cast<std::size_t>(s.chart[static_cast<std::size_t>(i)]),
                          s.params.col(i));
    } else {
      tangent_space(s.points.col(i));
      if (residual(s.points.col(i)) > 1e-8)
        throw Error("Stratum '" + name_ + "': sample residual above 1e-8");
    }
  }
}

// ---------------------------------------------------------------------------
// PairXY

PairXY::PairXY(Stratum x, Stratum y) : x_(std::move(x)), y_(std::move(y)) {
  if (x_.ambient_dim() != y_.ambient_dim()) throw Error("PairXY: ambient dimensions differ");
  if (!(y_.dim() < x_.dim()))
    throw Error("PairXY: need dim Y < dim X (got " + std::to_string(y_.dim()) + " vs " +
                std::to_string(x_.dim()) + ")");
}

PairValidation PairXY::validate(int n_samples, double tol) const {
  PairValidation v;
  Stratum::Sample ys = y_.grid_sample(n_samples);
  for (Index i = 0; i < ys.points.cols(); ++i) {
    const double gap = x_.nearest(ys.points.col(i)).distance;
    v.max_gap = std::max(v.max_gap, gap);
  }
  v.ok = v.max_gap < tol;
  if (!v.ok)
    v.message = "pair (" + x_.name() + ", " + y_.name() +
                "): sampled Y point at distance " + format_double(v.max_gap) +
                " from closure(X)";
  return v;
}

}  // namespace strat
