#include "strat/sequence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace strat {

double GoodSequence::tail(const std::vector<double>& trace) const {
  if (trace.empty()) return std::numeric_limits<double>::quiet_NaN();
  const std::size_t w = std::min(trace.size(), std::max<std::size_t>(4, trace.size() / 4));
  double sum = 0.0;
  for (std::size_t i = trace.size() - w; i < trace.size(); ++i) sum += trace[i];
  return sum / static_cast<double>(w);
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Warm-started nearest-point projection onto Y. Sequence points move
// slowly, so a short Gauss-Newton polish from the previous parameter is
// exact enough; the first call per cascade does the full search.
class YProjector {
 public:
  explicit YProjector(const Stratum& y) : y_(&y) {}

  Vec project(const Vec& x) {
    if (y_->kind() == Stratum::Kind::Implicit) return y_->nearest_point(x);
    if (!warm_ready_) {
      const Stratum::Near n = y_->nearest(x);
      warm_.assign(y_->charts().size(), Vec());
      warm_[static_cast<std::size_t>(n.chart)] = n.param;
      warm_ready_ = true;
      return n.point;
    }
    double best_dist = kInf;
    Vec best_point;
    std::size_t best_chart = 0;
    Vec best_param;
    for (std::size_t c = 0; c < y_->charts().size(); ++c) {
      const Chart& chart = y_->charts()[c];
      Vec u = warm_[c].size() ? warm_[c] : chart.domain.center();
      double f = (chart.eval(u) - x).norm();
      for (int it = 0; it < 20; ++it) {
        const Vec r = chart.eval(u) - x;
        const Mat j = chart.jacobian(u);
        Vec du = j.completeOrthogonalDecomposition().solve(-r);
        if (!du.allFinite() || du.norm() < 1e-14) break;
        double alpha = 1.0;
        bool moved = false;
        for (int halve = 0; halve < 20; ++halve) {
          Vec u_new = u + alpha * du;
          for (Index d = 0; d < u_new.size(); ++d)
            u_new[d] = std::min(chart.domain.hi[d], std::max(chart.domain.lo[d], u_new[d]));
          const double f_new = (chart.eval(u_new) - x).norm();
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
      warm_[c] = u;
      if (f < best_dist) {
        best_dist = f;
        best_chart = c;
        best_param = u;
        best_point = chart.eval(u);
      }
    }
    (void)best_chart;
    (void)best_param;
    return best_point;
  }

 private:
  const Stratum* y_;
  std::vector<Vec> warm_;
  bool warm_ready_ = false;
};

struct ShellWindow {
  double lo, hi;
};

// 1 - <unit secant, dir>; zero iff the secant points exactly along dir.
double alignment_term(const Vec& x, const Vec& y, const Vec& dir) {
  const Vec d = x - y;
  const double n = d.norm();
  if (n < 1e-300) return 2.0;
  return 1.0 - d.dot(dir) / n;
}

// Zero inside a band strictly interior to [lo, hi] and steep outside it,
// so optima never rest outside the true shell window: the penalty slope at
// the window boundary (~512 ln 1.06 / dist) dominates the alignment slope
// (~1.5 / dist) at every scale.
double shell_penalty(double dist, const ShellWindow& w) {
  if (dist <= 0.0) return 1e6;
  const double flo = w.lo * 1.06, fhi = w.hi / 1.06;
  if (dist > fhi) {
    const double t = std::log(dist / fhi);
    return 256.0 * t * t;
  }
  if (dist < flo) {
    const double t = std::log(flo / dist);
    return 256.0 * t * t;
  }
  return 0.0;
}

struct CascadeContext {
  const PairXY* pair;
  const KuoContext* kuo;
  Vec y;
  Vec dir;
  RadiusSchedule schedule;
  const SearchConfig* cfg;
  const std::function<bool(const Vec&)>* region;
  Mat y_frame;  // tangent frame of Y at y (fiber pull uses its complement)
};

double point_objective(const CascadeContext& cc, const Vec& x, const ShellWindow& w) {
  const double dist = (x - cc.y).norm();
  double obj = alignment_term(x, cc.y, cc.dir) + shell_penalty(dist, w);
  if (*cc.region && !(*cc.region)(x)) obj += 1e3;
  if (cc.cfg->fiber_weight > 0.0 && cc.y_frame.cols() > 0 && dist > 1e-300) {
    const Vec t = cc.y_frame.transpose() * (x - cc.y);
    const double ratio = t.norm() / dist;
    obj += cc.cfg->fiber_weight * ratio * ratio;
  }
  return obj;
}

// Short Gauss-Newton pull of chart point toward ambient target q,
// staying strictly inside open box faces so seeds remain feasible.
Vec gn_toward(const Chart& chart, const Vec& q, Vec u, int iters) {
  u = chart.domain.clamp_inside(std::move(u));
  double f = (chart.eval(u) - q).norm();
  for (int it = 0; it < iters; ++it) {
    const Vec r = chart.eval(u) - q;
    const Mat j = chart.jacobian(u);
    Vec du = j.completeOrthogonalDecomposition().solve(-r);
    if (!du.allFinite() || du.norm() < 1e-14) break;
    double alpha = 1.0;
    bool moved = false;
    for (int halve = 0; halve < 18; ++halve) {
      Vec u_new = chart.domain.clamp_inside(u + alpha * du);
      const double f_new = (chart.eval(u_new) - q).norm();
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
  return u;
}

struct CascadeResult {
  GoodSequence seq;
  double mean_alignment = kInf;
  bool started = false;
};

// One chart-local shell cascade for a parametric X chart.
CascadeResult cascade_parametric(const CascadeContext& cc, std::size_t chart_index,
                                 std::uint64_t seed, YProjector& proj) {
  const Stratum& X = cc.pair->X();
  const Chart& chart = X.charts()[chart_index];
  const Index m = chart.param_dim();
  CascadeResult out;
  GoodSequence& seq = out.seq;
  seq.direction_tag = cc.dir;
  seq.cone_aperture = cc.cfg->cone_aperture;
  seq.points.resize(cc.y.size(), cc.schedule.length);

  if (m == 0) return out;  // a point chart cannot host a sequence

  double prev_dist = kInf;
  Vec u;
  double align_sum = 0.0;

  for (int n = 0; n < cc.schedule.length; ++n) {
    const double r = cc.schedule.r0 * std::pow(cc.schedule.ratio, n);
    ShellWindow w{r / std::sqrt(2.0), r * std::sqrt(2.0)};
    if (prev_dist < kInf) w.hi = std::min(w.hi, 0.985 * prev_dist);
    if (w.lo >= w.hi) break;

    auto objective = [&](const Vec& p) -> double {
      if (!chart.feasible(p)) return kInf;
      return point_objective(cc, chart.eval(p), w);
    };

    // seed
    if (n == 0) {
      const Vec q0 = cc.y + r * cc.dir;
      std::vector<Vec> cands;
      {
        // coarse parameter grid, then a short pull toward the shell target
        const int k = (m == 1) ? 15 : 7;
        Vec best_u;
        double best = kInf;
        std::vector<Index> idx(m, 0);
        std::vector<std::vector<double>> axes(m);
        for (Index d = 0; d < m; ++d) {
          axes[d].resize(k);
          for (int i = 0; i < k; ++i)
            axes[d][i] = chart.domain.lo[d] +
                         (chart.domain.hi[d] - chart.domain.lo[d]) * (i + 0.5) / k;
        }
        std::vector<std::size_t> ix(m, 0);
        for (;;) {
          Vec p(m);
          for (Index d = 0; d < m; ++d) p[d] = axes[d][ix[d]];
          const double val = (chart.eval(p) - q0).norm();
          if (val < best) {
            best = val;
            best_u = p;
          }
          Index d = 0;
          while (d < m) {
            if (++ix[d] < axes[d].size()) break;
            ix[d] = 0;
            ++d;
          }
          if (d == m) break;
        }
        cands.push_back(gn_toward(chart, q0, best_u, 25));
      }
      Rng rng(derive_seed(seed, 0xC0FFEE));
      for (int s = 0; s < 6; ++s) {
        Vec p(m);
        for (Index d = 0; d < m; ++d) p[d] = rng.uniform(chart.domain.lo[d], chart.domain.hi[d]);
        cands.push_back(gn_toward(chart, q0, p, 12));
      }
      double best = kInf;
      for (const Vec& cand : cands) {
        const double val = objective(cand);
        if (val < best) {
          best = val;
          u = cand;
        }
      }
      if (!(best < kInf)) break;
    }

    // ambient-normalized per-parameter steps
    const Mat j0 = chart.jacobian(u);
    Vec h(m), h_min(m);
    for (Index d = 0; d < m; ++d) {
      const double col = j0.col(d).norm();
      const double extent = chart.domain.hi[d] - chart.domain.lo[d];
      h[d] = std::min(0.45 * r / std::max(col, 1e-12), 0.5 * extent);
      h_min[d] = 2e-3 * r / std::max(col, 1e-12);
    }

    double f = objective(u);
    int evals = 1;
    while (evals < cc.cfg->shell_eval_cap) {
      bool improved = false;
      for (Index d = 0; d < m && evals < cc.cfg->shell_eval_cap; ++d) {
        for (const double sign : {+1.0, -1.0}) {
          Vec p = u;
          p[d] += sign * h[d];
          const double val = objective(p);
          ++evals;
          if (val < f - 1e-15) {
            u = p;
            f = val;
            improved = true;
            break;
          }
        }
      }
      if (!improved) {
        bool resolved = true;
        for (Index d = 0; d < m; ++d) {
          h[d] *= 0.5;
          if (h[d] > h_min[d]) resolved = false;
        }
        if (resolved) break;
      }
    }

    if (!(f < kInf)) break;
    const Vec x = chart.eval(u);
    const double dist = (x - cc.y).norm();
    if (dist < w.lo * (1.0 - 1e-9) || dist > w.hi * (1.0 + 1e-9)) break;
    if (*cc.region && !(*cc.region)(x)) break;

    Subspace tangent(cc.y.size());
    try {
      tangent = X.tangent_space_chart(chart_index, u);
    } catch (const Error&) {
      break;
    }

    const double pa = cc.kuo->p_a(tangent);
    const Vec y_proj = proj.project(x);
    const Vec sec = x - y_proj;
    const double sec_norm = sec.norm();
    double pb = pa;
    if (sec_norm > 1e-12) {
      Vec res = sec / sec_norm;
      for (int pass = 0; pass < 2; ++pass)
        res -= tangent.frame() * (tangent.frame().transpose() * res);
      pb = pa + res.squaredNorm();
    }

    const int slot = static_cast<int>(seq.radii.size());
    seq.points.col(slot) = x;
    seq.radii.push_back(dist);
    seq.tangents.push_back(tangent);
    seq.pa_trace.push_back(pa);
    seq.pb_trace.push_back(pb);
    align_sum += alignment_term(x, cc.y, cc.dir);
    prev_dist = dist;
    out.started = true;
  }

  const int got = static_cast<int>(seq.radii.size());
  seq.points.conservativeResize(Eigen::NoChange, got);
  seq.truncated = got < cc.schedule.length;
  if (got > 0) {
    const GrassmannLimit gl =
        grassmann_limit(std::span<const Subspace>(seq.tangents.data(), seq.tangents.size()),
                        cc.cfg->grassmann_tol);
    seq.limit = gl.limit;
    seq.converged = gl.converged && !seq.truncated;
    out.mean_alignment = align_sum / got;
  }
  return out;
}

// Shell cascade on an implicit X: ambient pattern probes along the local
// tangent basis with Gauss-Newton reprojection after every step.
CascadeResult cascade_implicit(const CascadeContext& cc, std::uint64_t seed, YProjector& proj) {
  const Stratum& X = cc.pair->X();
  const auto& eqs = X.implicit_form().equalities;
  CascadeResult out;
  GoodSequence& seq = out.seq;
  seq.direction_tag = cc.dir;
  seq.cone_aperture = cc.cfg->cone_aperture;
  seq.points.resize(cc.y.size(), cc.schedule.length);
  (void)seed;

  auto reproject = [&](Vec x) -> std::optional<Vec> {
    Vec h(static_cast<Index>(eqs.size()));
    double worst = 0.0;
    for (std::size_t i = 0; i < eqs.size(); ++i) worst = std::max(worst, std::abs(eqs[i].eval(x)));
    if (worst > 1e-11) {
      Vec p = x;
      bool ok = false;
      {
        // reuse the strata projection machinery via a local GN loop
        Vec r(static_cast<Index>(eqs.size()));
        Mat j(static_cast<Index>(eqs.size()), x.size());
        Vec g;
        double rn = 0.0;
        for (std::size_t i = 0; i < eqs.size(); ++i) r[static_cast<Index>(i)] = eqs[i].eval(p);
        rn = r.norm();
        for (int it = 0; it < 40 && rn > 1e-12; ++it) {
          for (std::size_t i = 0; i < eqs.size(); ++i) {
            eqs[i].eval_with_gradient(p, g);
            j.row(static_cast<Index>(i)) = g.transpose();
          }
          Vec dx = j.completeOrthogonalDecomposition().solve(-r);
          if (!dx.allFinite()) break;
          double alpha = 1.0;
          bool moved = false;
          for (int halve = 0; halve < 20; ++halve) {
            Vec pn = p + alpha * dx;
            Vec rn2(static_cast<Index>(eqs.size()));
            for (std::size_t i = 0; i < eqs.size(); ++i)
              rn2[static_cast<Index>(i)] = eqs[i].eval(pn);
            if (rn2.norm() < rn) {
              p = pn;
              r = rn2;
              rn = rn2.norm();
              moved = true;
              break;
            }
            alpha *= 0.5;
          }
          if (!moved) break;
        }
        ok = rn < 1e-10;
      }
      if (!ok) return std::nullopt;
      x = p;
    }
    for (const Expression& hx : X.implicit_form().inequalities)
      if (!(hx.eval(x) > 0.0)) return std::nullopt;
    return x;
  };

  double prev_dist = kInf;
  Vec x;
  double align_sum = 0.0;

  for (int n = 0; n < cc.schedule.length; ++n) {
    const double r = cc.schedule.r0 * std::pow(cc.schedule.ratio, n);
    ShellWindow w{r / std::sqrt(2.0), r * std::sqrt(2.0)};
    if (prev_dist < kInf) w.hi = std::min(w.hi, 0.985 * prev_dist);
    if (w.lo >= w.hi) break;

    if (n == 0) {
      auto seeded = reproject(cc.y + r * cc.dir);
      if (!seeded) break;
      x = *seeded;
    } else {
      // pull toward the new shell along the secant
      auto pulled = reproject(cc.y + r * (x - cc.y).normalized());
      if (pulled) {
        const Vec& cand = *pulled;
        if (point_objective(cc, cand, w) < point_objective(cc, x, w)) x = cand;
      }
    }

    double f = point_objective(cc, x, w);
    int evals = 1;
    double h = 0.45 * r;
    while (evals < cc.cfg->shell_eval_cap) {
      Subspace tangent(cc.y.size());
      try {
        tangent = X.tangent_space(x);
      } catch (const Error&) {
        break;
      }
      bool improved = false;
      for (Index d = 0; d < tangent.dim() && evals < cc.cfg->shell_eval_cap; ++d) {
        for (const double sign : {+1.0, -1.0}) {
          auto probe = reproject(x + sign * h * tangent.frame().col(d));
          ++evals;
          if (!probe) continue;
          const double val = point_objective(cc, *probe, w);
          if (val < f - 1e-15) {
            x = *probe;
            f = val;
            improved = true;
            break;
          }
        }
      }
      if (!improved) {
        h *= 0.5;
        if (h < 2e-3 * r) break;
      }
    }

    const double dist = (x - cc.y).norm();
    if (dist < w.lo * (1.0 - 1e-9) || dist > w.hi * (1.0 + 1e-9)) break;
    if (*cc.region && !(*cc.region)(x)) break;

    Subspace tangent(cc.y.size());
    try {
      tangent = X.tangent_space(x);
    } catch (const Error&) {
      break;
    }
    const double pa = cc.kuo->p_a(tangent);
    const Vec y_proj = proj.project(x);
    const Vec sec = x - y_proj;
    double pb = pa;
    if (sec.norm() > 1e-12) {
      Vec res = sec / sec.norm();
      for (int pass = 0; pass < 2; ++pass)
        res -= tangent.frame() * (tangent.frame().transpose() * res);
      pb = pa + res.squaredNorm();
    }

    const int slot = static_cast<int>(seq.radii.size());
    seq.points.col(slot) = x;
    seq.radii.push_back(dist);
    seq.tangents.push_back(tangent);
    seq.pa_trace.push_back(pa);
    seq.pb_trace.push_back(pb);
    align_sum += alignment_term(x, cc.y, cc.dir);
    prev_dist = dist;
    out.started = true;
  }

  const int got = static_cast<int>(seq.radii.size());
  seq.points.conservativeResize(Eigen::NoChange, got);
  seq.truncated = got < cc.schedule.length;
  if (got > 0) {
    const GrassmannLimit gl =
        grassmann_limit(std::span<const Subspace>(seq.tangents.data(), seq.tangents.size()),
                        cc.cfg->grassmann_tol);
    seq.limit = gl.limit;
    seq.converged = gl.converged && !seq.truncated;
    out.mean_alignment = align_sum / got;
  }
  return out;
}

enum class Select { Alignment, TailMin, TailMax };

double tail_of(const GoodSequence& seq, KuoTrace trace) {
  return trace == KuoTrace::PA ? seq.pa_tail() : seq.pb_tail();
}

// Run the cascades of every chart for one direction and pick a winner.
CascadeResult run_direction(const PairXY& pair, const KuoContext& kuo, const Vec& y,
                            const Vec& dir, const RadiusSchedule& schedule,
                            std::uint64_t seed, const SearchConfig& cfg,
                            const std::function<bool(const Vec&)>& region, Select select,
                            KuoTrace trace) {
  CascadeContext cc;
  cc.pair = &pair;
  cc.kuo = &kuo;
  cc.y = y;
  cc.dir = dir;
  cc.schedule = schedule;
  cc.cfg = &cfg;
  cc.region = &region;
  cc.y_frame = kuo.frame();

  std::vector<CascadeResult> results;
  if (pair.X().kind() == Stratum::Kind::Parametric) {
    for (std::size_t c = 0; c < pair.X().charts().size(); ++c) {
      YProjector proj(pair.Y());
      results.push_back(cascade_parametric(cc, c, derive_seed(seed, c), proj));
    }
  } else {
    YProjector proj(pair.Y());
    results.push_back(cascade_implicit(cc, seed, proj));
  }

  auto better = [&](const CascadeResult& a, const CascadeResult& b) {
    if (a.seq.size() != b.seq.size()) return a.seq.size() > b.seq.size();
    if (a.seq.size() == 0) return false;
    switch (select) {
      case Select::Alignment: return a.mean_alignment < b.mean_alignment;
      case Select::TailMin: return tail_of(a.seq, trace) < tail_of(b.seq, trace);
      case Select::TailMax: return tail_of(a.seq, trace) > tail_of(b.seq, trace);
    }
    return false;
  };
  std::size_t best = 0;
  for (std::size_t i = 1; i < results.size(); ++i)
    if (better(results[i], results[best])) best = i;
  return results[best];
}

}  // namespace

GoodSequence directional_sequence(const PairXY& pair, const Vec& y, const Vec& dir,
                                  const RadiusSchedule& schedule, std::uint64_t seed,
                                  const SearchConfig& cfg_in) {
  if (schedule.length < 1) throw Error("directional_sequence: schedule length must be >= 1");
  if (!(schedule.ratio > 0.0 && schedule.ratio < 1.0))
    throw Error("directional_sequence: ratio must lie in (0,1)");
  if (std::abs(dir.norm() - 1.0) > 1e-6)
    throw Error("directional_sequence: direction must be a unit vector");
  SearchConfig cfg = cfg_in;
  cfg.schedule = schedule;
  const KuoContext kuo(pair, y);
  std::function<bool(const Vec&)> region;  // unrestricted
  CascadeResult res = run_direction(pair, kuo, y, dir, schedule, seed, cfg, region,
                                    Select::Alignment, KuoTrace::PA);
  return res.seq;
}

TailSearchOutcome search_tail(const PairXY& pair, const Vec& y, long budget, std::uint64_t seed,
                              const TailSearchOptions& options) {
  const SearchConfig& cfg = options.cfg;
  const RadiusSchedule& schedule = cfg.schedule;
  if (schedule.length < 1) throw Error("search_tail: schedule length must be >= 1");
  const Index n = pair.ambient_dim();
  const KuoContext kuo(pair, y);
  const Select select = options.maximize ? Select::TailMax : Select::TailMin;

  // budget in shell-point evaluations; each cascade costs ~schedule.length
  const long cascades_allowed =
      std::max<long>(cfg.min_directions, budget / std::max(1, schedule.length));
  long extra = cascades_allowed - cfg.min_directions;
  const long refine_probes = std::min<long>(24, extra / 2);
  const long extra_dirs = extra - refine_probes;

  // base directions: preferred first, then the low-discrepancy sphere
  std::vector<Vec> dirs;
  for (const Vec& d : options.preferred_directions) {
    const double norm = d.norm();
    if (norm < 1e-12) continue;
    Vec u = d / norm;
    bool dup = false;
    for (const Vec& e : dirs)
      if ((e - u).norm() < 1e-9) dup = true;
    if (!dup) dirs.push_back(u);
  }
  const std::uint64_t offset = derive_seed(seed, 0xD14) % 1024;
  std::uint64_t halton_used = 0;
  while (static_cast<long>(dirs.size()) < cfg.min_directions)
    dirs.push_back(sphere_direction(offset + halton_used++, n));
  const std::uint64_t base_count = dirs.size();

  TailSearchOutcome out;
  double best_tail = options.maximize ? -kInf : kInf;
  auto is_better = [&](double tail) {
    if (std::isnan(tail)) return false;
    return options.maximize ? tail > best_tail : tail < best_tail;
  };

  auto run_one = [&](const Vec& d, std::uint64_t stream) -> double {
    CascadeResult res = run_direction(pair, kuo, y, d, schedule, derive_seed(seed, stream), cfg,
                                      options.region, select, options.trace);
    ++out.searches_run;
    if (!res.seq.truncated && res.seq.converged) ++out.searches_full;
    if (res.seq.size() == 0) return std::numeric_limits<double>::quiet_NaN();
    out.any_sequence = true;
    const double tail = tail_of(res.seq, options.trace);
    if (is_better(tail)) {
      best_tail = tail;
      out.best = std::move(res.seq);
    }
    return tail;
  };

  for (std::uint64_t i = 0; i < base_count; ++i) run_one(dirs[i], i);

  // refinement: pattern search over the sphere around the incumbent
  if (out.any_sequence && refine_probes > 0) {
    Vec d = out.best.direction_tag;
    double alpha = 0.4;
    long used = 0;
    while (used < refine_probes && alpha > 0.02) {
      const Mat tangent_basis = Subspace::from_span(d).orthogonal_complement().frame();
      bool improved = false;
      for (Index t = 0; t < tangent_basis.cols() && used < refine_probes && !improved; ++t) {
        for (const double sign : {+1.0, -1.0}) {
          if (used >= refine_probes) break;
          const Vec probe = (d + sign * alpha * tangent_basis.col(t)).normalized();
          const double before = best_tail;
          run_one(probe, 4096 + static_cast<std::uint64_t>(used));
          ++used;
          if (best_tail != before) {  // strict improvement accepted in run_one
            d = probe;
            improved = true;
            break;
          }
        }
      }
      if (!improved) alpha *= 0.5;
    }
  }

  // extra low-discrepancy directions, prefix-stable continuation
  (void)base_count;
  for (long i = 0; i < extra_dirs; ++i)
    run_one(sphere_direction(offset + halton_used + static_cast<std::uint64_t>(i), n),
            8192 + static_cast<std::uint64_t>(i));

  return out;
}

GoodSequence minimize_pa_sequence(const PairXY& pair, const Vec& y, long budget,
                                  std::uint64_t seed, const SearchConfig& cfg) {
  TailSearchOptions opt;
  opt.trace = KuoTrace::PA;
  opt.maximize = false;
  opt.cfg = cfg;
  TailSearchOutcome out = search_tail(pair, y, budget, seed, opt);
  if (!out.any_sequence) throw Error("minimize_pa_sequence: all directional searches truncated");
  return out.best;
}

GoodSequence minimize_pb_sequence(const PairXY& pair, const Vec& y, long budget,
                                  std::uint64_t seed, const SearchConfig& cfg) {
  TailSearchOptions opt;
  opt.trace = KuoTrace::PB;
  opt.maximize = false;
  opt.cfg = cfg;
  // the paper's fiber construction: try directions orthogonal to T_yY first
  const Subspace normal = pair.Y().tangent_space(y).orthogonal_complement();
  const Mat& nf = normal.frame();
  for (Index c = 0; c < nf.cols(); ++c) {
    opt.preferred_directions.push_back(nf.col(c));
    opt.preferred_directions.push_back(-nf.col(c));
  }
  for (std::uint64_t i = 0; i < 8 && normal.dim() > 0; ++i) {
    Vec d = normal.project(sphere_direction(77 + i, pair.ambient_dim()));
    if (d.norm() > 1e-9) opt.preferred_directions.push_back(d.normalized());
  }
  TailSearchOutcome out = search_tail(pair, y, budget, seed, opt);
  if (!out.any_sequence) throw Error("minimize_pb_sequence: all directional searches truncated");
  return out.best;
}

}  // namespace strat
