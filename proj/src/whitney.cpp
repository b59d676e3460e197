#include "strat/whitney.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace strat {

const char* to_string(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::Regular: return "regular";
    case VerdictStatus::Fault: return "fault";
    case VerdictStatus::Inconclusive: return "inconclusive";
  }
  return "?";
}

const char* to_string(Condition c) { return c == Condition::A ? "a" : "b"; }

namespace {

Verdict verdict_from_outcome(TailSearchOutcome&& out, double tol) {
  Verdict v;
  v.tolerance = tol;
  v.searches_run = out.searches_run;
  v.searches_full = out.searches_full;
  if (!out.any_sequence) {
    v.status = VerdictStatus::Inconclusive;
    return v;
  }
  v.score = out.best.pa_tail();  // rewritten below when the trace is PB
  v.witness = std::move(out.best);
  return v;
}

Verdict run_check(const PairXY& pair, Condition condition, const Vec& y, double tol, long budget,
                  std::uint64_t seed, const SearchConfig& cfg,
                  std::function<bool(const Vec&)> region) {
  TailSearchOptions opt;
  opt.trace = condition == Condition::A ? KuoTrace::PA : KuoTrace::PB;
  opt.maximize = true;
  opt.cfg = cfg;
  opt.region = std::move(region);
  TailSearchOutcome out = search_tail(pair, y, budget, seed, opt);
  Verdict v = verdict_from_outcome(std::move(out), tol);
  if (!v.witness) return v;
  v.score = condition == Condition::A ? v.witness->pa_tail() : v.witness->pb_tail();
  if (v.score > tol) {
    v.status = VerdictStatus::Fault;
  } else if (4 * v.searches_full >= 3 * v.searches_run) {
    v.status = VerdictStatus::Regular;
  } else {
    v.status = VerdictStatus::Inconclusive;
  }
  return v;
}

}  // namespace

Verdict check_condition(const PairXY& pair, Condition condition, const Vec& y, double tol,
                        long budget, std::uint64_t seed, const SearchConfig& cfg) {
  if (pair.Y().residual(y) > 1e-8)
    throw Error("check: base point is not on Y (residual above 1e-8)");
  return run_check(pair, condition, y, tol, budget, seed, cfg, {});
}

Verdict check_a(const PairXY& pair, const Vec& y, double tol, long budget, std::uint64_t seed,
                const SearchConfig& cfg) {
  return check_condition(pair, Condition::A, y, tol, budget, seed, cfg);
}

Verdict check_b(const PairXY& pair, const Vec& y, double tol, long budget, std::uint64_t seed,
                const SearchConfig& cfg) {
  return check_condition(pair, Condition::B, y, tol, budget, seed, cfg);
}

// ---------------------------------------------------------------------------
// Fault scans

namespace {

double grid_pitch(const Stratum::Sample& ys) {
  double pitch = 0.0;
  bool any = false;
  for (Index i = 0; i + 1 < ys.points.cols(); ++i) {
    if (ys.chart[static_cast<std::size_t>(i)] != ys.chart[static_cast<std::size_t>(i + 1)])
      continue;
    pitch = std::max(pitch, (ys.points.col(i) - ys.points.col(i + 1)).norm());
    any = true;
  }
  if (!any && ys.points.cols() > 1) {
    // single point per chart: fall back to global nearest-neighbor spacing
    for (Index i = 0; i < ys.points.cols(); ++i) {
      double nn = std::numeric_limits<double>::infinity();
      for (Index j = 0; j < ys.points.cols(); ++j)
        if (j != i) nn = std::min(nn, (ys.points.col(i) - ys.points.col(j)).norm());
      pitch = std::max(pitch, nn);
    }
  }
  return pitch;
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

FaultReport scan_faults(const PairXY& pair, Condition condition, int y_samples, double tol,
                        long budget, std::uint64_t seed, int threads, const SearchConfig& cfg) {
  if (y_samples < 1) throw Error("scan_faults: need at least one sample");
  FaultReport report;
  report.pair_id = pair.X().name() + "|" + pair.Y().name();
  report.condition = condition;
  report.tol = tol;
  report.budget = budget;
  report.seed = seed;

  const Stratum::Sample ys = pair.Y().grid_sample(y_samples);
  report.samples = ys.points;
  report.pitch = grid_pitch(ys);
  const std::size_t n = static_cast<std::size_t>(ys.points.cols());
  report.verdicts.resize(n);

  parallel_for(n, threads, [&](std::size_t i) {
    report.verdicts[i] = check_condition(pair, condition, ys.points.col(static_cast<Index>(i)),
                                         tol, budget, derive_seed(seed, i), cfg);
  });

  std::vector<int> faults;
  for (std::size_t i = 0; i < n; ++i) {
    if (report.verdicts[i].status == VerdictStatus::Fault) {
      ++report.fault_count;
      faults.push_back(static_cast<int>(i));
    } else if (report.verdicts[i].status == VerdictStatus::Inconclusive) {
      ++report.inconclusive_count;
    }
  }
  report.fault_fraction = static_cast<double>(report.fault_count) / static_cast<double>(n);

  // single-linkage clustering of fault locations at link radius 2 * pitch
  UnionFind uf(static_cast<int>(faults.size()));
  for (std::size_t a = 0; a < faults.size(); ++a)
    for (std::size_t b = a + 1; b < faults.size(); ++b)
      if ((report.samples.col(faults[a]) - report.samples.col(faults[b])).norm() <=
          2.0 * report.pitch)
        uf.unite(static_cast<int>(a), static_cast<int>(b));
  std::vector<int> root_to_cluster(faults.size(), -1);
  for (std::size_t a = 0; a < faults.size(); ++a) {
    const int root = uf.find(static_cast<int>(a));
    if (root_to_cluster[root] < 0) {
      root_to_cluster[root] = static_cast<int>(report.clusters.size());
      report.clusters.emplace_back();
    }
    report.clusters[root_to_cluster[root]].members.push_back(faults[a]);
  }
  for (FaultCluster& c : report.clusters) {
    c.centroid = Vec::Zero(report.samples.rows());
    for (int idx : c.members) c.centroid += report.samples.col(idx);
    c.centroid /= static_cast<double>(c.members.size());
    for (std::size_t a = 0; a < c.members.size(); ++a)
      for (std::size_t b = a + 1; b < c.members.size(); ++b)
        c.diameter = std::max(
            c.diameter, (report.samples.col(c.members[a]) - report.samples.col(c.members[b])).norm());
    c.isolated = c.diameter < 2.0 * report.pitch;
  }
  return report;
}

// ---------------------------------------------------------------------------
// Local components

namespace {

struct BallCloud {
  Mat points;  // columns
};

BallCloud ball_cloud(const Stratum& X, const Vec& y, double r, int target, std::uint64_t seed) {
  std::vector<Vec> pts;
  std::vector<std::pair<int, Vec>> park;  // chart + param of kept points

  if (X.kind() == Stratum::Kind::Parametric) {
    Rng rng(derive_seed(seed, 0xBA77));
    const auto& charts = X.charts();
    std::vector<double> cumulative(charts.size());
    double total = 0.0;
    for (std::size_t c = 0; c < charts.size(); ++c) {
      total += std::max(charts[c].domain.volume(), 1e-300);
      cumulative[c] = total;
    }
    const int global_cap = 60000;
    for (int attempt = 0; attempt < global_cap && static_cast<int>(pts.size()) < target;
         ++attempt) {
      const double pick = rng.uniform() * total;
      std::size_t c = 0;
      while (c + 1 < charts.size() && pick > cumulative[c]) ++c;
      const Chart& chart = charts[c];
      Vec u(chart.param_dim());
      for (Index d = 0; d < u.size(); ++d) u[d] = rng.uniform(chart.domain.lo[d], chart.domain.hi[d]);
      if (!chart.feasible(u)) continue;
      const Vec x = chart.eval(u);
      if ((x - y).norm() > r) continue;
      pts.push_back(x);
      park.emplace_back(static_cast<int>(c), u);
    }
    // jitter chains from accepted parameters to densify small balls
    const int chain_cap = 80000;
    for (int attempt = 0; attempt < chain_cap && !park.empty() &&
                          static_cast<int>(pts.size()) < target;
         ++attempt) {
      const std::size_t pick = rng.below(park.size());
      const int c = park[pick].first;
      const Chart& chart = charts[static_cast<std::size_t>(c)];
      const Vec& u0 = park[pick].second;
      const Mat j = chart.jacobian(u0);
      Vec u = u0;
      for (Index d = 0; d < u.size(); ++d) {
        const double col = std::max(j.col(d).norm(), 1e-9);
        u[d] += rng.gaussian() * 0.35 * r / col;
      }
      if (!chart.feasible(u)) continue;
      const Vec x = chart.eval(u);
      if ((x - y).norm() > r) continue;
      pts.push_back(x);
      park.emplace_back(c, u);
    }
  } else {
    Rng rng(derive_seed(seed, 0xBA77));
    for (int attempt = 0; attempt < 60000 && static_cast<int>(pts.size()) < target; ++attempt) {
      Vec x = y + r * rng.unit_vec(y.size()) * std::sqrt(rng.uniform());
      Stratum::Near near = X.nearest(x);
      if ((near.point - y).norm() > r) continue;
      pts.push_back(near.point);
    }
  }

  BallCloud cloud;
  cloud.points.resize(y.size(), static_cast<Index>(pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) cloud.points.col(static_cast<Index>(i)) = pts[i];
  return cloud;
}

double median_nn(const Mat& pts) {
  const Index n = pts.cols();
  if (n < 2) return 0.0;
  std::vector<double> nn(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity());
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) {
      const double d = (pts.col(i) - pts.col(j)).norm();
      nn[static_cast<std::size_t>(i)] = std::min(nn[static_cast<std::size_t>(i)], d);
      nn[static_cast<std::size_t>(j)] = std::min(nn[static_cast<std::size_t>(j)], d);
    }
  std::sort(nn.begin(), nn.end());
  return nn[static_cast<std::size_t>(n / 2)];
}

struct Clustering {
  std::vector<int> labels;
  int count = 0;
  double pitch = 0.0;
};

// Graph clustering away from Y, then direction-space assignment of the
// points inside the Y-tube (distinct components only touch across Y).
Clustering cluster_ball(const Mat& cloud, const Vec& y, const Mat& y_probe_cloud) {
  Clustering out;
  const Index n = cloud.cols();
  out.labels.assign(static_cast<std::size_t>(n), -1);
  if (n == 0) return out;
  out.pitch = median_nn(cloud);
  const double tube = 2.5 * out.pitch;

  std::vector<Index> retained;
  for (Index i = 0; i < n; ++i) {
    double ydist = std::numeric_limits<double>::infinity();
    for (Index j = 0; j < y_probe_cloud.cols(); ++j)
      ydist = std::min(ydist, (cloud.col(i) - y_probe_cloud.col(j)).norm());
    if (ydist > tube) retained.push_back(i);
  }
  if (retained.empty()) retained.push_back(0);

  UnionFind uf(static_cast<int>(retained.size()));
  const double link = 2.0 * out.pitch;
  for (std::size_t a = 0; a < retained.size(); ++a)
    for (std::size_t b = a + 1; b < retained.size(); ++b)
      if ((cloud.col(retained[a]) - cloud.col(retained[b])).norm() <= link)
        uf.unite(static_cast<int>(a), static_cast<int>(b));

  std::vector<int> root_to_label(retained.size(), -1);
  std::vector<int> label_size;
  for (std::size_t a = 0; a < retained.size(); ++a) {
    const int root = uf.find(static_cast<int>(a));
    if (root_to_label[root] < 0) {
      root_to_label[root] = static_cast<int>(label_size.size());
      label_size.push_back(0);
    }
    out.labels[static_cast<std::size_t>(retained[a])] = root_to_label[root];
    ++label_size[root_to_label[root]];
  }

  // tiny islands are sampling noise: fold them into the nearest real cluster
  const int min_size = std::max(3, static_cast<int>(retained.size()) / 200);
  std::vector<int> remap(label_size.size(), -1);
  int kept = 0;
  for (std::size_t l = 0; l < label_size.size(); ++l)
    if (label_size[l] >= min_size) remap[l] = kept++;
  if (kept == 0) {  // everything tiny: keep the largest island
    const int big =
        static_cast<int>(std::max_element(label_size.begin(), label_size.end()) - label_size.begin());
    remap[big] = 0;
    kept = 1;
  }
  for (Index i = 0; i < n; ++i) {
    int& l = out.labels[static_cast<std::size_t>(i)];
    l = (l >= 0) ? remap[l] : -1;
  }
  out.count = kept;

  // assign tube points and folded islands by secant direction
  std::vector<Index> anchors;
  for (Index i = 0; i < n; ++i)
    if (out.labels[static_cast<std::size_t>(i)] >= 0) anchors.push_back(i);
  for (Index i = 0; i < n; ++i) {
    if (out.labels[static_cast<std::size_t>(i)] >= 0) continue;
    const Vec di = cloud.col(i) - y;
    const double ni = di.norm();
    double best = std::numeric_limits<double>::infinity();
    int best_label = 0;
    for (Index a : anchors) {
      const Vec da = cloud.col(a) - y;
      const double na = da.norm();
      if (ni < 1e-300 || na < 1e-300) continue;
      const double d = (di / ni - da / na).norm();
      if (d < best) {
        best = d;
        best_label = out.labels[static_cast<std::size_t>(a)];
      }
    }
    out.labels[static_cast<std::size_t>(i)] = best_label;
  }
  return out;
}

}  // namespace

Mat LocalComponents::component(int id) const {
  Index count = 0;
  for (int l : labels)
    if (l == id) ++count;
  Mat out(cloud.rows(), count);
  Index k = 0;
  for (Index i = 0; i < cloud.cols(); ++i)
    if (labels[static_cast<std::size_t>(i)] == id) out.col(k++) = cloud.col(i);
  return out;
}

int LocalComponents::classify_direction(const Vec& x) const {
  const Vec d = x - base_point;
  const double n = d.norm();
  if (n < 1e-300 || cloud.cols() == 0) return -1;
  double best = std::numeric_limits<double>::infinity();
  int best_label = -1;
  for (Index i = 0; i < cloud.cols(); ++i) {
    const Vec e = cloud.col(i) - base_point;
    const double ne = e.norm();
    if (ne < 1e-300) continue;
    const double gap = (d / n - e / ne).norm();
    if (gap < best) {
      best = gap;
      best_label = labels[static_cast<std::size_t>(i)];
    }
  }
  return best_label;
}

LocalComponents local_components(const PairXY& pair, const Vec& y, std::uint64_t seed,
                                 double r0) {
  if (pair.Y().residual(y) > 1e-8)
    throw Error("local_components: base point is not on Y");
  const Mat y_probe = pair.Y().grid_sample(512).points;
  const int target = 1700;

  LocalComponents out;
  out.base_point = y;

  double r = r0;
  BallCloud cloud = ball_cloud(pair.X(), y, r, target, derive_seed(seed, 0));
  Clustering cl = cluster_ball(cloud.points, y, y_probe);
  for (int halving = 0; halving < 8; ++halving) {
    BallCloud half_cloud = ball_cloud(pair.X(), y, r / 2.0, target, derive_seed(seed, halving + 1));
    Clustering half_cl = cluster_ball(half_cloud.points, y, y_probe);
    if (cl.count > 0 && cl.count == half_cl.count) {
      out.stable = true;
      break;
    }
    r /= 2.0;
    cloud = std::move(half_cloud);
    cl = std::move(half_cl);
  }

  out.radius = r;
  out.cloud = std::move(cloud.points);
  out.labels = std::move(cl.labels);
  out.n_components = cl.count;
  out.pitch = cl.pitch;
  return out;
}

std::vector<char> essential_flags(const PairXY& pair, LocalComponents& comps,
                                  std::uint64_t seed) {
  (void)seed;
  const Mat y_grid = pair.Y().grid_sample(1024).points;
  std::vector<Index> probes;
  for (Index i = 0; i < y_grid.cols(); ++i)
    if ((y_grid.col(i) - comps.base_point).norm() < comps.radius / 4.0) probes.push_back(i);
  if (probes.size() < 4)
    throw Error("essential_flags: insufficient Y samples inside r/4");

  std::vector<char> flags(static_cast<std::size_t>(comps.n_components), 1);
  const double tol = 2.5 * comps.pitch;
  for (int comp = 0; comp < comps.n_components; ++comp) {
    for (Index pi : probes) {
      double best = std::numeric_limits<double>::infinity();
      for (Index i = 0; i < comps.cloud.cols(); ++i) {
        if (comps.labels[static_cast<std::size_t>(i)] != comp) continue;
        best = std::min(best, (comps.cloud.col(i) - y_grid.col(pi)).norm());
      }
      if (!(best <= tol)) {
        flags[static_cast<std::size_t>(comp)] = 0;
        break;
      }
    }
  }
  comps.essential = flags;
  return flags;
}

Verdict sing_a_kaloshin(const PairXY& pair, const Vec& y, double tol, long budget,
                        std::uint64_t seed, const SearchConfig& cfg_in) {
  LocalComponents comps = local_components(pair, y, derive_seed(seed, 0x51A));
  essential_flags(pair, comps, derive_seed(seed, 0x51B));

  bool all_essential = true;
  for (char f : comps.essential)
    if (!f) all_essential = false;
  if (all_essential) return check_a(pair, y, tol, budget, seed, cfg_in);

  SearchConfig cfg = cfg_in;
  cfg.schedule.r0 = std::min(cfg.schedule.r0, comps.radius / (2.0 * std::sqrt(2.0)));
  auto region = [comps](const Vec& x) {
    const int label = comps.classify_direction(x);
    return label >= 0 && comps.essential[static_cast<std::size_t>(label)] != 0;
  };
  return run_check(pair, Condition::A, y, tol, budget, seed, cfg, region);
}

// ---------------------------------------------------------------------------
// Fiber probe

FiberProbe b_fiber_probe(const PairXY& pair, const Vec& y, std::uint64_t seed) {
  if (pair.Y().residual(y) > 1e-8) throw Error("b_fiber_probe: base point is not on Y");
  const Mat E = pair.Y().tangent_space(y).frame();  // tangential offset frame
  const Index k = E.cols();
  FiberProbe probe;

  const Stratum& X = pair.X();
  const Stratum::Sample xs = X.sample(4096, derive_seed(seed, 0xF1B));

  auto fiber_offset = [&](const Vec& x) {
    return k == 0 ? 0.0 : (E.transpose() * (x - y)).norm();
  };

  double omega = std::numeric_limits<double>::infinity();
  Vec best_point;
  int accepted = 0;

  if (k == 0) {
    for (Index i = 0; i < xs.points.cols(); ++i) {
      const double dist = (xs.points.col(i) - y).norm();
      if (dist <= 1e-9) continue;
      ++accepted;
      if (dist < omega) {
        omega = dist;
        best_point = xs.points.col(i);
      }
    }
  } else if (X.kind() == Stratum::Kind::Parametric) {
    // candidates whose tangential offset is already cone-small, nearest first
    std::vector<std::pair<double, Index>> cands;
    for (Index i = 0; i < xs.points.cols(); ++i) {
      const double dist = (xs.points.col(i) - y).norm();
      if (dist <= 1e-9) continue;
      if (fiber_offset(xs.points.col(i)) < 0.25 * dist) cands.emplace_back(dist, i);
    }
    std::sort(cands.begin(), cands.end());
    const std::size_t limit = std::min<std::size_t>(cands.size(), 96);
    for (std::size_t ci = 0; ci < limit; ++ci) {
      const Index i = cands[ci].second;
      const Chart& chart = X.charts()[static_cast<std::size_t>(xs.chart[static_cast<std::size_t>(i)])];
      Vec u = xs.params.col(i);
      // Gauss-Newton on the tangential offset t(u) = E^T (F(u) - y)
      for (int it = 0; it < 15; ++it) {
        const Vec t = E.transpose() * (chart.eval(u) - y);
        if (t.norm() < 1e-13) break;
        const Mat jt = E.transpose() * chart.jacobian(u);
        Vec du = jt.completeOrthogonalDecomposition().solve(-t);
        if (!du.allFinite() || du.norm() < 1e-15) break;
        double alpha = 1.0;
        bool moved = false;
        for (int halve = 0; halve < 20; ++halve) {
          Vec u_new = u + alpha * du;
          for (Index d = 0; d < u_new.size(); ++d)
            u_new[d] = std::min(chart.domain.hi[d], std::max(chart.domain.lo[d], u_new[d]));
          if ((E.transpose() * (chart.eval(u_new) - y)).norm() < t.norm()) {
            u = u_new;
            moved = true;
            break;
          }
          alpha *= 0.5;
        }
        if (!moved) break;
      }
      const Vec x = chart.eval(u);
      const double dist = (x - y).norm();
      if (dist <= 1e-9) continue;
      if (fiber_offset(x) <= 1e-3 * dist) {
        ++accepted;
        if (dist < omega) {
          omega = dist;
          best_point = x;
        }
      }
    }
  } else {
    for (Index i = 0; i < xs.points.cols(); ++i) {
      const double dist = (xs.points.col(i) - y).norm();
      if (dist <= 1e-9) continue;
      if (fiber_offset(xs.points.col(i)) <= 1e-3 * dist) {
        ++accepted;
        if (dist < omega) {
          omega = dist;
          best_point = xs.points.col(i);
        }
      }
    }
  }

  probe.fiber_points = accepted;
  probe.omega = accepted > 0 ? omega : 1.0;  // empty fiber convention

  if (accepted > 0 && probe.omega < 0.05) {
    SearchConfig cfg;
    cfg.fiber_weight = 4.0;
    const Vec dir = (best_point - y).normalized();
    probe.fiber_sequence = directional_sequence(pair, y, dir, cfg.schedule,
                                                derive_seed(seed, 0xF1BE), cfg);
  }
  return probe;
}

}  // namespace strat
