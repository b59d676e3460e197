#include "strat/refine.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace strat {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

// ---------------------------------------------------------------------------
// KuoField

KuoField::KuoField(const PairXY& pair) : pair_(&pair) {
  if (pair.Y().kind() == Stratum::Kind::Parametric)
    warm_.assign(pair.Y().charts().size(), Vec());
}

double KuoField::eval(std::size_t chart_index, const Vec& u) const {
  const Stratum& X = pair_->X();
  const Stratum& Y = pair_->Y();
  const Chart& chart = X.charts().at(chart_index);
  for (const Expression& h : chart.inequalities)
    if (!(h.eval(u) > 0.0)) return kNaN;
  Subspace tangent(X.ambient_dim());
  try {
    tangent = X.tangent_space_chart(chart_index, u);
  } catch (const Error&) {
    return kNaN;
  }
  const Vec x = chart.eval(u);

  // nearest point of Y, warm-started per chart
  Vec base;
  Subspace y_tangent(Y.ambient_dim());
  if (Y.kind() == Stratum::Kind::Implicit) {
    base = Y.nearest_point(x);
    try {
      y_tangent = Y.tangent_space(base);
    } catch (const Error&) {
      return kNaN;
    }
  } else {
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_chart = 0;
    Vec best_param;
    for (std::size_t c = 0; c < Y.charts().size(); ++c) {
      const Chart& yc = Y.charts()[c];
      Vec u0 = warm_[c].size() ? warm_[c] : yc.domain.center();
      double f = (yc.eval(u0) - x).norm();
      for (int it = 0; it < 20; ++it) {
        const Vec r = yc.eval(u0) - x;
        const Mat j = yc.jacobian(u0);
        Vec du = j.completeOrthogonalDecomposition().solve(-r);
        if (!du.allFinite() || du.norm() < 1e-14) break;
        double alpha = 1.0;
        bool moved = false;
        for (int halve = 0; halve < 18; ++halve) {
          Vec u_new = u0 + alpha * du;
          for (Index d = 0; d < u_new.size(); ++d)
            u_new[d] = std::min(yc.domain.hi[d], std::max(yc.domain.lo[d], u_new[d]));
          const double f_new = (yc.eval(u_new) - x).norm();
          if (f_new < f - 1e-16) {
            u0 = u_new;
            f = f_new;
            moved = true;
            break;
          }
          alpha *= 0.5;
        }
        if (!moved) break;
      }
      warm_[c] = u0;
      if (f < best) {
        best = f;
        best_chart = c;
        best_param = u0;
      }
    }
    try {
      y_tangent = Y.tangent_space_chart(best_chart, best_param);
    } catch (const Error&) {
      return kNaN;
    }
  }

  const Mat& frame = y_tangent.frame();
  double pa = 0.0;
  for (Index i = 0; i < frame.cols(); ++i) {
    Vec r = frame.col(i);
    for (int pass = 0; pass < 2; ++pass)
      r -= tangent.frame() * (tangent.frame().transpose() * r);
    pa += r.squaredNorm();
  }
  return pa;
}

// ---------------------------------------------------------------------------
// regular_values

std::vector<double> regular_values(const PairXY& pair, int count, std::uint64_t seed,
                                   int min_samples) {
  (void)seed;  // the grid is deterministic; seed kept for interface stability
  if (count < 1) throw Error("regular_values: count must be >= 1");
  const Stratum& X = pair.X();
  if (X.kind() != Stratum::Kind::Parametric)
    throw Error("regular_values: X must be parametric");
  const KuoField field(pair);

  std::vector<double> values, grads;
  const int per_chart =
      std::max(1, min_samples / std::max<int>(1, static_cast<int>(X.charts().size())));
  for (std::size_t c = 0; c < X.charts().size(); ++c) {
    const Chart& chart = X.charts()[c];
    const Index m = chart.param_dim();
    if (m < 1 || m > 2) throw Error("regular_values: parameter dimension must be 1 or 2");
    const int k = m == 1 ? per_chart
                         : std::max(2, static_cast<int>(std::lround(std::sqrt(per_chart))));
    std::vector<Index> dims(m, k);
    std::vector<double> f(static_cast<std::size_t>(m == 1 ? k : k * k), kNaN);
    Vec step(m);
    for (Index d = 0; d < m; ++d)
      step[d] = (chart.domain.hi[d] - chart.domain.lo[d]) / (k - 1);
    auto node = [&](int i, int j) {
      Vec u(m);
      u[0] = chart.domain.lo[0] + step[0] * i;
      if (m == 2) u[1] = chart.domain.lo[1] + step[1] * j;
      return u;
    };
    const int rows = (m == 1) ? 1 : k;
    for (int j = 0; j < rows; ++j)
      for (int i = 0; i < k; ++i)
        f[static_cast<std::size_t>(j * k + i)] = field.eval(c, node(i, j));
    for (int j = 0; j < rows; ++j)
      for (int i = 0; i < k; ++i) {
        const double v = f[static_cast<std::size_t>(j * k + i)];
        if (std::isnan(v)) continue;
        double g2 = 0.0;
        bool have_grad = false;
        if (i + 1 < k && !std::isnan(f[static_cast<std::size_t>(j * k + i + 1)])) {
          const double d = (f[static_cast<std::size_t>(j * k + i + 1)] - v) / step[0];
          g2 += d * d;
          have_grad = true;
        }
        if (m == 2 && j + 1 < k && !std::isnan(f[static_cast<std::size_t>((j + 1) * k + i)])) {
          const double d = (f[static_cast<std::size_t>((j + 1) * k + i)] - v) / step[1];
          g2 += d * d;
          have_grad = true;
        }
        if (!have_grad) continue;
        values.push_back(v);
        grads.push_back(std::sqrt(g2));
      }
  }
  if (values.empty()) throw Error("regular_values: no valid p_a samples");
  const double lo = *std::min_element(values.begin(), values.end());
  const double hi = *std::max_element(values.begin(), values.end());
  if (hi - lo < 1e-9)
    throw Error("regular_values: p_a is constant on samples (no slicing possible)");

  std::vector<double> sorted_grads = grads;
  std::nth_element(sorted_grads.begin(), sorted_grads.begin() + sorted_grads.size() / 10,
                   sorted_grads.end());
  const double p10 = sorted_grads[sorted_grads.size() / 10];

  const int bins = 96;
  std::vector<double> bin_grad_sum(bins, 0.0);
  std::vector<int> bin_count(bins, 0);
  for (std::size_t i = 0; i < values.size(); ++i) {
    int b = static_cast<int>((values[i] - lo) / (hi - lo) * bins);
    b = std::min(bins - 1, std::max(0, b));
    bin_grad_sum[b] += grads[i];
    ++bin_count[b];
  }
  std::vector<int> eligible;
  for (int b = 1; b + 1 < bins; ++b)  // interior bins only: values must be crossable
    if (bin_count[b] > 0 && bin_grad_sum[b] / bin_count[b] > p10) eligible.push_back(b);
  if (eligible.empty()) throw Error("regular_values: no bin with significant p_a gradient");

  std::vector<double> out;
  for (int j = 0; j < count; ++j) {
    const std::size_t pick = std::min(
        eligible.size() - 1,
        static_cast<std::size_t>((j + 0.5) * static_cast<double>(eligible.size()) / count));
    const double v = lo + (hi - lo) * (eligible[pick] + 0.5) / bins;
    out.push_back(v);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// slice

namespace {

struct MultiSlice {
  std::vector<Stratum> bands;   // one per band actually populated
  std::vector<int> band_index;  // band id per bands[] entry
  std::vector<Stratum> levels;  // one per value actually crossed
  std::vector<int> level_index;
};

int band_of(double v, const std::vector<double>& values) {
  int b = 0;
  while (b < static_cast<int>(values.size()) && v > values[static_cast<std::size_t>(b)]) ++b;
  return b;
}

// Root of field - v along the segment [a,b] in parameter space (bisection;
// the corner signs guarantee a bracket).
Vec edge_root(const KuoField& field, std::size_t chart, const Vec& a, const Vec& b, double fa,
              double fb, double v) {
  Vec lo = a, hi = b;
  double flo = fa - v, fhi = fb - v;
  if (flo > 0.0) {
    std::swap(lo, hi);
    std::swap(flo, fhi);
  }
  for (int it = 0; it < 42; ++it) {
    const Vec mid = 0.5 * (lo + hi);
    const double fm = field.eval(chart, mid) - v;
    if (std::isnan(fm)) break;
    if (fm <= 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

void subdivide_segment(const KuoField& field, std::size_t chart, const Vec& a, const Vec& b,
                       double v, int depth, std::vector<std::pair<Vec, Vec>>& out) {
  const Vec mid = 0.5 * (a + b);
  const double fm = field.eval(chart, mid);
  if (depth >= 6 || std::isnan(fm) || std::abs(fm - v) <= 5e-7) {
    out.emplace_back(a, b);
    return;
  }
  // project the midpoint back onto the level set along the field gradient
  Vec m = mid;
  for (int it = 0; it < 4; ++it) {
    const double f0 = field.eval(chart, m);
    if (std::isnan(f0) || std::abs(f0 - v) < 1e-10) break;
    Vec g(m.size());
    const double h = 1e-6;
    for (Index d = 0; d < m.size(); ++d) {
      Vec p = m;
      p[d] += h;
      const double fp = field.eval(chart, p);
      g[d] = std::isnan(fp) ? 0.0 : (fp - f0) / h;
    }
    const double g2 = g.squaredNorm();
    if (g2 < 1e-18) break;
    m -= (f0 - v) / g2 * g;
  }
  subdivide_segment(field, chart, a, m, v, depth + 1, out);
  subdivide_segment(field, chart, m, b, v, depth + 1, out);
}

Chart segment_chart(const Chart& source, const Vec& a, const Vec& b) {
  const std::vector<std::string> t_var{"s"};
  std::vector<Expression> path;
  for (Index d = 0; d < a.size(); ++d) {
    Vec coeff(1);
    coeff << b[d] - a[d];
    path.push_back(Expression::affine(t_var, a[d], coeff));
  }
  Chart seg;
  for (const Expression& e : source.map) seg.map.push_back(e.substitute(path));
  for (const Expression& h : source.inequalities) seg.inequalities.push_back(h.substitute(path));
  Vec lo(1), hi(1);
  lo << 0.0;
  hi << 1.0;
  seg.domain = Box(lo, hi);
  seg.domain.hi_open[0] = true;  // consecutive segments share endpoints
  seg.label = source.label;
  return seg;
}

MultiSlice slice_multi(const Stratum& X, const KuoField& field, const std::vector<double>& values,
                       int grid) {
  if (X.kind() != Stratum::Kind::Parametric) throw Error("slice: X must be parametric");
  if (X.dim() < 1 || X.dim() > 2)
    throw Error("slice: parameter dimension must be 1 or 2 (got " + std::to_string(X.dim()) + ")");
  if (values.empty()) throw Error("slice: need at least one value");
  for (double v : values)
    if (std::isnan(v)) throw Error("slice: NaN slicing value");

  const int n_bands = static_cast<int>(values.size()) + 1;
  std::vector<std::vector<Chart>> band_charts(static_cast<std::size_t>(n_bands));
  std::vector<std::vector<Chart>> level_charts(values.size());

  for (std::size_t c = 0; c < X.charts().size(); ++c) {
    const Chart& chart = X.charts()[c];
    const Index m = chart.param_dim();
    const int n = grid;

    if (m == 1) {
      const double lo = chart.domain.lo[0], hi = chart.domain.hi[0];
      const double dx = (hi - lo) / n;
      std::vector<double> f(static_cast<std::size_t>(n + 1));
      for (int i = 0; i <= n; ++i) {
        Vec u(1);
        u << lo + dx * i;
        f[static_cast<std::size_t>(i)] = field.eval(c, u);
      }
      for (int i = 0; i < n; ++i) {
        const double fa = f[static_cast<std::size_t>(i)], fb = f[static_cast<std::size_t>(i + 1)];
        if (std::isnan(fa) || std::isnan(fb)) continue;
        const int ba = band_of(fa, values), bb = band_of(fb, values);
        if (ba == bb) {
          Chart piece = chart;
          Vec plo(1), phi(1);
          plo << lo + dx * i;
          phi << lo + dx * (i + 1);
          piece.domain = Box(plo, phi);
          piece.domain.hi_open[0] = (i + 1 < n) || chart.domain.hi_open[0];
          piece.domain.lo_open[0] = (i == 0) && chart.domain.lo_open[0];
          band_charts[static_cast<std::size_t>(ba)].push_back(std::move(piece));
        } else {
          for (int v = std::min(ba, bb); v < std::max(ba, bb); ++v) {
            Vec a(1), b(1);
            a << lo + dx * i;
            b << lo + dx * (i + 1);
            const Vec root =
                edge_root(field, c, a, b, fa, fb, values[static_cast<std::size_t>(v)]);
            Chart point;
            for (const Expression& e : chart.map) {
              Vec vals = root;
              point.map.push_back(Expression::constant(e.eval(vals)));
            }
            point.domain = Box::empty0();
            level_charts[static_cast<std::size_t>(v)].push_back(std::move(point));
          }
        }
      }
      continue;
    }

    // m == 2
    const double lox = chart.domain.lo[0], hix = chart.domain.hi[0];
    const double loy = chart.domain.lo[1], hiy = chart.domain.hi[1];
    const double dx = (hix - lox) / n, dy = (hiy - loy) / n;
    Mat f(n + 1, n + 1);
    for (int j = 0; j <= n; ++j)
      for (int i = 0; i <= n; ++i) {
        Vec u(2);
        u << lox + dx * i, loy + dy * j;
        f(i, j) = field.eval(c, u);
      }

    // cell band ids: -2 invalid, -1 cut, else band
    std::vector<std::vector<int>> cell(static_cast<std::size_t>(n),
                                       std::vector<int>(static_cast<std::size_t>(n), -2));
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const double f00 = f(i, j), f10 = f(i + 1, j), f01 = f(i, j + 1), f11 = f(i + 1, j + 1);
        if (std::isnan(f00) || std::isnan(f10) || std::isnan(f01) || std::isnan(f11)) continue;
        const int b = band_of(f00, values);
        if (band_of(f10, values) == b && band_of(f01, values) == b && band_of(f11, values) == b)
          cell[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = b;
        else
          cell[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = -1;
      }

    // greedy rectangle merge per band: horizontal runs, then vertical joins
    for (int b = 0; b < n_bands; ++b) {
      std::map<std::pair<int, int>, std::pair<int, int>> open;  // (i0,i1) -> (j0, j_last)
      auto flush = [&](std::pair<int, int> span, std::pair<int, int> rows) {
        Chart piece = chart;
        Vec plo(2), phi(2);
        plo << lox + dx * span.first, loy + dy * rows.first;
        phi << lox + dx * (span.second + 1), loy + dy * (rows.second + 1);
        piece.domain = Box(plo, phi);
        piece.domain.hi_open[0] = (span.second + 1 < n) || chart.domain.hi_open[0];
        piece.domain.hi_open[1] = (rows.second + 1 < n) || chart.domain.hi_open[1];
        piece.domain.lo_open[0] = (span.first == 0) && chart.domain.lo_open[0];
        piece.domain.lo_open[1] = (rows.first == 0) && chart.domain.lo_open[1];
        band_charts[static_cast<std::size_t>(b)].push_back(std::move(piece));
      };
      for (int j = 0; j <= n; ++j) {
        std::map<std::pair<int, int>, bool> seen;
        if (j < n) {
          int i = 0;
          while (i < n) {
            if (cell[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] != b) {
              ++i;
              continue;
            }
            int i1 = i;
            while (i1 + 1 < n &&
                   cell[static_cast<std::size_t>(i1 + 1)][static_cast<std::size_t>(j)] == b)
              ++i1;
            const std::pair<int, int> span{i, i1};
            auto it = open.find(span);
            if (it != open.end() && it->second.second == j - 1)
              it->second.second = j;
            else
              open[span] = {j, j};
            seen[span] = true;
            i = i1 + 1;
          }
        }
        for (auto it = open.begin(); it != open.end();) {
          if (!seen.count(it->first)) {
            flush(it->first, it->second);
            it = open.erase(it);
          } else {
            ++it;
          }
        }
      }
    }

    // marching squares on cut cells, one pass per value
    for (std::size_t vi = 0; vi < values.size(); ++vi) {
      const double v = values[vi];
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
          if (cell[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] != -1) continue;
          const double f00 = f(i, j), f10 = f(i + 1, j), f01 = f(i, j + 1), f11 = f(i + 1, j + 1);
          auto corner = [&](int ci) {
            Vec u(2);
            switch (ci) {
              case 0: u << lox + dx * i, loy + dy * j; break;
              case 1: u << lox + dx * (i + 1), loy + dy * j; break;
              case 2: u << lox + dx * (i + 1), loy + dy * (j + 1); break;
              default: u << lox + dx * i, loy + dy * (j + 1); break;
            }
            return u;
          };
          const double fc[4] = {f00, f10, f11, f01};
          int mask = 0;
          for (int k = 0; k < 4; ++k)
            if (fc[k] > v) mask |= 1 << k;
          if (mask == 0 || mask == 15) continue;
          // edge k connects corner k and (k+1)%4
          Vec cross[4];
          bool has[4] = {false, false, false, false};
          for (int k = 0; k < 4; ++k) {
            const int k2 = (k + 1) % 4;
            if ((fc[k] > v) != (fc[k2] > v)) {
              cross[k] = edge_root(field, c, corner(k), corner(k2), fc[k], fc[k2], v);
              has[k] = true;
            }
          }
          std::vector<std::pair<int, int>> links;
          switch (mask) {
            case 1: case 14: links = {{3, 0}}; break;
            case 2: case 13: links = {{0, 1}}; break;
            case 4: case 11: links = {{1, 2}}; break;
            case 8: case 7: links = {{2, 3}}; break;
            case 3: case 12: links = {{3, 1}}; break;
            case 6: case 9: links = {{0, 2}}; break;
            case 5: case 10: {
              Vec center(2);
              center << lox + dx * (i + 0.5), loy + dy * (j + 0.5);
              const double fcen = field.eval(c, center);
              const bool center_hi = !std::isnan(fcen) && fcen > v;
              const bool corner0_hi = (mask == 5);
              if (center_hi == corner0_hi)
                links = {{3, 0}, {1, 2}};
              else
                links = {{0, 1}, {2, 3}};
              break;
            }
            default: break;
          }
          for (auto [ea, eb] : links) {
            if (!has[ea] || !has[eb]) continue;
            std::vector<std::pair<Vec, Vec>> segs;
            subdivide_segment(field, c, cross[ea], cross[eb], v, 0, segs);
            for (const auto& [a, b2] : segs)
              level_charts[vi].push_back(segment_chart(chart, a, b2));
          }
        }
    }
  }

  MultiSlice out;
  for (int b = 0; b < n_bands; ++b) {
    if (band_charts[static_cast<std::size_t>(b)].empty()) continue;
    out.bands.push_back(Stratum::parametric(X.name() + "_band" + std::to_string(b),
                                            X.ambient_dim(),
                                            std::move(band_charts[static_cast<std::size_t>(b)])));
    out.band_index.push_back(b);
  }
  for (std::size_t vi = 0; vi < values.size(); ++vi) {
    if (level_charts[vi].empty()) continue;
    out.levels.push_back(Stratum::parametric(X.name() + "_lvl" + std::to_string(vi),
                                             X.ambient_dim(), std::move(level_charts[vi])));
    out.level_index.push_back(static_cast<int>(vi));
  }
  return out;
}

}  // namespace

SliceResult slice(const Stratum& x, const KuoField& field, double eps, int grid) {
  MultiSlice ms = slice_multi(x, field, {eps}, grid);
  if (ms.levels.empty()) throw Error("slice: empty level set at value " + format_double(eps));
  SliceResult out;
  for (std::size_t i = 0; i < ms.bands.size(); ++i) {
    if (ms.band_index[i] == 0)
      out.below.push_back(std::move(ms.bands[i]));
    else
      out.above.push_back(std::move(ms.bands[i]));
  }
  out.level = std::move(ms.levels);
  return out;
}

// ---------------------------------------------------------------------------
// refine_until_regular

namespace {

struct ChartBound {
  Vec center;
  double radius;
};

std::vector<ChartBound> chart_bounds(const Stratum& s) {
  std::vector<ChartBound> out;
  for (const Chart& c : s.charts()) {
    const Index m = c.param_dim();
    ChartBound b;
    b.center = c.eval(c.domain.center());
    b.radius = 0.0;
    const int corners = 1 << m;
    for (int mask = 0; mask < corners; ++mask) {
      Vec u(m);
      for (Index d = 0; d < m; ++d) u[d] = (mask >> d) & 1 ? c.domain.hi[d] : c.domain.lo[d];
      b.radius = std::max(b.radius, (c.eval(u) - b.center).norm());
    }
    b.radius = 1.5 * b.radius + 1e-6;  // curvature slack
    out.push_back(std::move(b));
  }
  return out;
}

// Distance from q to closure(X), using bounding spheres to skip far charts.
double closure_distance(const Stratum& X, const std::vector<ChartBound>& bounds, const Vec& q) {
  std::vector<std::pair<double, std::size_t>> order;
  for (std::size_t c = 0; c < bounds.size(); ++c)
    order.emplace_back(std::max(0.0, (q - bounds[c].center).norm() - bounds[c].radius), c);
  std::sort(order.begin(), order.end());
  double best = std::numeric_limits<double>::infinity();
  for (const auto& [bound, c] : order) {
    if (bound >= best) break;
    best = std::min(best, X.nearest_on_chart(c, q).distance);
  }
  return best;
}

bool adjacent(const Stratum& X, const std::vector<ChartBound>& bounds, const Stratum& Y,
              double tol, int samples) {
  Stratum::Sample ys = Y.grid_sample(samples);
  for (Index i = 0; i < ys.points.cols(); ++i)
    if (closure_distance(X, bounds, ys.points.col(i)) > tol) return false;
  return ys.points.cols() > 0;
}

}  // namespace

Stratification refine_until_regular(const PairXY& pair, double tol, int budget_iterations,
                                    std::uint64_t seed, const RefineOptions& opts) {
  Stratification out;
  out.set.ambient_dim = pair.ambient_dim();
  out.set.strata = {pair.X(), pair.Y()};
  out.set.pairs = {{pair.X().name(), pair.Y().name()}};
  out.provenance.push_back({pair.X().name(), "input", "", kNaN});
  out.provenance.push_back({pair.Y().name(), "input", "", kNaN});

  double adjacency_tol = 1e-3;

  for (int iter = 0;; ++iter) {
    out.iterations = iter;
    // scan every pair of the current stratification
    out.last_reports.clear();
    out.offending_pairs.clear();
    int first_faulty = -1;
    for (std::size_t p = 0; p < out.set.pairs.size(); ++p) {
      PairXY current = materialize_pair(out.set, out.set.pairs[p]);
      FaultReport report =
          scan_faults(current, opts.condition, opts.scan_samples, tol, opts.check_budget,
                      derive_seed(seed, 1000 * iter + p), opts.threads, opts.search);
      if (!report.clean())
        out.offending_pairs.push_back(out.set.pairs[p].x + "|" + out.set.pairs[p].y);
      if (first_faulty < 0 && report.fault_count > 0) first_faulty = static_cast<int>(p);
      out.last_reports.push_back(std::move(report));
    }
    if (out.offending_pairs.empty()) {
      out.clean = true;
      return out;
    }
    if (iter >= budget_iterations) return out;  // budget exhausted, partial result
    if (first_faulty < 0) return out;           // only inconclusives: nothing to excise

    const PairSpec faulty_spec = out.set.pairs[static_cast<std::size_t>(first_faulty)];
    const FaultReport& report = out.last_reports[static_cast<std::size_t>(first_faulty)];
    PairXY faulty = materialize_pair(out.set, faulty_spec);
    const Stratum Xf = faulty.X();
    const Stratum Yf = faulty.Y();

    if (Xf.dim() <= Yf.dim() || Yf.dim() != 1 || Yf.kind() != Stratum::Kind::Parametric ||
        Xf.kind() != Stratum::Kind::Parametric || Xf.dim() > 2) {
      return out;  // outside the constructive scope: report partial result
    }

    // 1. slice X at regular values of p_a
    std::vector<Stratum> new_x;
    std::vector<StratumProvenance> new_prov;
    bool sliced = false;
    try {
      const std::vector<double> values = regular_values(faulty, opts.value_count,
                                                        derive_seed(seed, 77 + iter));
      const KuoField field(faulty);
      MultiSlice ms = slice_multi(Xf, field, values, opts.grid);
      for (std::size_t i = 0; i < ms.bands.size(); ++i) {
        new_prov.push_back({ms.bands[i].name(), "band", Xf.name(),
                            ms.band_index[i] > 0
                                ? values[static_cast<std::size_t>(ms.band_index[i] - 1)]
                                : values.front()});
        new_x.push_back(std::move(ms.bands[i]));
      }
      for (std::size_t i = 0; i < ms.levels.size(); ++i) {
        new_prov.push_back({ms.levels[i].name(), "level", Xf.name(),
                            values[static_cast<std::size_t>(ms.level_index[i])]});
        new_x.push_back(std::move(ms.levels[i]));
      }
      sliced = true;
      // widen the adjacency tolerance to the marching pitch
      double pitch = 0.0;
      for (const Chart& cc : Xf.charts()) {
        const Vec ext = cc.domain.hi - cc.domain.lo;
        const Mat j = cc.jacobian(cc.domain.center());
        pitch = std::max(pitch, (j * ext).norm() / opts.grid);
      }
      adjacency_tol = std::max(adjacency_tol, 2.0 * pitch);
    } catch (const Error&) {
      // p_a constant or unsliceable: fall back to excision only
      new_x = {Xf};
    }
    if (!sliced) new_x = {Xf};

    // 2. excise fault clusters of Y as 0-dimensional strata
    const Stratum::Sample ys = Yf.grid_sample(opts.scan_samples);
    std::vector<std::vector<double>> cuts(Yf.charts().size());
    std::vector<StratumProvenance> point_prov;
    std::vector<Stratum> new_y;
    int point_counter = 0;
    for (const FaultCluster& cluster : report.clusters) {
      for (int member : cluster.members) {
        const int chart = ys.chart[static_cast<std::size_t>(member)];
        const double t = ys.params(0, member);
        cuts[static_cast<std::size_t>(chart)].push_back(t);
      }
    }
    for (std::size_t c = 0; c < Yf.charts().size(); ++c) {
      const Chart& chart = Yf.charts()[c];
      std::vector<double>& cut = cuts[c];
      std::sort(cut.begin(), cut.end());
      cut.erase(std::unique(cut.begin(), cut.end()), cut.end());
      double lo = chart.domain.lo[0];
      bool lo_open = chart.domain.lo_open[0];
      int arc_counter = 0;
      auto emit_arc = [&](double a, bool a_open, double b, bool b_open) {
        if (!(a < b)) return;
        Chart piece = chart;
        Vec plo(1), phi(1);
        plo << a;
        phi << b;
        piece.domain = Box(plo, phi);
        piece.domain.lo_open[0] = a_open;
        piece.domain.hi_open[0] = b_open;
        const std::string name =
            Yf.name() + "_c" + std::to_string(c) + "_arc" + std::to_string(arc_counter++);
        new_y.push_back(Stratum::parametric(name, Yf.ambient_dim(), {std::move(piece)}));
        out.provenance.push_back({name, "arc", Yf.name(), kNaN});
      };
      for (double t : cut) {
        emit_arc(lo, lo_open, t, true);
        Vec u(1);
        u << t;
        const std::string pname = Yf.name() + "_pt" + std::to_string(point_counter++);
        new_y.push_back(Stratum::point(pname, chart.eval(u)));
        point_prov.push_back({pname, "point", Yf.name(), t});
        lo = t;
        lo_open = true;
      }
      emit_arc(lo, lo_open, chart.domain.hi[0], chart.domain.hi_open[0]);
    }

    // 3. assemble the new stratification
    SetDescription next;
    next.ambient_dim = out.set.ambient_dim;
    for (const Stratum& s : out.set.strata)
      if (s.name() != Xf.name() && s.name() != Yf.name() &&
          faulty_spec.x.find(s.name()) == std::string::npos)
        next.strata.push_back(s);
    for (Stratum& s : new_x) next.strata.push_back(std::move(s));
    for (Stratum& s : new_y) next.strata.push_back(std::move(s));
    for (const StratumProvenance& p : new_prov) out.provenance.push_back(p);
    for (const StratumProvenance& p : point_prov) out.provenance.push_back(p);

    // certified adjacency pairs among the new strata
    std::vector<std::vector<ChartBound>> bounds;
    for (const Stratum& s : next.strata) bounds.push_back(chart_bounds(s));
    for (std::size_t a = 0; a < next.strata.size(); ++a)
      for (std::size_t b = 0; b < next.strata.size(); ++b) {
        if (a == b) continue;
        const Stratum& A = next.strata[a];
        const Stratum& B = next.strata[b];
        if (!(B.dim() < A.dim())) continue;
        if (adjacent(A, bounds[a], B, adjacency_tol, 24))
          next.pairs.push_back({A.name(), B.name()});
      }
    out.set = std::move(next);
  }
}

std::string stratification_to_json(const Stratification& s) {
  nlohmann::json prov;
  prov["clean"] = s.clean;
  prov["iterations"] = s.iterations;
  prov["offending_pairs"] = s.offending_pairs;
  nlohmann::json strata = nlohmann::json::array();
  for (const StratumProvenance& p : s.provenance) {
    nlohmann::json e;
    e["name"] = p.name;
    e["origin"] = p.origin;
    if (!p.parent.empty()) e["parent"] = p.parent;
    if (!std::isnan(p.value)) e["value"] = p.value;
    strata.push_back(e);
  }
  prov["history"] = strata;
  SetDescription with_prov = s.set;
  with_prov.provenance = prov.dump();
  return set_to_json(with_prov);
}

}  // namespace strat
