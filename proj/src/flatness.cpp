#include "strat/flatness.hpp"

#include <algorithm>
#include <deque>

namespace strat {

FlatnessResult is_eps_flat(const Stratum& s, double eps, int n_samples, std::uint64_t seed) {
  if (!(eps > 0.0 && eps <= 1.0)) throw Error("is_eps_flat: eps must lie in (0,1]");
  FlatnessResult out;
  if (s.dim() == 0) return out;  // dim-0 convention: flat for every eps
  if (n_samples < 2) throw Error("is_eps_flat: need at least 2 samples");
  const Stratum::Sample sample = s.sample(n_samples, seed);
  if (sample.points.cols() < 2) throw Error("is_eps_flat: sampling failed");

  std::vector<Subspace> tangents;
  tangents.reserve(static_cast<std::size_t>(sample.points.cols()));
  for (Index i = 0; i < sample.points.cols(); ++i) {
    if (s.kind() == Stratum::Kind::Parametric)
      tangents.push_back(s.tangent_space_chart(
          static_cast<std::size_t>(sample.chart[static_cast<std::size_t>(i)]), sample.params.col(i)));
    else
      tangents.push_back(s.tangent_space(sample.points.col(i)));
  }
  for (std::size_t i = 0; i < tangents.size(); ++i)
    for (std::size_t j = i + 1; j < tangents.size(); ++j) {
      const double d = angle(tangents[i], tangents[j]);  // equal dims: symmetric
      if (d > out.max_delta) {
        out.max_delta = d;
        out.witness_a = sample.points.col(static_cast<Index>(i));
        out.witness_b = sample.points.col(static_cast<Index>(j));
      }
    }
  out.flat = out.max_delta < eps;
  return out;
}

namespace {

// Flatness of one chart piece, sampled directly in the piece's box.
FlatnessResult piece_flatness(const Stratum& s, std::size_t chart_index, const Box& box,
                              double eps, int n_samples, std::uint64_t seed) {
  const Chart& chart = s.charts()[chart_index];
  FlatnessResult out;
  std::vector<Subspace> tangents;
  std::vector<Vec> pts;
  for (int i = 0; i < n_samples; ++i) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
    for (int attempt = 0; attempt < 64; ++attempt) {
      Vec u(box.dim());
      for (Index d = 0; d < box.dim(); ++d) u[d] = rng.uniform(box.lo[d], box.hi[d]);
      if (!box.contains(u)) continue;
      bool ok = true;
      for (const Expression& h : chart.inequalities)
        if (!(h.eval(u) > 0.0)) { ok = false; break; }
      if (!ok) continue;
      tangents.push_back(s.tangent_space_chart(chart_index, u));
      pts.push_back(chart.eval(u));
      break;
    }
  }
  for (std::size_t i = 0; i < tangents.size(); ++i)
    for (std::size_t j = i + 1; j < tangents.size(); ++j) {
      const double d = angle(tangents[i], tangents[j]);
      if (d > out.max_delta) {
        out.max_delta = d;
        out.witness_a = pts[i];
        out.witness_b = pts[j];
      }
    }
  out.flat = out.max_delta < eps;
  return out;
}

struct Piece {
  std::size_t chart;
  Box box;
};

bool box_lex_less(const Box& a, const Box& b) {
  for (Index d = 0; d < a.dim(); ++d) {
    if (a.lo[d] != b.lo[d]) return a.lo[d] < b.lo[d];
    if (a.hi[d] != b.hi[d]) return a.hi[d] < b.hi[d];
  }
  return false;
}

}  // namespace

std::vector<Stratum> flatten(const Stratum& s, double eps, int max_pieces, std::uint64_t seed,
                             int base_samples) {
  if (s.kind() != Stratum::Kind::Parametric)
    throw Error("flatten: only parametric strata are supported");
  if (!(eps > 0.0 && eps <= 1.0)) throw Error("flatten: eps must lie in (0,1]");
  if (max_pieces < 1) throw Error("flatten: max_pieces must be >= 1");

  std::vector<Piece> accepted;
  std::deque<Piece> queue;
  for (std::size_t c = 0; c < s.charts().size(); ++c) queue.push_back({c, s.charts()[c].domain});

  if (s.dim() == 0) {
    // dim-0 strata are flat by convention; one piece per chart
    std::vector<Stratum> out;
    int k = 0;
    for (const Chart& chart : s.charts())
      out.push_back(Stratum::parametric(s.name() + "_piece" + std::to_string(k++),
                                        s.ambient_dim(), {chart}));
    return out;
  }

  std::uint64_t piece_counter = 0;
  while (!queue.empty()) {
    if (static_cast<int>(accepted.size() + queue.size()) > max_pieces)
      throw Error("flatten: piece budget of " + std::to_string(max_pieces) + " exhausted");
    Piece p = queue.front();
    queue.pop_front();
    const std::uint64_t piece_seed = derive_seed(seed, 0xF1A7 + piece_counter++);
    const FlatnessResult base = piece_flatness(s, p.chart, p.box, eps, base_samples, piece_seed);
    bool ok = base.flat;
    if (ok) {
      // re-check at 10x density before accepting
      const FlatnessResult dense =
          piece_flatness(s, p.chart, p.box, eps, base_samples * 10, derive_seed(piece_seed, 1));
      ok = dense.flat;
    }
    if (ok) {
      accepted.push_back(std::move(p));
    } else {
      auto [lower, upper] = p.box.split(p.box.longest_edge());
      queue.push_back({p.chart, std::move(lower)});
      queue.push_back({p.chart, std::move(upper)});
    }
  }

  std::sort(accepted.begin(), accepted.end(), [](const Piece& a, const Piece& b) {
    if (a.chart != b.chart) return a.chart < b.chart;
    return box_lex_less(a.box, b.box);
  });

  std::vector<Stratum> out;
  for (std::size_t i = 0; i < accepted.size(); ++i) {
    Chart piece_chart = s.charts()[accepted[i].chart];
    piece_chart.domain = accepted[i].box;
    out.push_back(Stratum::parametric(s.name() + "_piece" + std::to_string(i), s.ambient_dim(),
                                      {std::move(piece_chart)}));
  }
  return out;
}

}  // namespace strat
