#ifndef STRAT_SEQUENCE_HPP
#define STRAT_SEQUENCE_HPP

#include "strat/kuo.hpp"
#include "strat/strata.hpp"

#include <functional>
#include <optional>

namespace strat {

struct RadiusSchedule {
  double r0 = 0.5;
  double ratio = 0.7;
  int length = 24;
};

struct SearchConfig {
  RadiusSchedule schedule;
  // Aperture of the directional search cone (the paper leaves it open);
  // reported with every result.
  double cone_aperture = 0.25;
  double grassmann_tol = 0.05;  // tangent-tail Cauchy tolerance
  int shell_eval_cap = 56;      // objective evaluations per shell
  int min_directions = 32;     // base multi-start block, fixed per seed
  double fiber_weight = 0.0;    // extra pull toward the Y-normal fiber
};

// A sampled sequence in X converging to a base point, with tangent spaces,
// their Grassmannian limit, and the Kuo traces along the way.
struct GoodSequence {
  Mat points;  // one column per element, outermost first
  std::vector<double> radii;
  std::vector<Subspace> tangents;
  Subspace limit{0};
  bool converged = false;
  bool truncated = false;
  std::vector<double> pa_trace;
  std::vector<double> pb_trace;
  Vec direction_tag;
  double cone_aperture = 0.25;

  std::size_t size() const { return radii.size(); }
  double tail(const std::vector<double>& trace) const;
  double pa_tail() const { return tail(pa_trace); }
  double pb_tail() const { return tail(pb_trace); }
};

enum class KuoTrace { PA, PB };

// Directional good-sequence construction: per shell r_n = r0 ratio^n, finds
// a point of X at distance within a factor sqrt(2) of r_n that best aligns
// the secant with `dir`, tracking from the previous shell. Truncates when a
// shell yields no point.
GoodSequence directional_sequence(const PairXY& pair, const Vec& y, const Vec& dir,
                                  const RadiusSchedule& schedule, std::uint64_t seed,
                                  const SearchConfig& cfg = {});

// Multi-start search over low-discrepancy sphere directions plus a
// refinement phase, returning the sequence with the smallest (or, for the
// adversarial checks, largest) Kuo tail. Prefix-stable in `budget`: doubling
// the budget never worsens the returned tail.
struct TailSearchOptions {
  KuoTrace trace = KuoTrace::PA;
  bool maximize = false;
  std::vector<Vec> preferred_directions;           // searched first
  std::function<bool(const Vec&)> region;          // optional membership gate
  SearchConfig cfg;
};

struct TailSearchOutcome {
  GoodSequence best;
  int searches_run = 0;
  int searches_full = 0;  // full length and Grassmann-converged
  bool any_sequence = false;
};

TailSearchOutcome search_tail(const PairXY& pair, const Vec& y, long budget, std::uint64_t seed,
                              const TailSearchOptions& options);

GoodSequence minimize_pa_sequence(const PairXY& pair, const Vec& y, long budget,
                                  std::uint64_t seed, const SearchConfig& cfg = {});
GoodSequence minimize_pb_sequence(const PairXY& pair, const Vec& y, long budget,
                                  std::uint64_t seed, const SearchConfig& cfg = {});

}  // namespace strat

#endif
