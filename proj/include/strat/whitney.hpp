#ifndef STRAT_WHITNEY_HPP
#define STRAT_WHITNEY_HPP

#include "strat/sequence.hpp"

#include <optional>

namespace strat {

enum class Condition { A, B };

enum class VerdictStatus { Regular, Fault, Inconclusive };

// Budget-relative claim: Fault is witnessed, Regular means the adversarial
// search converged below tolerance, anything else is Inconclusive.
struct Verdict {
  VerdictStatus status = VerdictStatus::Inconclusive;
  double score = 0.0;  // best adversarial Kuo tail found
  double tolerance = 0.0;
  std::optional<GoodSequence> witness;
  int searches_run = 0;
  int searches_full = 0;
};

Verdict check_condition(const PairXY& pair, Condition condition, const Vec& y, double tol,
                        long budget, std::uint64_t seed, const SearchConfig& cfg = {});
Verdict check_a(const PairXY& pair, const Vec& y, double tol, long budget, std::uint64_t seed,
                const SearchConfig& cfg = {});
Verdict check_b(const PairXY& pair, const Vec& y, double tol, long budget, std::uint64_t seed,
                const SearchConfig& cfg = {});

struct FaultCluster {
  std::vector<int> members;  // indices into the scan's sample columns
  Vec centroid;
  double diameter = 0.0;
  bool isolated = false;  // diameter < 2 * sampling pitch
};

struct FaultReport {
  std::string pair_id;
  Condition condition = Condition::A;
  Mat samples;  // scanned base points, one column each
  std::vector<Verdict> verdicts;
  double pitch = 0.0;  // max spacing between consecutive grid samples
  int fault_count = 0;
  int inconclusive_count = 0;
  double fault_fraction = 0.0;
  std::vector<FaultCluster> clusters;
  double tol = 0.0;
  long budget = 0;
  std::uint64_t seed = 0;

  bool clean() const { return fault_count == 0 && inconclusive_count == 0; }
};

FaultReport scan_faults(const PairXY& pair, Condition condition, int y_samples, double tol,
                        long budget, std::uint64_t seed, int threads = 1,
                        const SearchConfig& cfg = {});

// Local connected components of X inside a Hardt-stable ball around y,
// found by neighbor-graph clustering at sample scale. Points closer to Y
// than the separation tube are clustered afterwards by secant direction,
// since distinct components touch each other only across Y.
struct LocalComponents {
  Vec base_point;
  double radius = 0.0;
  bool stable = false;
  Mat cloud;                // in-ball samples of X (one column per point)
  std::vector<int> labels;  // component id per column
  int n_components = 0;
  double pitch = 0.0;       // median nearest-neighbor spacing of the cloud
  std::vector<char> essential;  // filled by essential_flags

  Mat component(int id) const;
  int classify_direction(const Vec& x) const;  // nearest component in the link
};

LocalComponents local_components(const PairXY& pair, const Vec& y, std::uint64_t seed,
                                 double r0 = 0.5);

// A component is essential when every sampled y' in Y near y (within r/4)
// lies within sampling pitch of the component's cloud closure.
std::vector<char> essential_flags(const PairXY& pair, LocalComponents& comps,
                                  std::uint64_t seed);

// Kaloshin's restricted check: condition (a) with the adversarial search
// confined to essential components only.
Verdict sing_a_kaloshin(const PairXY& pair, const Vec& y, double tol, long budget,
                        std::uint64_t seed, const SearchConfig& cfg = {});

struct FiberProbe {
  double omega = 1.0;  // inf distance from y to the sampled fiber Z(y); 1 if empty
  int fiber_points = 0;
  std::optional<GoodSequence> fiber_sequence;
};

// Probes Z(y) = X intersect (y + N_yY): samples of X are pulled onto the
// fiber by Gauss-Newton on the tangential offset and accepted when the
// offset is below 1e-3 of their distance to y.
FiberProbe b_fiber_probe(const PairXY& pair, const Vec& y, std::uint64_t seed);

const char* to_string(VerdictStatus s);
const char* to_string(Condition c);

}  // namespace strat

#endif
