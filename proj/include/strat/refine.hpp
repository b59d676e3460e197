#ifndef STRAT_REFINE_HPP
#define STRAT_REFINE_HPP

#include "strat/set_io.hpp"
#include "strat/whitney.hpp"

namespace strat {

// p_a as a scalar field over X, with the Kuo frame taken at the nearest
// point of Y to each evaluation point. Evaluations along grids reuse the
// previous Y-projection as a warm start. Returns NaN where the tangent
// space is degenerate or the point infeasible.
class KuoField {
 public:
  explicit KuoField(const PairXY& pair);
  double eval(std::size_t chart_index, const Vec& u) const;
  const PairXY& pair() const { return *pair_; }

 private:
  const PairXY* pair_;
  mutable std::vector<Vec> warm_;  // per Y-chart warm parameters
};

// Sard-style proxy: values of p_a spread over the sampled range at
// histogram locations whose finite-difference gradient magnitude exceeds
// the 10th percentile. Throws when p_a is constant on the sample.
std::vector<double> regular_values(const PairXY& pair, int count, std::uint64_t seed,
                                   int min_samples = 4096);

struct SliceResult {
  std::vector<Stratum> below;
  std::vector<Stratum> level;
  std::vector<Stratum> above;
};

// Level-set extraction of `field` = eps on a parametric X of parameter
// dimension <= 2 by marching squares (edge roots sharpened by bisection,
// segments subdivided until interior points classify within 1e-6). Sign
// regions become multi-box band strata from the uncut grid cells.
SliceResult slice(const Stratum& x, const KuoField& field, double eps, int grid = 256);

struct StratumProvenance {
  std::string name;
  std::string origin;  // input | band | level | arc | point
  std::string parent;
  double value = std::numeric_limits<double>::quiet_NaN();  // slicing value / cut parameter
};

struct RefineOptions {
  int scan_samples = 64;
  long check_budget = 768;
  int grid = 256;
  int value_count = 3;
  Condition condition = Condition::A;
  int threads = 1;
  SearchConfig search;
};

struct Stratification {
  SetDescription set;  // strata plus certified adjacency pairs
  std::vector<StratumProvenance> provenance;
  bool clean = false;
  int iterations = 0;
  std::vector<std::string> offending_pairs;
  std::vector<FaultReport> last_reports;
};

// The constructive loop: scan faults, slice X at regular values of p_a,
// excise fault clusters of Y as 0-dimensional strata, and re-scan the new
// pairs until clean, the dimension stop, or the iteration budget.
Stratification refine_until_regular(const PairXY& pair, double tol, int budget_iterations,
                                    std::uint64_t seed, const RefineOptions& opts = {});

std::string stratification_to_json(const Stratification& s);

}  // namespace strat

#endif
