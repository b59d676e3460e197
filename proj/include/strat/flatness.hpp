#ifndef STRAT_FLATNESS_HPP
#define STRAT_FLATNESS_HPP

#include "strat/strata.hpp"

namespace strat {

struct FlatnessResult {
  bool flat = true;
  double max_delta = 0.0;   // largest pairwise tangent angle seen
  Vec witness_a, witness_b;  // argmax pair of sample points
};

// Sampled test of eps-flatness: max pairwise delta of tangent planes over
// n_samples points. Dim-0 strata are flat for every eps.
FlatnessResult is_eps_flat(const Stratum& s, double eps, int n_samples, std::uint64_t seed);

// Recursive bisection of parametric domains along the longest edge until
// every piece is eps-flat (re-checked at 10x density before acceptance).
// Pieces partition the domain: split faces stay with the lower piece.
std::vector<Stratum> flatten(const Stratum& s, double eps, int max_pieces, std::uint64_t seed,
                             int base_samples = 24);

} // namespace strat

#endif
