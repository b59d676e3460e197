#ifndef STRAT_FIXTURES_HPP
#define STRAT_FIXTURES_HPP

#include "strat/set_io.hpp"
#include "strat/strata.hpp"

namespace strat::fixtures {

// Certified example pairs with known regularity behavior. The returned
// PairXY holds the full X (union of sheets where applicable); the *_set
// variants expose chart-level strata plus pair references for file I/O.

// Y = unit circle in the z=0 plane; X = open annulus 1 < x^2+y^2 < 4 in
// that plane together with the open cone z^2 = (x-1)^2 + y^2, 0 < z < 1,
// minus its apex q = (1,0,0). The apex lies on Y: X has two local
// components there, only the annulus one essential, and condition (a)
// fails at q with score 1/2.
PairXY santa_hat();
SetDescription santa_hat_set();
Vec santa_hat_apex();

// X = {x^2 = z y^2, y != 0} (two parametric sheets u<0, u>0 of
// (u,v) -> (uv, u, v^2)); Y = the z-axis segment {(0,0,t): 0 <= t <= 1.5}.
PairXY whitney_umbrella();
SetDescription whitney_umbrella_set();

// X = cone z^2 = x^2 + y^2, 0 < z < 1.5; Y = {origin}. p_b vanishes along
// every ray (ruled surface through the base point).
PairXY cone();
SetDescription cone_set();

// X = paraboloid z = x^2 + y^2 minus the origin; Y = {origin}.
// p_b'(1,0,1) = 1/10.
PairXY paraboloid();
SetDescription paraboloid_set();

// X = open half-plane {y > 0, z = 0}; Y = its edge, the x-axis. Every
// verdict is regular; all Kuo traces vanish.
PairXY half_plane_pair();
SetDescription half_plane_pair_set();

// X = a quartic cusp sheet {(u, s u^4, 0): 0 < u <= 1, 0 < s < 1} adhering
// to Y = {(t,0,0): 0 <= t <= 1} along the whole segment, plus a rectangle
// inside the fiber plane x = 0 at distance ~0.32 from the origin. The
// fiber probe at y = 0 sees only the rectangle, so omega ~ 0.32 > 0.
PairXY offset_fiber_pair();
SetDescription offset_fiber_pair_set();

// all_pairs: name -> constructor, for sweep-style tests.
std::vector<std::pair<std::string, PairXY>> all_pairs();
SetDescription set_by_name(const std::string& name);

}  // namespace strat::fixtures

#endif
