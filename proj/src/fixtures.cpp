#include "strat/fixtures.hpp"

namespace strat::fixtures {

namespace {

Expression pe(const std::string& text, const std::vector<std::string>& vars) {
  return Expression::parse(text, vars);
}

Box open_box(Vec lo, Vec hi, std::vector<bool> lo_open, std::vector<bool> hi_open) {
  Box b(std::move(lo), std::move(hi));
  b.lo_open = std::move(lo_open);
  b.hi_open = std::move(hi_open);
  return b;
}

Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

Vec v1(double a) {
  Vec v(1);
  v << a;
  return v;
}

// Rational circle atlas: chart A covers the closed right semicircle
// (t in [-1,1], t=0 at (1,0)), chart B the open left one.
std::vector<Chart> circle_charts(double radius_expr_scale) {
  (void)radius_expr_scale;
  const std::vector<std::string> vars{"t"};
  Chart right;
  right.map = {pe("(1 - t^2)/(1 + t^2)", vars), pe("2*t/(1 + t^2)", vars), pe("0", vars)};
  right.domain = Box(v1(-1.0), v1(1.0));
  right.label = "right";
  Chart left;
  left.map = {pe("-(1 - t^2)/(1 + t^2)", vars), pe("2*t/(1 + t^2)", vars), pe("0", vars)};
  left.domain = open_box(v1(-1.0), v1(1.0), {true}, {true});
  left.label = "left";
  return {right, left};
}

Stratum annulus_stratum() {
  const std::vector<std::string> vars{"t", "r"};
  Chart right;
  right.map = {pe("r*(1 - t^2)/(1 + t^2)", vars), pe("r*2*t/(1 + t^2)", vars), pe("0", vars)};
  right.domain = open_box(v2(-1.0, 1.0), v2(1.0, 2.0), {false, true}, {false, true});
  right.label = "right";
  Chart left;
  left.map = {pe("-r*(1 - t^2)/(1 + t^2)", vars), pe("r*2*t/(1 + t^2)", vars), pe("0", vars)};
  left.domain = open_box(v2(-1.0, 1.0), v2(1.0, 2.0), {true, true}, {true, true});
  left.label = "left";
  return Stratum::parametric("annulus", 3, {right, left});
}

Stratum hat_cone_stratum() {
  const std::vector<std::string> vars{"t", "h"};
  Chart right;
  right.map = {pe("1 + h*(1 - t^2)/(1 + t^2)", vars), pe("h*2*t/(1 + t^2)", vars),
               pe("h", vars)};
  right.domain = open_box(v2(-1.0, 0.0), v2(1.0, 1.0), {false, true}, {false, true});
  right.label = "right";
  Chart left;
  left.map = {pe("1 - h*(1 - t^2)/(1 + t^2)", vars), pe("h*2*t/(1 + t^2)", vars), pe("h", vars)};
  left.domain = open_box(v2(-1.0, 0.0), v2(1.0, 1.0), {true, true}, {true, true});
  left.label = "left";
  return Stratum::parametric("cone", 3, {right, left});
}

Stratum circle_stratum() { return Stratum::parametric("circle", 3, circle_charts(1.0)); }

Stratum union_of(const std::string& name, const Stratum& a, const Stratum& b) {
  std::vector<Chart> charts = a.charts();
  for (const Chart& c : b.charts()) charts.push_back(c);
  return Stratum::parametric(name, a.ambient_dim(), std::move(charts));
}

}  // namespace

Vec santa_hat_apex() {
  Vec q(3);
  q << 1.0, 0.0, 0.0;
  return q;
}

PairXY santa_hat() {
  return PairXY(union_of("annulus+cone", annulus_stratum(), hat_cone_stratum()),
                circle_stratum());
}

SetDescription santa_hat_set() {
  SetDescription set;
  set.ambient_dim = 3;
  set.strata = {annulus_stratum(), hat_cone_stratum(), circle_stratum()};
  set.pairs = {{"annulus+cone", "circle"}, {"annulus", "circle"}};
  return set;
}

namespace {

Stratum umbrella_surface() {
  const std::vector<std::string> vars{"u", "v"};
  Chart pos;
  pos.map = {pe("u*v", vars), pe("u", vars), pe("v^2", vars)};
  pos.domain = open_box(v2(0.0, -1.3), v2(1.5, 1.3), {true, false}, {false, false});
  pos.label = "u_pos";
  Chart neg;
  neg.map = {pe("u*v", vars), pe("u", vars), pe("v^2", vars)};
  neg.domain = open_box(v2(-1.5, -1.3), v2(0.0, 1.3), {false, false}, {true, false});
  neg.label = "u_neg";
  return Stratum::parametric("umbrella", 3, {pos, neg});
}

Stratum z_axis_segment() {
  const std::vector<std::string> vars{"t"};
  Chart c;
  c.map = {pe("0", vars), pe("0", vars), pe("t", vars)};
  c.domain = Box(v1(0.0), v1(1.5));
  return Stratum::parametric("axis", 3, {c});
}

}  // namespace

PairXY whitney_umbrella() { return PairXY(umbrella_surface(), z_axis_segment()); }

SetDescription whitney_umbrella_set() {
  SetDescription set;
  set.ambient_dim = 3;
  set.strata = {umbrella_surface(), z_axis_segment()};
  set.pairs = {{"umbrella", "axis"}};
  return set;
}

namespace {

Stratum cone_surface() {
  const std::vector<std::string> vars{"t", "h"};
  Chart right;
  right.map = {pe("h*(1 - t^2)/(1 + t^2)", vars), pe("h*2*t/(1 + t^2)", vars), pe("h", vars)};
  right.domain = open_box(v2(-1.0, 0.0), v2(1.0, 1.5), {false, true}, {false, true});
  right.label = "right";
  Chart left;
  left.map = {pe("-h*(1 - t^2)/(1 + t^2)", vars), pe("h*2*t/(1 + t^2)", vars), pe("h", vars)};
  left.domain = open_box(v2(-1.0, 0.0), v2(1.0, 1.5), {true, true}, {true, true});
  left.label = "left";
  return Stratum::parametric("cone_surface", 3, {right, left});
}

Stratum origin_point() { return Stratum::point("origin", Vec::Zero(3)); }

}  // namespace

PairXY cone() { return PairXY(cone_surface(), origin_point()); }

SetDescription cone_set() {
  SetDescription set;
  set.ambient_dim = 3;
  set.strata = {cone_surface(), origin_point()};
  set.pairs = {{"cone_surface", "origin"}};
  return set;
}

namespace {

Stratum paraboloid_surface() {
  const std::vector<std::string> vars{"u", "v"};
  Chart c;
  c.map = {pe("u", vars), pe("v", vars), pe("u^2 + v^2", vars)};
  c.domain = Box(v2(-1.5, -1.5), v2(1.5, 1.5));
  c.inequalities = {pe("u^2 + v^2", vars)};
  return Stratum::parametric("paraboloid", 3, {c});
}

}  // namespace

PairXY paraboloid() { return PairXY(paraboloid_surface(), origin_point()); }

SetDescription paraboloid_set() {
  SetDescription set;
  set.ambient_dim = 3;
  set.strata = {paraboloid_surface(), origin_point()};
  set.pairs = {{"paraboloid", "origin"}};
  return set;
}

namespace {

Stratum half_plane() {
  const std::vector<std::string> vars{"u", "v"};
  Chart c;
  c.map = {pe("u", vars), pe("v", vars), pe("0", vars)};
  c.domain = open_box(v2(-2.0, 0.0), v2(2.0, 2.0), {false, true}, {false, false});
  return Stratum::parametric("half_plane", 3, {c});
}

Stratum x_axis_segment(double lo, double hi, const std::string& name) {
  const std::vector<std::string> vars{"t"};
  Chart c;
  c.map = {pe("t", vars), pe("0", vars), pe("0", vars)};
  c.domain = Box(v1(lo), v1(hi));
  return Stratum::parametric(name, 3, {c});
}

}  // namespace

PairXY half_plane_pair() { return PairXY(half_plane(), x_axis_segment(-2.0, 2.0, "edge")); }

SetDescription half_plane_pair_set() {
  SetDescription set;
  set.ambient_dim = 3;
  set.strata = {half_plane(), x_axis_segment(-2.0, 2.0, "edge")};
  set.pairs = {{"half_plane", "edge"}};
  return set;
}

namespace {

Stratum offset_fiber_x() {
  const std::vector<std::string> vars{"u", "s"};
  Chart sheet;
  sheet.map = {pe("u", vars), pe("s*u^4", vars), pe("0", vars)};
  sheet.domain = open_box(v2(0.0, 0.0), v2(1.0, 1.0), {true, true}, {false, true});
  sheet.label = "sheet";
  Chart lobe;
  lobe.map = {pe("0", vars), pe("0.3 + 0.2*u", vars), pe("0.2*s - 0.1", vars)};
  lobe.domain = Box(v2(0.0, 0.0), v2(1.0, 1.0));
  lobe.label = "lobe";
  return Stratum::parametric("offset_x", 3, {sheet, lobe});
}

}  // namespace

PairXY offset_fiber_pair() {
  return PairXY(offset_fiber_x(), x_axis_segment(0.0, 1.0, "base"));
}

SetDescription offset_fiber_pair_set() {
  SetDescription set;
  set.ambient_dim = 3;
  set.strata = {offset_fiber_x(), x_axis_segment(0.0, 1.0, "base")};
  set.pairs = {{"offset_x", "base"}};
  return set;
}

std::vector<std::pair<std::string, PairXY>> all_pairs() {
  std::vector<std::pair<std::string, PairXY>> out;
  out.emplace_back("santa_hat", santa_hat());
  out.emplace_back("whitney_umbrella", whitney_umbrella());
  out.emplace_back("cone", cone());
  out.emplace_back("paraboloid", paraboloid());
  out.emplace_back("half_plane_pair", half_plane_pair());
  out.emplace_back("offset_fiber_pair", offset_fiber_pair());
  return out;
}

SetDescription set_by_name(const std::string& name) {
  if (name == "santa_hat") return santa_hat_set();
  if (name == "whitney_umbrella") return whitney_umbrella_set();
  if (name == "cone") return cone_set();
  if (name == "paraboloid") return paraboloid_set();
  if (name == "half_plane_pair") return half_plane_pair_set();
  if (name == "offset_fiber_pair") return offset_fiber_pair_set();
  throw Error("unknown fixture '" + name + "'");
}

}  // namespace strat::fixtures
