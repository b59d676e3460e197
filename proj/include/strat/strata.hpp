#ifndef STRAT_STRATA_HPP
#define STRAT_STRATA_HPP

#include "strat/expr.hpp"
#include "strat/grassmann.hpp"
#include "strat/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace strat {

// Axis-aligned parameter box with per-face openness. Faces created by
// subdivision are half-open so pieces tile the original box exactly.
struct Box {
  Vec lo, hi;
  std::vector<bool> lo_open, hi_open;

  Box() = default;
  Box(Vec lo_, Vec hi_);
  static Box cube(Index dim, double lo, double hi);
  static Box empty0() { return Box(Vec(0), Vec(0)); }

  Index dim() const { return lo.size(); }
  bool contains(const Vec& u, double tol = 0.0) const;
  // Clamp into the box, staying strictly inside open faces.
  Vec clamp_inside(Vec u, double rel_inset = 1e-9) const;
  double volume() const;
  Vec center() const { return 0.5 * (lo + hi); }
  Index longest_edge() const;
  // Split at the midpoint of `axis`; the shared face stays with the lower
  // piece (lower keeps a closed top, upper gets an open bottom).
  std::pair<Box, Box> split(Index axis) const;
  bool disjoint(const Box& other) const;  // exact interval test on endpoints
};

// One parametric patch: u in domain (minus strict-inequality boundary)
// mapped into ambient space.
struct Chart {
  std::vector<Expression> map;            // one expression per ambient coordinate
  Box domain;
  std::vector<Expression> inequalities;   // kept iff value > 0
  std::string label;

  Index param_dim() const { return domain.dim(); }
  Index ambient_dim() const { return static_cast<Index>(map.size()); }
  Vec eval(const Vec& u) const;
  Mat jacobian(const Vec& u) const;       // ambient x param
  bool feasible(const Vec& u, double box_tol = 0.0) const;
};

struct ImplicitForm {
  std::vector<Expression> equalities;     // zero set, over ambient variables
  std::vector<Expression> inequalities;   // strict > 0
  Box sampling_box;                       // ambient region used to seed draws
};

// A definable submanifold given either as a union of parametric charts
// (all of one parameter dimension) or implicitly.
class Stratum {
 public:
  enum class Kind { Parametric, Implicit };

  static Stratum parametric(std::string name, Index ambient_dim, std::vector<Chart> charts);
  static Stratum implicit(std::string name, Index ambient_dim, ImplicitForm form);
  static Stratum point(std::string name, const Vec& location);

  const std::string& name() const { return name_; }
  void rename(std::string name) { name_ = std::move(name); }
  Index ambient_dim() const { return ambient_dim_; }
  Index dim() const { return dim_; }
  Kind kind() const { return kind_; }
  const std::vector<Chart>& charts() const { return charts_; }
  const ImplicitForm& implicit_form() const { return implicit_; }

  struct Near {
    Vec point;
    double distance = 0.0;
    int chart = -1;  // -1 for implicit strata
    Vec param;       // parameter of `point` (parametric only)
  };
  Near nearest(const Vec& q) const;
  Vec nearest_point(const Vec& q) const { return nearest(q).point; }

  double residual(const Vec& x) const;
  bool contains(const Vec& x, double tol = 1e-8) const;

  Subspace tangent_space(const Vec& x) const;
  Subspace tangent_space_chart(std::size_t chart, const Vec& u) const;

  struct Sample {
    Mat points;               // one column per point
    Mat params;               // parametric: one column per point (param dim rows)
    std::vector<int> chart;   // chart index per point (-1 for implicit)
    bool truncated = false;   // fewer points than requested
  };
  // Deterministic per (seed, index): parallel sampling reproduces
  // sequential output point for point.
  Sample sample(int n, std::uint64_t seed) const;

  // Deterministic parameter-grid sample (parametric strata). Closed 1-d
  // boxes receive an odd point count so box midpoints are always included.
  Sample grid_sample(int n) const;

  // Rank checks at sampled points (immersion / регularity); throws on failure.
  void verify(int n_samples, std::uint64_t seed) const;

  // Nearest point with the search restricted to one chart.
  Near nearest_on_chart(std::size_t chart, const Vec& q) const;

 private:
  Stratum() = default;
  bool chart_affine(std::size_t c) const;

  std::string name_;
  Index ambient_dim_ = 0;
  Index dim_ = 0;
  Kind kind_ = Kind::Parametric;
  std::vector<Chart> charts_;
  ImplicitForm implicit_;
  mutable std::vector<int> affine_cache_;  // -1 unknown, 0 no, 1 yes
};

struct PairValidation {
  bool ok = true;
  double max_gap = 0.0;  // worst distance from a sampled Y point to closure(X)
  std::string message;
};

// Ordered pair (X, Y) with Y inside closure(X) \ X; the object every
// regularity test acts on.
class PairXY {
 public:
  PairXY(Stratum x, Stratum y);

  const Stratum& X() const { return x_; }
  const Stratum& Y() const { return y_; }
  Index ambient_dim() const { return x_.ambient_dim(); }

  // Sampled certification of Y subset closure(X): every grid point of Y
  // must be within `tol` of the nearest point of X's closure.
  PairValidation validate(int n_samples, double tol = 1e-5) const;

 private:
  Stratum x_, y_;
};

}  // namespace strat

#endif
