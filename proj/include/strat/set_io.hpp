#ifndef STRAT_SET_IO_HPP
#define STRAT_SET_IO_HPP

#include "strat/strata.hpp"

#include <string>
#include <vector>

namespace strat {

// A pair reference inside a set description. `x` may be a single stratum
// name or a "+"-joined union of parametric strata of equal dimension.
struct PairSpec {
  std::string x;
  std::string y;
};

struct SetDescription {
  Index ambient_dim = 0;
  std::vector<Stratum> strata;
  std::vector<PairSpec> pairs;
  std::string provenance;  // raw JSON object text, preserved verbatim; may be empty

  const Stratum& find(const std::string& name) const;
  bool has(const std::string& name) const;
};

// Builds the (possibly union) stratum named by a pair's x entry.
Stratum materialize_x(const SetDescription& set, const std::string& x_spec);
PairXY materialize_pair(const SetDescription& set, const PairSpec& spec);

// JSON schema:
// {
//   "ambient_dim": n,
//   "strata": [
//     {"name": ..., "kind": "parametric", "params": ["u","v"],
//      "map": ["expr", ...], "domain": {"lo": [...], "hi": [...],
//      "lo_open": [...], "hi_open": [...]}, "inequalities": ["expr", ...]}
//     | {"name": ..., "kind": "parametric", "params": [...],
//        "charts": [{"map": [...], "domain": {...}, "inequalities": [...]}, ...]}
//     | {"name": ..., "kind": "implicit", "variables": ["x","y","z"],
//        "equalities": [...], "inequalities": [...], "sampling_box": {...}}
//   ],
//   "pairs": [{"x": "name-or-a+b", "y": "name"}, ...],
//   "provenance": {... optional, preserved verbatim ...}
// }
// Schema violations are reported with JSON pointer paths.
SetDescription load_set(const std::string& path);
SetDescription load_set_text(const std::string& json_text);

std::string set_to_json(const SetDescription& set);
void save_set(const SetDescription& set, const std::string& path);

}  // namespace strat

#endif
