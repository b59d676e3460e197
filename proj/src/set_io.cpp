#include "strat/set_io.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>

namespace strat {

using nlohmann::json;

const Stratum& SetDescription::find(const std::string& name) const {
  for (const Stratum& s : strata)
    if (s.name() == name) return s;
  throw Error("unknown stratum name '" + name + "'");
}

bool SetDescription::has(const std::string& name) const {
  for (const Stratum& s : strata)
    if (s.name() == name) return true;
  return false;
}

Stratum materialize_x(const SetDescription& set, const std::string& x_spec) {
  std::vector<std::string> names;
  std::size_t pos = 0;
  while (pos <= x_spec.size()) {
    const std::size_t plus = x_spec.find('+', pos);
    names.push_back(x_spec.substr(pos, plus == std::string::npos ? plus : plus - pos));
    if (plus == std::string::npos) break;
    pos = plus + 1;
  }
  if (names.size() == 1) return set.find(names[0]);
  std::vector<Chart> charts;
  for (const std::string& n : names) {
    const Stratum& s = set.find(n);
    if (s.kind() != Stratum::Kind::Parametric)
      throw Error("pair x '" + x_spec + "': unions require parametric strata");
    for (const Chart& c : s.charts()) charts.push_back(c);
  }
  return Stratum::parametric(x_spec, set.find(names[0]).ambient_dim(), std::move(charts));
}

PairXY materialize_pair(const SetDescription& set, const PairSpec& spec) {
  return PairXY(materialize_x(set, spec.x), set.find(spec.y));
}

namespace {

[[noreturn]] void schema_error(const std::string& path, const std::string& what) {
  throw Error("schema violation at " + path + ": " + what);
}

const json& need(const json& j, const char* key, const std::string& path) {
  if (!j.is_object() || !j.contains(key)) schema_error(path, std::string("missing '") + key + "'");
  return j.at(key);
}

std::vector<std::string> string_list(const json& j, const std::string& path) {
  if (!j.is_array()) schema_error(path, "expected an array of strings");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_string()) schema_error(path + "/" + std::to_string(i), "expected a string");
    out.push_back(j[i].get<std::string>());
  }
  return out;
}

Vec vec_of(const json& j, const std::string& path) {
  if (!j.is_array()) schema_error(path, "expected an array of numbers");
  Vec v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) schema_error(path + "/" + std::to_string(i), "expected a number");
    v[static_cast<Index>(i)] = j[i].get<double>();
  }
  return v;
}

std::vector<bool> bool_list(const json& j, std::size_t n, const std::string& path) {
  if (!j.is_array() || j.size() != n) schema_error(path, "expected an array of booleans");
  std::vector<bool> out(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    if (!j[i].is_boolean()) schema_error(path + "/" + std::to_string(i), "expected a boolean");
    out[i] = j[i].get<bool>();
  }
  return out;
}

Box box_of(const json& j, const std::string& path) {
  Box b(vec_of(need(j, "lo", path), path + "/lo"), vec_of(need(j, "hi", path), path + "/hi"));
  const std::size_t n = static_cast<std::size_t>(b.dim());
  if (j.contains("lo_open")) b.lo_open = bool_list(j.at("lo_open"), n, path + "/lo_open");
  if (j.contains("hi_open")) b.hi_open = bool_list(j.at("hi_open"), n, path + "/hi_open");
  return b;
}

std::vector<Expression> expr_list(const json& j, const std::vector<std::string>& vars,
                                  const std::string& path) {
  if (!j.is_array()) schema_error(path, "expected an array of expression strings");
  std::vector<Expression> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string p = path + "/" + std::to_string(i);
    if (!j[i].is_string()) schema_error(p, "expected a string");
    try {
      out.push_back(Expression::parse(j[i].get<std::string>(), vars));
    } catch (const ParseError& e) {
      schema_error(p, e.what());
    }
  }
  return out;
}

Chart chart_of(const json& j, Index ambient, const std::vector<std::string>& default_params,
               const std::string& path) {
  std::vector<std::string> params = default_params;
  if (j.contains("params")) params = string_list(j.at("params"), path + "/params");
  Chart c;
  c.map = expr_list(need(j, "map", path), params, path + "/map");
  if (static_cast<Index>(c.map.size()) != ambient)
    schema_error(path + "/map", "need exactly ambient_dim expressions");
  c.domain = box_of(need(j, "domain", path), path + "/domain");
  if (c.domain.dim() != static_cast<Index>(params.size()))
    schema_error(path + "/domain", "box dimension must match params");
  if (j.contains("inequalities"))
    c.inequalities = expr_list(j.at("inequalities"), params, path + "/inequalities");
  if (j.contains("label")) c.label = j.at("label").get<std::string>();
  return c;
}

Stratum stratum_of(const json& j, Index ambient, const std::string& path) {
  const std::string name = need(j, "name", path).get<std::string>();
  const std::string kind = need(j, "kind", path).get<std::string>();
  if (kind == "parametric") {
    std::vector<std::string> params;
    if (j.contains("params")) params = string_list(j.at("params"), path + "/params");
    std::vector<Chart> charts;
    if (j.contains("charts")) {
      const json& arr = j.at("charts");
      if (!arr.is_array() || arr.empty()) schema_error(path + "/charts", "expected a nonempty array");
      for (std::size_t i = 0; i < arr.size(); ++i)
        charts.push_back(chart_of(arr[i], ambient, params, path + "/charts/" + std::to_string(i)));
    } else {
      charts.push_back(chart_of(j, ambient, params, path));
    }
    return Stratum::parametric(name, ambient, std::move(charts));
  }
  if (kind == "implicit") {
    const std::vector<std::string> vars =
        string_list(need(j, "variables", path), path + "/variables");
    if (static_cast<Index>(vars.size()) != ambient)
      schema_error(path + "/variables", "need exactly ambient_dim variables");
    ImplicitForm form;
    form.equalities = expr_list(need(j, "equalities", path), vars, path + "/equalities");
    if (j.contains("inequalities"))
      form.inequalities = expr_list(j.at("inequalities"), vars, path + "/inequalities");
    if (j.contains("sampling_box"))
      form.sampling_box = box_of(j.at("sampling_box"), path + "/sampling_box");
    return Stratum::implicit(name, ambient, std::move(form));
  }
  schema_error(path + "/kind", "expected 'parametric' or 'implicit'");
}

json box_json(const Box& b) {
  json j;
  j["lo"] = std::vector<double>(b.lo.data(), b.lo.data() + b.lo.size());
  j["hi"] = std::vector<double>(b.hi.data(), b.hi.data() + b.hi.size());
  j["lo_open"] = b.lo_open;
  j["hi_open"] = b.hi_open;
  return j;
}

json chart_json(const Chart& c) {
  json j;
  std::vector<std::string> params =
      c.map.empty() ? std::vector<std::string>{} : c.map.front().variables();
  j["params"] = params;
  std::vector<std::string> map;
  for (const Expression& e : c.map) map.push_back(e.str());
  j["map"] = map;
  j["domain"] = box_json(c.domain);
  if (!c.inequalities.empty()) {
    std::vector<std::string> ineq;
    for (const Expression& e : c.inequalities) ineq.push_back(e.str());
    j["inequalities"] = ineq;
  }
  if (!c.label.empty()) j["label"] = c.label;
  return j;
}

}  // namespace

SetDescription load_set_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(std::string("invalid JSON: ") + e.what());
  }
  SetDescription set;
  const json& ambient = need(j, "ambient_dim", "");
  if (!ambient.is_number_integer() || ambient.get<int>() < 1)
    schema_error("/ambient_dim", "expected a positive integer");
  set.ambient_dim = ambient.get<Index>();
  const json& strata = need(j, "strata", "");
  if (!strata.is_array() || strata.empty())
    schema_error("/strata", "expected a nonempty array");
  for (std::size_t i = 0; i < strata.size(); ++i) {
    Stratum s = stratum_of(strata[i], set.ambient_dim, "/strata/" + std::to_string(i));
    if (set.has(s.name()))
      schema_error("/strata/" + std::to_string(i) + "/name", "duplicate stratum name");
    set.strata.push_back(std::move(s));
  }
  if (j.contains("pairs")) {
    const json& pairs = j.at("pairs");
    if (!pairs.is_array()) schema_error("/pairs", "expected an array");
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const std::string path = "/pairs/" + std::to_string(i);
      PairSpec spec{need(pairs[i], "x", path).get<std::string>(),
                    need(pairs[i], "y", path).get<std::string>()};
      // materialize now: unknown names and dimension defects surface at load
      PairXY pair = materialize_pair(set, spec);
      const PairValidation v = pair.validate(24);
      if (!v.ok) throw Error("pair invariant failure at " + path + ": " + v.message);
      set.pairs.push_back(std::move(spec));
    }
  }
  if (j.contains("provenance")) set.provenance = j.at("provenance").dump();
  return set;
}

SetDescription load_set(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open set file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return load_set_text(buf.str());
}

std::string set_to_json(const SetDescription& set) {
  json j;
  j["ambient_dim"] = set.ambient_dim;
  json strata = json::array();
  for (const Stratum& s : set.strata) {
    json e;
    e["name"] = s.name();
    if (s.kind() == Stratum::Kind::Parametric) {
      e["kind"] = "parametric";
      if (s.charts().size() == 1) {
        const json cj = chart_json(s.charts().front());
        for (auto it = cj.begin(); it != cj.end(); ++it) e[it.key()] = it.value();
      } else {
        json charts = json::array();
        for (const Chart& c : s.charts()) charts.push_back(chart_json(c));
        e["charts"] = charts;
      }
    } else {
      e["kind"] = "implicit";
      const ImplicitForm& f = s.implicit_form();
      e["variables"] = f.equalities.front().variables();
      std::vector<std::string> eqs;
      for (const Expression& ex : f.equalities) eqs.push_back(ex.str());
      e["equalities"] = eqs;
      if (!f.inequalities.empty()) {
        std::vector<std::string> ineqs;
        for (const Expression& ex : f.inequalities) ineqs.push_back(ex.str());
        e["inequalities"] = ineqs;
      }
      e["sampling_box"] = box_json(f.sampling_box);
    }
    strata.push_back(e);
  }
  j["strata"] = strata;
  json pairs = json::array();
  for (const PairSpec& p : set.pairs) pairs.push_back(json{{"x", p.x}, {"y", p.y}});
  j["pairs"] = pairs;
  if (!set.provenance.empty()) j["provenance"] = json::parse(set.provenance);
  return j.dump(2) + "\n";
}

void save_set(const SetDescription& set, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write set file '" + path + "'");
  out << set_to_json(set);
}

}  // namespace strat
