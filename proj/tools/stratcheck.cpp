// stratcheck: Whitney condition (a)/(b) checks, fault scans, local
// components, flatness subdivision, and the refinement loop over
// semialgebraic set descriptions.

#include "strat/fixtures.hpp"
#include "strat/flatness.hpp"
#include "strat/refine.hpp"
#include "strat/reports.hpp"
#include "strat/set_io.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

using namespace strat;

Vec parse_point(const std::string& text) {
  std::vector<double> coords;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = text.find(',', pos);
    const std::string piece =
        text.substr(pos, comma == std::string::npos ? comma : comma - pos);
    try {
      coords.push_back(std::stod(piece));
    } catch (const std::exception&) {
      throw Error("--point: bad coordinate '" + piece + "'");
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  Vec p(static_cast<Index>(coords.size()));
  for (std::size_t i = 0; i < coords.size(); ++i) p[static_cast<Index>(i)] = coords[i];
  return p;
}

PairSpec parse_pair(const std::string& text) {
  const std::size_t comma = text.find(',');
  if (comma == std::string::npos)
    throw Error("--pair: expected 'xname,yname' (x may be a '+'-union)");
  return PairSpec{text.substr(0, comma), text.substr(comma + 1)};
}

void write_out(const std::string& path, const std::string& content) {
  if (path.empty()) return;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << content;
}

struct CommonArgs {
  std::string set_path;
  std::string pair_text;
  double tol = 0.1;
  long budget = 2000;
  std::uint64_t seed = 42;
  int threads = 0;
  std::string out_path;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool with_pair = true) {
  cmd->add_option("--set", args.set_path, "set description JSON file")->required();
  if (with_pair)
    cmd->add_option("--pair", args.pair_text, "pair as 'xname,yname' (x may be 'a+b')")
        ->required();
  cmd->add_option("--tol", args.tol, "fault tolerance on the Kuo tail");
  cmd->add_option("--budget", args.budget, "search budget (shell-point evaluations)");
  cmd->add_option("--seed", args.seed, "RNG seed (printed with every run)");
  cmd->add_option("--threads", args.threads, "worker threads (0 = cores / STRATCHECK_THREADS)");
  cmd->add_option("--out", args.out_path, "write the CSV/JSON artifact here as well");
}

int exit_code_for(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::Regular: return 0;
    case VerdictStatus::Fault: return 1;
    case VerdictStatus::Inconclusive: return 2;
  }
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stratcheck: numerical Whitney (a)/(b) regularity toolkit"};
  app.require_subcommand(1);

  CommonArgs check_args;
  std::string check_point;
  CLI::App* check_a_cmd = app.add_subcommand("check-a", "condition (a) at one base point");
  CLI::App* check_b_cmd = app.add_subcommand("check-b", "condition (b) at one base point");
  for (CLI::App* cmd : {check_a_cmd, check_b_cmd}) {
    add_common(cmd, check_args);
    cmd->add_option("--point", check_point, "base point 'c1,c2,...' on Y")->required();
  }

  CommonArgs scan_args;
  std::string scan_condition = "a";
  int scan_samples = 64;
  CLI::App* scan_cmd = app.add_subcommand("scan", "fault scan over a grid of Y samples");
  add_common(scan_cmd, scan_args);
  scan_cmd->add_option("--condition", scan_condition, "a or b")
      ->check(CLI::IsMember({"a", "b"}));
  scan_cmd->add_option("--samples", scan_samples, "number of Y grid samples");

  CommonArgs comp_args;
  std::string comp_point;
  double comp_radius = 0.5;
  CLI::App* comp_cmd = app.add_subcommand("components", "local connected components at a point");
  add_common(comp_cmd, comp_args);
  comp_cmd->add_option("--point", comp_point, "base point on Y")->required();
  comp_cmd->add_option("--radius", comp_radius, "initial Hardt-stability radius");

  CommonArgs flat_args;
  std::string flat_stratum;
  double flat_eps = 0.5;
  int flat_max_pieces = 4096;
  CLI::App* flat_cmd = app.add_subcommand("flatten", "eps-flat subdivision of a stratum");
  flat_cmd->add_option("--set", flat_args.set_path, "set description JSON file")->required();
  flat_cmd->add_option("--stratum", flat_stratum, "stratum name")->required();
  flat_cmd->add_option("--eps", flat_eps, "flatness bound in (0,1]")->required();
  flat_cmd->add_option("--max-pieces", flat_max_pieces, "piece budget");
  flat_cmd->add_option("--seed", flat_args.seed, "RNG seed");
  flat_cmd->add_option("--out", flat_args.out_path, "write the pieces as a set JSON");

  CommonArgs refine_args;
  refine_args.budget = 3;
  int refine_samples = 64;
  long refine_check_budget = 768;
  int refine_grid = 256;
  CLI::App* refine_cmd = app.add_subcommand("refine", "level-set refinement until fault-free");
  add_common(refine_cmd, refine_args);
  refine_cmd->add_option("--samples", refine_samples, "Y grid samples per scan");
  refine_cmd->add_option("--check-budget", refine_check_budget, "per-verdict search budget");
  refine_cmd->add_option("--grid", refine_grid, "marching-squares grid resolution");

  CommonArgs export_args;
  std::string export_format = "json";
  int export_samples = 2000;
  CLI::App* export_cmd = app.add_subcommand("export", "export set / sample cloud artifacts");
  export_cmd->add_option("--set", export_args.set_path, "set description JSON file")->required();
  export_cmd->add_option("--format", export_format, "csv, json, or ply")
      ->check(CLI::IsMember({"csv", "json", "ply"}));
  export_cmd->add_option("--out", export_args.out_path, "output path")->required();
  export_cmd->add_option("--pair", export_args.pair_text,
                         "pair used for the p_a coloring (csv/ply)");
  export_cmd->add_option("--samples", export_samples, "points per stratum (csv/ply)");
  export_cmd->add_option("--seed", export_args.seed, "RNG seed");

  std::string fixture_name;
  std::string fixture_out;
  CLI::App* fixture_cmd = app.add_subcommand("fixture", "write a built-in fixture set JSON");
  fixture_cmd->add_option("--name", fixture_name,
                          "santa_hat, whitney_umbrella, cone, paraboloid, half_plane_pair, "
                          "offset_fiber_pair")
      ->required();
  fixture_cmd->add_option("--out", fixture_out, "output path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 3;
  }

  try {
    if (*check_a_cmd || *check_b_cmd) {
      const Condition cond = *check_a_cmd ? Condition::A : Condition::B;
      const SetDescription set = load_set(check_args.set_path);
      const PairXY pair = materialize_pair(set, parse_pair(check_args.pair_text));
      const Vec y = parse_point(check_point);
      SearchConfig cfg;
      const Verdict v =
          check_condition(pair, cond, y, check_args.tol, check_args.budget, check_args.seed, cfg);
      std::string csv =
          run_header(*check_a_cmd ? "check-a" : "check-b", check_args.seed, check_args.tol,
                     check_args.budget, cfg.cone_aperture);
      csv += verdict_csv_header(y.size());
      csv += verdict_csv_row(y, v);
      std::cout << csv;
      write_out(check_args.out_path, csv);
      return exit_code_for(v.status);
    }

    if (*scan_cmd) {
      const SetDescription set = load_set(scan_args.set_path);
      const PairXY pair = materialize_pair(set, parse_pair(scan_args.pair_text));
      SearchConfig cfg;
      const FaultReport report = scan_faults(
          pair, scan_condition == "a" ? Condition::A : Condition::B, scan_samples, scan_args.tol,
          scan_args.budget, scan_args.seed, resolve_thread_count(scan_args.threads), cfg);
      std::string csv = run_header("scan", scan_args.seed, scan_args.tol, scan_args.budget,
                                   cfg.cone_aperture);
      csv += fault_report_csv(report);
      std::cout << csv;
      if (!scan_args.out_path.empty()) {
        if (scan_args.out_path.size() > 5 &&
            scan_args.out_path.substr(scan_args.out_path.size() - 5) == ".json")
          write_out(scan_args.out_path, fault_report_json(report));
        else
          write_out(scan_args.out_path, csv);
      }
      std::cout << "# faults=" << report.fault_count << " clusters=" << report.clusters.size()
                << " inconclusive=" << report.inconclusive_count
                << " fault_fraction=" << format_double(report.fault_fraction) << "\n";
      if (report.fault_count > 0) return 1;
      if (report.inconclusive_count > 0) return 2;
      return 0;
    }

    if (*comp_cmd) {
      const SetDescription set = load_set(comp_args.set_path);
      const PairXY pair = materialize_pair(set, parse_pair(comp_args.pair_text));
      const Vec y = parse_point(comp_point);
      LocalComponents comps = local_components(pair, y, comp_args.seed, comp_radius);
      essential_flags(pair, comps, comp_args.seed);
      std::string out = run_header("components", comp_args.seed, comp_args.tol, comp_args.budget,
                                   SearchConfig{}.cone_aperture);
      out += "n_components,radius,stable,pitch\n";
      out += std::to_string(comps.n_components) + "," + format_double(comps.radius) + "," +
             (comps.stable ? "1" : "0") + "," + format_double(comps.pitch) + "\n";
      out += "component,essential,points\n";
      for (int c = 0; c < comps.n_components; ++c) {
        int size = 0;
        for (int l : comps.labels)
          if (l == c) ++size;
        out += std::to_string(c) + "," +
               (comps.essential[static_cast<std::size_t>(c)] ? "1" : "0") + "," +
               std::to_string(size) + "\n";
      }
      std::cout << out;
      write_out(comp_args.out_path, out);
      return 0;
    }

    if (*flat_cmd) {
      const SetDescription set = load_set(flat_args.set_path);
      const Stratum& s = set.find(flat_stratum);
      std::vector<Stratum> pieces;
      try {
        pieces = flatten(s, flat_eps, flat_max_pieces, flat_args.seed);
      } catch (const Error& e) {
        std::cerr << "flatten: " << e.what() << "\n";
        return 2;  // budget exhausted / unsupported input is a partial outcome
      }
      SetDescription out_set;
      out_set.ambient_dim = set.ambient_dim;
      out_set.strata = pieces;
      std::cout << run_header("flatten", flat_args.seed, flat_eps, flat_max_pieces,
                              SearchConfig{}.cone_aperture);
      std::cout << "# pieces=" << pieces.size() << "\n";
      if (!flat_args.out_path.empty()) save_set(out_set, flat_args.out_path);
      return 0;
    }

    if (*refine_cmd) {
      const SetDescription set = load_set(refine_args.set_path);
      const PairXY pair = materialize_pair(set, parse_pair(refine_args.pair_text));
      RefineOptions opts;
      opts.scan_samples = refine_samples;
      opts.check_budget = refine_check_budget;
      opts.grid = refine_grid;
      opts.threads = resolve_thread_count(refine_args.threads);
      const Stratification result = refine_until_regular(
          pair, refine_args.tol, static_cast<int>(refine_args.budget), refine_args.seed, opts);
      std::cout << run_header("refine", refine_args.seed, refine_args.tol, refine_args.budget,
                              SearchConfig{}.cone_aperture);
      std::cout << "# clean=" << (result.clean ? 1 : 0) << " iterations=" << result.iterations
                << " strata=" << result.set.strata.size() << "\n";
      for (const std::string& p : result.offending_pairs)
        std::cout << "# offending " << p << "\n";
      if (!refine_args.out_path.empty())
        write_out(refine_args.out_path, stratification_to_json(result));
      return result.clean ? 0 : 2;
    }

    if (*export_cmd) {
      const SetDescription set = load_set(export_args.set_path);
      if (export_format == "json") {
        save_set(set, export_args.out_path);
        std::cout << run_header("export", export_args.seed, 0.0, 0, 0.0);
        return 0;
      }
      // sample clouds colored by p_a (needs a pair for the Kuo frame)
      if (export_args.pair_text.empty())
        throw Error("export --format csv|ply needs --pair for the p_a coloring");
      const PairXY pair = materialize_pair(set, parse_pair(export_args.pair_text));
      const KuoField field(pair);
      const Stratum& X = pair.X();
      Stratum::Sample cloud = X.sample(export_samples, export_args.seed);
      std::vector<double> values;
      for (Index i = 0; i < cloud.points.cols(); ++i) {
        double v = 0.0;
        if (X.kind() == Stratum::Kind::Parametric)
          v = field.eval(static_cast<std::size_t>(cloud.chart[static_cast<std::size_t>(i)]),
                         cloud.params.col(i));
        if (std::isnan(v)) v = 0.0;
        values.push_back(v);
      }
      const std::string header = run_header("export", export_args.seed, 0.0, 0, 0.0);
      if (export_format == "ply") {
        write_out(export_args.out_path,
                  ply_point_cloud(cloud.points, values,
                                  "stratcheck seed=" + std::to_string(export_args.seed)));
      } else {
        write_out(export_args.out_path, header + point_cloud_csv(cloud.points, values));
      }
      std::cout << header;
      return 0;
    }

    if (*fixture_cmd) {
      const SetDescription set = fixtures::set_by_name(fixture_name);
      save_set(set, fixture_out);
      std::cout << "# wrote " << fixture_out << "\n";
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 3;
}
