#include "strat/reports.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>

namespace strat {

std::string run_header(const std::string& command, std::uint64_t seed, double tol, long budget,
                       double cone_aperture) {
  std::string out = "# stratcheck " + command + " seed=" + std::to_string(seed);
  out += " tol=" + format_double(tol);
  out += " budget=" + std::to_string(budget);
  out += " cone_aperture=" + format_double(cone_aperture);
  out += "\n";
  return out;
}

std::string verdict_csv_header(Index ambient_dim) {
  std::string out;
  for (Index i = 0; i < ambient_dim; ++i) out += "y" + std::to_string(i) + ",";
  out += "status,score";
  for (Index i = 0; i < ambient_dim; ++i) out += ",dir" + std::to_string(i);
  out += "\n";
  return out;
}

std::string verdict_csv_row(const Vec& y, const Verdict& v) {
  std::string out;
  for (Index i = 0; i < y.size(); ++i) out += format_double(y[i]) + ",";
  out += to_string(v.status);
  out += "," + format_double(v.score);
  for (Index i = 0; i < y.size(); ++i) {
    if (v.witness && v.witness->direction_tag.size() == y.size())
      out += "," + format_double(v.witness->direction_tag[i]);
    else
      out += ",0";
  }
  out += "\n";
  return out;
}

std::string fault_report_csv(const FaultReport& report) {
  std::string out = verdict_csv_header(report.samples.rows());
  for (Index i = 0; i < report.samples.cols(); ++i)
    out += verdict_csv_row(report.samples.col(i), report.verdicts[static_cast<std::size_t>(i)]);
  return out;
}

std::string fault_report_json(const FaultReport& report) {
  nlohmann::json j;
  j["pair"] = report.pair_id;
  j["condition"] = to_string(report.condition);
  j["seed"] = report.seed;
  j["tol"] = report.tol;
  j["budget"] = report.budget;
  j["pitch"] = report.pitch;
  j["fault_count"] = report.fault_count;
  j["inconclusive_count"] = report.inconclusive_count;
  j["fault_fraction"] = report.fault_fraction;
  nlohmann::json samples = nlohmann::json::array();
  for (Index i = 0; i < report.samples.cols(); ++i) {
    const Verdict& v = report.verdicts[static_cast<std::size_t>(i)];
    nlohmann::json e;
    e["y"] = std::vector<double>(report.samples.col(i).data(),
                                 report.samples.col(i).data() + report.samples.rows());
    e["status"] = to_string(v.status);
    e["score"] = v.score;
    if (v.witness && v.witness->direction_tag.size() == report.samples.rows())
      e["direction"] = std::vector<double>(
          v.witness->direction_tag.data(),
          v.witness->direction_tag.data() + v.witness->direction_tag.size());
    samples.push_back(e);
  }
  j["samples"] = samples;
  nlohmann::json clusters = nlohmann::json::array();
  for (const FaultCluster& c : report.clusters) {
    nlohmann::json e;
    e["members"] = c.members;
    e["centroid"] = std::vector<double>(c.centroid.data(), c.centroid.data() + c.centroid.size());
    e["diameter"] = c.diameter;
    e["isolated"] = c.isolated;
    clusters.push_back(e);
  }
  j["clusters"] = clusters;
  return j.dump(2) + "\n";
}

namespace {

void color_of(double t, int rgb[3]) {
  t = std::min(1.0, std::max(0.0, t));
  // dark blue -> teal -> yellow
  const double r = std::min(1.0, std::max(0.0, 2.0 * t - 0.6));
  const double g = std::min(1.0, 0.2 + 1.1 * t);
  const double b = std::max(0.0, 0.9 - 1.3 * t);
  rgb[0] = static_cast<int>(std::lround(255 * r));
  rgb[1] = static_cast<int>(std::lround(255 * g));
  rgb[2] = static_cast<int>(std::lround(255 * b));
}

}  // namespace

std::string ply_point_cloud(const Mat& points, const std::vector<double>& values,
                            const std::string& comment) {
  if (static_cast<std::size_t>(points.cols()) != values.size())
    throw Error("ply_point_cloud: one value per point required");
  double vmax = 1e-12;
  for (double v : values) vmax = std::max(vmax, v);
  std::string out = "ply\nformat ascii 1.0\n";
  if (!comment.empty()) out += "comment " + comment + "\n";
  out += "element vertex " + std::to_string(points.cols()) + "\n";
  out += "property float x\nproperty float y\nproperty float z\n";
  out += "property uchar red\nproperty uchar green\nproperty uchar blue\n";
  out += "end_header\n";
  for (Index i = 0; i < points.cols(); ++i) {
    double xyz[3] = {0.0, 0.0, 0.0};
    for (Index d = 0; d < std::min<Index>(3, points.rows()); ++d) xyz[d] = points(d, i);
    int rgb[3];
    color_of(values[static_cast<std::size_t>(i)] / vmax, rgb);
    out += format_double(xyz[0]) + " " + format_double(xyz[1]) + " " + format_double(xyz[2]);
    out += " " + std::to_string(rgb[0]) + " " + std::to_string(rgb[1]) + " " +
           std::to_string(rgb[2]) + "\n";
  }
  return out;
}

std::string point_cloud_csv(const Mat& points, const std::vector<double>& values) {
  if (static_cast<std::size_t>(points.cols()) != values.size())
    throw Error("point_cloud_csv: one value per point required");
  std::string out;
  for (Index d = 0; d < points.rows(); ++d) out += "x" + std::to_string(d) + ",";
  out += "p_a\n";
  for (Index i = 0; i < points.cols(); ++i) {
    for (Index d = 0; d < points.rows(); ++d) out += format_double(points(d, i)) + ",";
    out += format_double(values[static_cast<std::size_t>(i)]) + "\n";
  }
  return out;
}

}  // namespace strat
