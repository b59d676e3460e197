#ifndef STRAT_REPORTS_HPP
#define STRAT_REPORTS_HPP

#include "strat/whitney.hpp"

#include <string>

namespace strat {

// Reproducibility header placed at the top of every CLI artifact.
std::string run_header(const std::string& command, std::uint64_t seed, double tol, long budget,
                       double cone_aperture);

// CSV rows: y coords, status, score, witness direction (17 significant
// digits, '.' decimal separator, independent of locale and thread count).
std::string verdict_csv_header(Index ambient_dim);
std::string verdict_csv_row(const Vec& y, const Verdict& v);
std::string fault_report_csv(const FaultReport& report);

std::string fault_report_json(const FaultReport& report);

// ASCII PLY point cloud; vertices colored by the accompanying scalar
// (p_a by convention). Ambient coordinates beyond the first three are
// dropped; missing ones are padded with zeros.
std::string ply_point_cloud(const Mat& points, const std::vector<double>& values,
                            const std::string& comment);

std::string point_cloud_csv(const Mat& points, const std::vector<double>& values);

}  // namespace strat

#endif
