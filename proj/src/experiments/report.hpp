#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace monodens {

struct RatePoint {
    std::size_t n = 0;
    std::vector<double> radii;        // per replication, index order
    std::vector<std::uint64_t> seeds; // per-replication derived seeds
    double mean_radius = 0.0;
    double se = 0.0;
};

struct ReplicationError {
    std::size_t n = 0;
    std::size_t replication = 0;
    std::string message;
};

struct RateReport {
    std::string scenario;
    std::string loss;
    double target_exponent = -1.0 / 3.0;
    double correction_exponent = 0.0; // radii divided by log(n)^corr before fitting
    bool slope_verdict_applies = true;
    double slope = 0.0;
    double slope_stderr = 0.0;
    double slope_lo = 0.0; // artifact-convention acceptance window
    double slope_hi = 0.0;
    bool slope_pass = false;
    bool trend_ok = false; // mean radius non-increasing up to 1 SE slack
    bool pass = false;     // the verdict field
    double mass = 0.9;
    std::vector<RatePoint> points;
    std::vector<ReplicationError> errors;
    std::uint64_t master_seed = 0;
    nlohmann::ordered_json config_echo;
};

struct BoundaryPoint {
    std::size_t n = 0;
    std::vector<double> err_grenander; // |f_hat(0+) - f0(0)| per replication
    std::vector<double> err_modified;  // boundary-corrected estimator
    std::vector<double> err_median;    // posterior median at 0
    std::vector<std::uint64_t> seeds;
    double mae_grenander = 0.0;
    double mae_modified = 0.0;
    double mae_median = 0.0;
};

struct BoundaryReport {
    std::string scenario;
    double truth_at_zero = 0.0;
    double boundary_eps = 0.0; // eps inside c_n = 5 (log n)^{1/3} / eps
    std::vector<BoundaryPoint> points;
    std::vector<ReplicationError> errors;
    bool median_halves = false;   // MAE at largest n below half of smallest n
    bool grenander_floor = false; // raw Grenander MAE does not halve
    bool pass = false;
    std::uint64_t master_seed = 0;
    nlohmann::ordered_json config_echo;
};

// Shortest round-trip decimal form, locale-independent.
std::string format_double(double value);

nlohmann::ordered_json rate_report_json(const RateReport& report);
nlohmann::ordered_json boundary_report_json(const BoundaryReport& report);

std::string rate_report_csv(const RateReport& report);
std::string boundary_report_csv(const BoundaryReport& report);

// SVG chart for a report document (field "type" selects the layout). Rate
// charts hold exactly two <line> elements: the fitted slope and the
// target-exponent reference.
std::string render_report_svg(const nlohmann::ordered_json& report);

// Writes report.json, radii.csv (boundary.csv for boundary reports) and
// plot.svg under dir, creating it if needed.
void write_report_files(const nlohmann::ordered_json& report, const std::string& dir);

} // namespace monodens
