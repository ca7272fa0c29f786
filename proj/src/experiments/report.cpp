#include "experiments/report.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "core/errors.hpp"

namespace monodens {

using nlohmann::ordered_json;

std::string format_double(double value) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

nlohmann::ordered_json rate_report_json(const RateReport& report) {
    ordered_json doc;
    doc["type"] = "rate";
    doc["scenario"] = report.scenario;
    doc["loss"] = report.loss;
    doc["target_exponent"] = report.target_exponent;
    doc["correction_exponent"] = report.correction_exponent;
    doc["mass"] = report.mass;
    doc["mass_convention"] = "radius quantile 0.9 is an artifact convention, not a paper constant";
    doc["slope_verdict_applies"] = report.slope_verdict_applies;
    doc["slope"] = report.slope;
    doc["slope_stderr"] = report.slope_stderr;
    doc["slope_interval"] = {report.slope_lo, report.slope_hi};
    doc["slope_interval_convention"] =
        "acceptance window around the theoretical exponent; artifact convention";
    doc["slope_pass"] = report.slope_pass;
    doc["trend_ok"] = report.trend_ok;
    doc["verdict"] = report.pass ? "pass" : "fail";
    ordered_json points = ordered_json::array();
    for (const auto& pt : report.points) {
        ordered_json row;
        row["n"] = pt.n;
        row["mean_radius"] = pt.mean_radius;
        row["se"] = pt.se;
        row["radii"] = pt.radii;
        row["seeds"] = pt.seeds;
        points.push_back(std::move(row));
    }
    doc["per_n"] = std::move(points);
    if (!report.errors.empty()) {
        ordered_json errs = ordered_json::array();
        for (const auto& e : report.errors)
            errs.push_back({{"n", e.n}, {"replication", e.replication}, {"message", e.message}});
        doc["replication_errors"] = std::move(errs);
    }
    doc["seed"] = report.master_seed;
    doc["config"] = report.config_echo;
    return doc;
}

nlohmann::ordered_json boundary_report_json(const BoundaryReport& report) {
    ordered_json doc;
    doc["type"] = "boundary";
    doc["scenario"] = report.scenario;
    doc["truth_at_zero"] = report.truth_at_zero;
    doc["boundary_eps"] = report.boundary_eps;
    ordered_json points = ordered_json::array();
    for (const auto& pt : report.points) {
        ordered_json row;
        row["n"] = pt.n;
        row["mae_grenander_raw"] = pt.mae_grenander;
        row["mae_boundary_modified"] = pt.mae_modified;
        row["mae_posterior_median"] = pt.mae_median;
        row["err_grenander_raw"] = pt.err_grenander;
        row["err_boundary_modified"] = pt.err_modified;
        row["err_posterior_median"] = pt.err_median;
        row["seeds"] = pt.seeds;
        points.push_back(std::move(row));
    }
    doc["per_n"] = std::move(points);
    if (!report.errors.empty()) {
        ordered_json errs = ordered_json::array();
        for (const auto& e : report.errors)
            errs.push_back({{"n", e.n}, {"replication", e.replication}, {"message", e.message}});
        doc["replication_errors"] = std::move(errs);
    }
    doc["posterior_median_mae_halves"] = report.median_halves;
    doc["grenander_raw_mae_floor"] = report.grenander_floor;
    doc["verdict"] = report.pass ? "pass" : "fail";
    doc["seed"] = report.master_seed;
    doc["config"] = report.config_echo;
    return doc;
}

std::string rate_report_csv(const RateReport& report) {
    std::string csv = "scenario,n,replication,radius,seed\n";
    for (const auto& pt : report.points) {
        for (std::size_t r = 0; r < pt.radii.size(); ++r) {
            csv += report.scenario;
            csv += ',';
            csv += std::to_string(pt.n);
            csv += ',';
            csv += std::to_string(r);
            csv += ',';
            csv += format_double(pt.radii[r]);
            csv += ',';
            csv += std::to_string(pt.seeds[r]);
            csv += '\n';
        }
    }
    return csv;
}

std::string boundary_report_csv(const BoundaryReport& report) {
    std::string csv = "scenario,n,replication,estimator,abs_error,seed\n";
    const auto row = [&](const BoundaryPoint& pt, std::size_t r, const char* estimator, double err) {
        std::string line = report.scenario;
        line += ',';
        line += std::to_string(pt.n);
        line += ',';
        line += std::to_string(r);
        line += ',';
        line += estimator;
        line += ',';
        line += format_double(err);
        line += ',';
        line += std::to_string(pt.seeds[r]);
        line += '\n';
        return line;
    };
    for (const auto& pt : report.points)
        for (std::size_t r = 0; r < pt.err_grenander.size(); ++r) {
            csv += row(pt, r, "grenander_raw", pt.err_grenander[r]);
            csv += row(pt, r, "boundary_modified", pt.err_modified[r]);
            csv += row(pt, r, "posterior_median", pt.err_median[r]);
        }
    return csv;
}

namespace {

struct ChartFrame {
    double x_lo, x_hi, y_lo, y_hi;
    static constexpr double width = 640.0, height = 480.0;
    static constexpr double margin_l = 70.0, margin_r = 20.0, margin_t = 20.0, margin_b = 50.0;

    double px(double x) const {
        return margin_l + (x - x_lo) / (x_hi - x_lo) * (width - margin_l - margin_r);
    }
    double py(double y) const {
        return height - margin_b - (y - y_lo) / (y_hi - y_lo) * (height - margin_t - margin_b);
    }
};

void pad_range(double& lo, double& hi) {
    if (hi <= lo) {
        lo -= 0.5;
        hi += 0.5;
    } else {
        const double pad = 0.08 * (hi - lo);
        lo -= pad;
        hi += pad;
    }
}

std::string svg_header() {
    return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" "
           "viewBox=\"0 0 640 480\">\n"
           "<rect width=\"640\" height=\"480\" fill=\"white\"/>\n";
}

// axes drawn as a path so <line> stays reserved for the fit and reference
void append_axes(std::string& svg, const ChartFrame& f, const std::string& x_label,
                 const std::string& y_label) {
    std::ostringstream os;
    os << "<path d=\"M " << f.margin_l << ' ' << f.margin_t << " L " << f.margin_l << ' '
       << (f.height - f.margin_b) << " L " << (f.width - f.margin_r) << ' ' << (f.height - f.margin_b)
       << "\" stroke=\"black\" fill=\"none\"/>\n";
    os << "<text x=\"" << (f.width / 2) << "\" y=\"" << (f.height - 12)
       << "\" text-anchor=\"middle\" font-size=\"13\">" << x_label << "</text>\n";
    os << "<text x=\"16\" y=\"" << (f.height / 2)
       << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 " << (f.height / 2)
       << ")\">" << y_label << "</text>\n";
    for (int i = 0; i <= 4; ++i) {
        const double fx = f.x_lo + (f.x_hi - f.x_lo) * i / 4.0;
        const double fy = f.y_lo + (f.y_hi - f.y_lo) * i / 4.0;
        os << "<text x=\"" << f.px(fx) << "\" y=\"" << (f.height - f.margin_b + 18)
           << "\" text-anchor=\"middle\" font-size=\"11\">" << format_double(std::round(fx * 100) / 100)
           << "</text>\n";
        os << "<text x=\"" << (f.margin_l - 8) << "\" y=\"" << (f.py(fy) + 4)
           << "\" text-anchor=\"end\" font-size=\"11\">" << format_double(std::round(fy * 100) / 100)
           << "</text>\n";
    }
    svg += os.str();
}

std::string rate_svg(const ordered_json& report) {
    std::vector<double> xs, ys;
    const double corr = report.value("correction_exponent", 0.0);
    for (const auto& row : report.at("per_n")) {
        const double n = row.at("n").get<double>();
        double radius = row.at("mean_radius").get<double>();
        if (corr > 0.0) radius /= std::pow(std::log(n), corr);
        xs.push_back(std::log(n / std::log(n)));
        ys.push_back(std::log(radius));
    }
    require(!xs.empty(), errc::invalid_argument, "render_report_svg: report has no points");

    ChartFrame f{};
    f.x_lo = *std::min_element(xs.begin(), xs.end());
    f.x_hi = *std::max_element(xs.begin(), xs.end());
    f.y_lo = *std::min_element(ys.begin(), ys.end());
    f.y_hi = *std::max_element(ys.begin(), ys.end());
    pad_range(f.x_lo, f.x_hi);
    pad_range(f.y_lo, f.y_hi);

    std::string svg = svg_header();
    append_axes(svg, f, "log(n / log n)", "log radius");

    const double slope = report.at("slope").get<double>();
    const double target = report.at("target_exponent").get<double>();
    double mean_x = 0.0, mean_y = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mean_x += xs[i];
        mean_y += ys[i];
    }
    mean_x /= static_cast<double>(xs.size());
    mean_y /= static_cast<double>(xs.size());

    std::ostringstream os;
    const auto line = [&](double m, const char* color, const char* dash) {
        const double x0 = f.x_lo + 0.02 * (f.x_hi - f.x_lo);
        const double x1 = f.x_hi - 0.02 * (f.x_hi - f.x_lo);
        os << "<line x1=\"" << f.px(x0) << "\" y1=\"" << f.py(mean_y + m * (x0 - mean_x)) << "\" x2=\""
           << f.px(x1) << "\" y2=\"" << f.py(mean_y + m * (x1 - mean_x)) << "\" stroke=\"" << color
           << "\" stroke-width=\"1.5\"" << dash << "/>\n";
    };
    line(slope, "#d62728", "");
    line(target, "#7f7f7f", " stroke-dasharray=\"6 4\"");
    for (std::size_t i = 0; i < xs.size(); ++i)
        os << "<circle cx=\"" << f.px(xs[i]) << "\" cy=\"" << f.py(ys[i])
           << "\" r=\"3.5\" fill=\"#1f77b4\"/>\n";
    os << "<text x=\"" << (f.width - f.margin_r - 6) << "\" y=\"" << (f.margin_t + 16)
       << "\" text-anchor=\"end\" font-size=\"12\">fit slope " << format_double(std::round(slope * 1000) / 1000)
       << ", reference " << format_double(std::round(target * 1000) / 1000) << "</text>\n";
    svg += os.str();
    svg += "</svg>\n";
    return svg;
}

std::string boundary_svg(const ordered_json& report) {
    std::vector<double> xs;
    std::vector<std::array<double, 3>> maes;
    for (const auto& row : report.at("per_n")) {
        xs.push_back(std::log(row.at("n").get<double>()));
        maes.push_back({row.at("mae_grenander_raw").get<double>(),
                        row.at("mae_boundary_modified").get<double>(),
                        row.at("mae_posterior_median").get<double>()});
    }
    require(!xs.empty(), errc::invalid_argument, "render_report_svg: report has no points");

    ChartFrame f{};
    f.x_lo = xs.front();
    f.x_hi = xs.back();
    f.y_lo = 0.0;
    f.y_hi = 0.0;
    for (const auto& m : maes) f.y_hi = std::max({f.y_hi, m[0], m[1], m[2]});
    pad_range(f.x_lo, f.x_hi);
    pad_range(f.y_lo, f.y_hi);

    std::string svg = svg_header();
    append_axes(svg, f, "log n", "mean absolute error at 0");

    const char* colors[3] = {"#d62728", "#ff7f0e", "#1f77b4"};
    const char* labels[3] = {"grenander raw", "boundary modified", "posterior median"};
    std::ostringstream os;
    for (int series = 0; series < 3; ++series) {
        os << "<path d=\"";
        for (std::size_t i = 0; i < xs.size(); ++i)
            os << (i == 0 ? "M " : "L ") << f.px(xs[i]) << ' ' << f.py(maes[i][series]) << ' ';
        os << "\" stroke=\"" << colors[series] << "\" fill=\"none\" stroke-width=\"1.5\"/>\n";
        for (std::size_t i = 0; i < xs.size(); ++i)
            os << "<circle cx=\"" << f.px(xs[i]) << "\" cy=\"" << f.py(maes[i][series])
               << "\" r=\"3\" fill=\"" << colors[series] << "\"/>\n";
        os << "<text x=\"" << (f.width - f.margin_r - 6) << "\" y=\"" << (f.margin_t + 16 + 14 * series)
           << "\" text-anchor=\"end\" font-size=\"12\" fill=\"" << colors[series] << "\">" << labels[series]
           << "</text>\n";
    }
    svg += os.str();
    svg += "</svg>\n";
    return svg;
}

} // namespace

std::string render_report_svg(const ordered_json& report) {
    const auto type = report.value("type", std::string{});
    if (type == "rate") return rate_svg(report);
    if (type == "boundary") return boundary_svg(report);
    fail(errc::invalid_argument, "render_report_svg: report 'type' must be 'rate' or 'boundary'");
}

void write_report_files(const ordered_json& report, const std::string& dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    require(!ec, errc::io_error, "cannot create output directory '" + dir + "'");

    const auto write = [&](const std::string& name, const std::string& content) {
        std::ofstream out(fs::path(dir) / name, std::ios::binary);
        require(out.good(), errc::io_error, "cannot open '" + name + "' for writing");
        out << content;
        require(out.good(), errc::io_error, "failed writing '" + name + "'");
    };

    write("report.json", report.dump(2) + "\n");
    const auto type = report.value("type", std::string{});
    if (type == "rate") {
        RateReport skeleton; // rebuild rows from the JSON for the CSV
        skeleton.scenario = report.at("scenario").get<std::string>();
        for (const auto& row : report.at("per_n")) {
            RatePoint pt;
            pt.n = row.at("n").get<std::size_t>();
            pt.radii = row.at("radii").get<std::vector<double>>();
            pt.seeds = row.at("seeds").get<std::vector<std::uint64_t>>();
            skeleton.points.push_back(std::move(pt));
        }
        write("radii.csv", rate_report_csv(skeleton));
    } else if (type == "boundary") {
        BoundaryReport skeleton;
        skeleton.scenario = report.at("scenario").get<std::string>();
        for (const auto& row : report.at("per_n")) {
            BoundaryPoint pt;
            pt.n = row.at("n").get<std::size_t>();
            pt.err_grenander = row.at("err_grenander_raw").get<std::vector<double>>();
            pt.err_modified = row.at("err_boundary_modified").get<std::vector<double>>();
            pt.err_median = row.at("err_posterior_median").get<std::vector<double>>();
            pt.seeds = row.at("seeds").get<std::vector<std::uint64_t>>();
            skeleton.points.push_back(std::move(pt));
        }
        write("boundary.csv", boundary_report_csv(skeleton));
    }
    write("plot.svg", render_report_svg(report));
}

} // namespace monodens
