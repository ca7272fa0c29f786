// Command line front end; talks to the core exclusively through the C API
// in monodens.h.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "monodens.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

int exit_code_for(md_status status) {
    if (status == MD_OK) return kExitOk;
    if (status == MD_ERR_CONFIG || status == MD_ERR_INVALID_ARGUMENT) return kExitConfig;
    return kExitRuntime;
}

int report_failure(md_status status) {
    std::cerr << "error (" << md_status_name(status) << "): " << md_last_error() << "\n";
    return exit_code_for(status);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in.good()) throw CLI::ValidationError("cannot open file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::vector<double> read_data(const std::string& path) {
    std::ifstream in(path);
    if (!in.good()) throw CLI::ValidationError("cannot open data file '" + path + "'");
    std::vector<double> values;
    double x;
    while (in >> x) values.push_back(x);
    if (!in.eof()) throw CLI::ValidationError("non-numeric content in data file '" + path + "'");
    return values;
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out.good()) throw CLI::ValidationError("cannot write '" + path + "'");
    out << content;
}

// closed-form families for the `approximate` subcommand
struct FamilyDensity {
    std::string family;
    std::vector<double> params;

    double support() const {
        if (family == "exponential") return -std::log(1e-8) / params.at(0);
        return family == "truncated_exponential" ? params.at(1) : params.at(0);
    }
    double at(double x) const {
        if (family == "uniform") return x <= params[0] ? 1.0 / params[0] : 0.0;
        if (family == "triangular")
            return x <= params[0] ? 2.0 * (params[0] - x) / (params[0] * params[0]) : 0.0;
        if (family == "truncated_exponential")
            return x <= params[1] ? params[0] * std::exp(-params[0] * x) / (1.0 - std::exp(-params[0] * params[1]))
                                  : 0.0;
        return params[0] * std::exp(-params[0] * x); // exponential
    }
};

double family_callback(double x, void* ctx) { return static_cast<const FamilyDensity*>(ctx)->at(x); }

int run_experiment(const std::string& kind, const std::string& config_path,
                   const std::string& output_dir, int threads) {
    const std::string config = read_file(config_path);
    char* report = nullptr;
    const md_status status = md_experiment_run(kind.c_str(), config.c_str(),
                                               output_dir.empty() ? nullptr : output_dir.c_str(),
                                               threads, &report);
    if (status != MD_OK) return report_failure(status);
    const auto doc = nlohmann::json::parse(report);
    md_string_free(report);
    std::cout << kind << " '" << doc.value("scenario", std::string{}) << "': verdict "
              << doc.value("verdict", std::string{});
    if (doc.contains("slope")) std::cout << ", slope " << doc["slope"].get<double>();
    std::cout << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"monotone density estimation: Bayesian mixtures of uniforms, the Grenander "
                 "baseline and a seeded Monte Carlo rate harness"};
    app.require_subcommand(1);

    std::string data_path, config_path, output_dir, output_path, report_path;
    int threads = 1;
    bool emit_draws = false;

    auto* fit = app.add_subcommand("fit", "posterior summaries for one dataset");
    fit->add_option("--data", data_path, "whitespace-separated sample file")->required();
    fit->add_option("--config", config_path, "config JSON (prior + mcmc + seed)")->required();
    fit->add_option("--output-dir", output_dir, "output directory (default out)");
    fit->add_flag("--draws", emit_draws, "also write draws/draws.jsonl");
    fit->callback([&] {
        const auto data = read_data(data_path);
        const auto config = read_file(config_path);
        char* summary = nullptr;
        const md_status status =
            md_fit_run(data.data(), data.size(), config.c_str(),
                       output_dir.empty() ? "out" : output_dir.c_str(), emit_draws, &summary);
        if (status != MD_OK) std::exit(report_failure(status));
        std::cout << summary;
        md_string_free(summary);
    });

    auto* gren = app.add_subcommand("grenander", "NPMLE step density for one dataset");
    gren->add_option("--data", data_path, "whitespace-separated sample file")->required();
    gren->add_option("--output", output_path, "write JSON here instead of stdout");
    gren->callback([&] {
        const auto data = read_data(data_path);
        md_grenander* fit_handle = nullptr;
        md_status status = md_grenander_fit(data.data(), data.size(), &fit_handle);
        if (status != MD_OK) std::exit(report_failure(status));
        md_step_density* step = nullptr;
        status = md_grenander_step(fit_handle, &step);
        if (status != MD_OK) std::exit(report_failure(status));

        const size_t pieces = md_step_piece_count(step);
        std::vector<double> knots(pieces + 1), heights(pieces);
        md_step_knots(step, knots.data());
        md_step_heights(step, heights.data());
        double at_zero = 0.0;
        md_grenander_value_at_zero(fit_handle, &at_zero);
        md_step_free(step);
        md_grenander_free(fit_handle);

        nlohmann::ordered_json doc;
        doc["n"] = data.size();
        doc["knots"] = knots;
        doc["heights"] = heights;
        doc["value_at_zero"] = at_zero;
        write_output(output_path, doc.dump(2) + "\n");
    });

    std::string family;
    std::vector<double> params;
    double epsilon = 0.05, sup_bound = 0.0;
    auto* approx = app.add_subcommand("approximate", "mixture-of-uniforms KL approximation of a "
                                                     "built-in monotone density");
    approx->add_option("--family", family, "uniform|triangular|truncated_exponential|exponential")
        ->required();
    approx->add_option("--params", params, "family parameters (L; lambda,L; lambda)")->required();
    approx->add_option("--epsilon", epsilon, "target accuracy in (0,1)")->required();
    approx->add_option("--sup-bound", sup_bound, "declared bound on f(0) (default: exact f(0))");
    approx->add_option("--output", output_path, "write JSON here instead of stdout");
    approx->callback([&] {
        FamilyDensity density{family, params};
        if (family != "uniform" && family != "triangular" && family != "truncated_exponential" &&
            family != "exponential")
            throw CLI::ValidationError("unknown family '" + family + "'");
        const double bound = sup_bound > 0.0 ? sup_bound : density.at(0.0);
        md_mixture* mixture = nullptr;
        char* trace = nullptr;
        const md_status status = md_approximate(&family_callback, &density, epsilon,
                                                density.support(), bound, &mixture, &trace);
        if (status != MD_OK) std::exit(report_failure(status));

        const size_t m = md_mixture_size(mixture);
        std::vector<double> atoms(m), weights(m);
        md_mixture_atoms(mixture, atoms.data());
        md_mixture_weights(mixture, weights.data());
        md_mixture_free(mixture);

        nlohmann::ordered_json doc;
        doc["family"] = family;
        doc["epsilon"] = epsilon;
        doc["atoms"] = atoms;
        doc["weights"] = weights;
        doc["trace"] = nlohmann::ordered_json::parse(trace);
        md_string_free(trace);
        write_output(output_path, doc.dump(2) + "\n");
    });

    for (const char* kind : {"rate", "boundary", "supnorm"}) {
        auto* cmd = app.add_subcommand(
            kind, std::string(kind) + " experiment from a config document");
        cmd->add_option("--config", config_path, "experiment config JSON")->required();
        cmd->add_option("--output-dir", output_dir, "override the config's output_dir");
        cmd->add_option("--threads,-j", threads, "parallel replications (outputs are identical "
                                                 "for every degree)");
        cmd->callback([&, kind] { std::exit(run_experiment(kind, config_path, output_dir, threads)); });
    }

    auto* plot = app.add_subcommand("plot", "render plot.svg from a report.json");
    plot->add_option("--report", report_path, "report.json produced by an experiment")->required();
    plot->add_option("--output", output_path, "SVG path (default stdout)");
    plot->callback([&] {
        const auto report = read_file(report_path);
        char* svg = nullptr;
        const md_status status = md_render_report_svg(report.c_str(), &svg);
        if (status != MD_OK) std::exit(report_failure(status));
        write_output(output_path, svg);
        md_string_free(svg);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitOk;
}
