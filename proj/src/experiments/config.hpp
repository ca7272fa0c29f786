#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "experiments/truth.hpp"
#include "mcmc/mcmc.hpp"
#include "priors/priors.hpp"

namespace monodens {

enum class LossKind { L1, Hellinger, Pointwise, Sup };

const char* loss_name(LossKind loss);

struct ExperimentSettings {
    std::vector<std::size_t> n_grid = {250, 500, 1000, 2000, 4000, 8000};
    std::size_t replications = 20;
    LossKind loss = LossKind::L1;
    double interval_a = 0.0; // sup loss interval
    double interval_b = 0.0;
    double mass = 0.9; // radius quantile (artifact convention)
    double x = 0.0;    // pointwise loss location
};

// One parsed configuration document. `prior`, `mcmc` and `seed` always
// apply; `truth` and `experiment` feed the simulation runners.
struct Config {
    std::string scenario;
    std::optional<PriorSpec> prior;
    std::optional<TrueDensity> truth;
    ChainConfig mcmc;
    ExperimentSettings experiment;
    std::uint64_t seed = 0;
    std::string output_dir = "out";
    nlohmann::ordered_json echo; // normalized document with defaults applied

    const PriorSpec& prior_spec() const;
    const TrueDensity& truth_density() const;
};

// Parses and validates a config document; unknown fields are rejected at
// every level. `need_truth` demands a truth block (simulation runners).
Config parse_config(const std::string& json_text, bool need_truth);

} // namespace monodens
