#include "experiments/config.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "core/errors.hpp"

namespace monodens {

using nlohmann::ordered_json;

namespace {

void reject_unknown(const ordered_json& obj, const std::string& where,
                    std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (std::find_if(allowed.begin(), allowed.end(),
                         [&](const char* name) { return key == name; }) == allowed.end())
            fail(errc::config_error, "unknown field '" + key + "' in " + where);
    }
}

template <typename T>
T field(const ordered_json& obj, const char* name, T fallback) {
    if (!obj.contains(name)) return fallback;
    try {
        return obj.at(name).get<T>();
    } catch (const nlohmann::json::exception&) {
        fail(errc::config_error, std::string("field '") + name + "' has the wrong type");
    }
}

template <typename T>
T required_field(const ordered_json& obj, const char* name, const std::string& where) {
    if (!obj.contains(name)) fail(errc::config_error, "missing field '" + std::string(name) + "' in " + where);
    try {
        return obj.at(name).get<T>();
    } catch (const nlohmann::json::exception&) {
        fail(errc::config_error, std::string("field '") + name + "' has the wrong type");
    }
}

LossKind parse_loss(const std::string& name) {
    if (name == "l1") return LossKind::L1;
    if (name == "hellinger") return LossKind::Hellinger;
    if (name == "pointwise") return LossKind::Pointwise;
    if (name == "sup") return LossKind::Sup;
    fail(errc::config_error, "unknown loss '" + name + "' (expected l1|hellinger|pointwise|sup)");
}

} // namespace

const char* loss_name(LossKind loss) {
    switch (loss) {
    case LossKind::L1: return "l1";
    case LossKind::Hellinger: return "hellinger";
    case LossKind::Pointwise: return "pointwise";
    case LossKind::Sup: return "sup";
    }
    return "?";
}

const PriorSpec& Config::prior_spec() const {
    require(prior.has_value(), errc::config_error, "config has no prior block");
    return *prior;
}

const TrueDensity& Config::truth_density() const {
    require(truth.has_value(), errc::config_error, "config has no truth block");
    return *truth;
}

Config parse_config(const std::string& json_text, bool need_truth) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        fail(errc::config_error, std::string("config is not valid JSON: ") + e.what());
    }
    require(doc.is_object(), errc::config_error, "config must be a JSON object");
    reject_unknown(doc, "config",
                   {"scenario", "prior", "truth", "mcmc", "experiment", "seed", "output_dir"});

    Config cfg;
    cfg.scenario = field<std::string>(doc, "scenario", "");
    cfg.seed = field<std::uint64_t>(doc, "seed", 0);
    cfg.output_dir = field<std::string>(doc, "output_dir", "out");

    // ---- truth ----
    if (doc.contains("truth")) {
        const auto& truth = doc.at("truth");
        require(truth.is_object(), errc::config_error, "'truth' must be an object");
        reject_unknown(truth, "truth", {"family", "params", "beta", "tau"});
        const auto family_name = required_field<std::string>(truth, "family", "truth");
        const auto params = required_field<std::vector<double>>(truth, "params", "truth");
        const double beta = field<double>(truth, "beta", 0.0);
        const double tau = field<double>(truth, "tau", 0.0);
        cfg.truth.emplace(TrueDensity::family_from_name(family_name), params, beta, tau);
    }
    require(!need_truth || cfg.truth.has_value(), errc::config_error,
            "this command needs a 'truth' block in the config");

    // ---- prior ----
    {
        require(doc.contains("prior"), errc::config_error, "missing 'prior' block");
        const auto& prior = doc.at("prior");
        require(prior.is_object(), errc::config_error, "'prior' must be an object");
        reject_unknown(prior, "prior", {"kind", "A", "t", "L", "tail_rate", "K_max", "dirichlet_weight"});
        const auto kind = required_field<std::string>(prior, "kind", "prior");
        const double mass = field<double>(prior, "A", 1.0);
        const double t = field<double>(prior, "t", 2.0);
        const double tail_rate = field<double>(prior, "tail_rate", 1.0);

        std::optional<double> bound;
        if (prior.contains("L") && !prior.at("L").is_null()) bound = field<double>(prior, "L", 0.0);
        if (!bound && cfg.truth && !cfg.truth->unbounded()) bound = cfg.truth->support_bound();

        if (cfg.truth) {
            if (cfg.truth->unbounded())
                require(!bound.has_value(), errc::config_error,
                        "exponential truth needs an unbounded prior (omit or null 'L')");
            else
                require(bound.has_value() && *bound >= cfg.truth->support_bound(), errc::config_error,
                        "prior bound L must cover the truth support");
        }

        BaseMeasure base = bound ? BaseMeasure::bounded(t, *bound) : BaseMeasure::unbounded(t, tail_rate);
        if (kind == "dp") {
            cfg.prior = PriorSpec::dirichlet_process(std::move(base), mass);
        } else if (kind == "finite") {
            const auto k_max = field<std::size_t>(prior, "K_max", 200);
            const double a = field<double>(prior, "dirichlet_weight", 1.0);
            cfg.prior = PriorSpec::finite_mixture(std::move(base), k_max, a);
        } else {
            fail(errc::config_error, "prior kind must be 'dp' or 'finite'");
        }
    }

    // ---- mcmc ----
    if (doc.contains("mcmc")) {
        const auto& mcmc = doc.at("mcmc");
        require(mcmc.is_object(), errc::config_error, "'mcmc' must be an object");
        reject_unknown(mcmc, "mcmc", {"iterations", "burn_in", "thinning"});
        cfg.mcmc.iterations = field<std::size_t>(mcmc, "iterations", 5000);
        cfg.mcmc.burn_in = field<std::size_t>(mcmc, "burn_in", 1000);
        cfg.mcmc.thinning = field<std::size_t>(mcmc, "thinning", 2);
    }
    require(cfg.mcmc.iterations > cfg.mcmc.burn_in, errc::config_error,
            "mcmc.iterations must exceed mcmc.burn_in");
    require(cfg.mcmc.thinning >= 1, errc::config_error, "mcmc.thinning must be at least 1");

    // ---- experiment ----
    const double domain_end = cfg.truth ? cfg.truth->support_bound() : 1.0;
    cfg.experiment.interval_a = 0.1 * domain_end;
    cfg.experiment.interval_b = 0.9 * domain_end;
    cfg.experiment.x = 0.5 * domain_end;
    if (doc.contains("experiment")) {
        const auto& exp = doc.at("experiment");
        require(exp.is_object(), errc::config_error, "'experiment' must be an object");
        reject_unknown(exp, "experiment", {"n_grid", "replications", "loss", "interval", "mass", "x"});
        cfg.experiment.n_grid = field<std::vector<std::size_t>>(exp, "n_grid", cfg.experiment.n_grid);
        cfg.experiment.replications = field<std::size_t>(exp, "replications", cfg.experiment.replications);
        cfg.experiment.loss = parse_loss(field<std::string>(exp, "loss", "l1"));
        if (exp.contains("interval")) {
            const auto iv = required_field<std::vector<double>>(exp, "interval", "experiment");
            require(iv.size() == 2, errc::config_error, "experiment.interval must be [a, b]");
            cfg.experiment.interval_a = iv[0];
            cfg.experiment.interval_b = iv[1];
        }
        cfg.experiment.mass = field<double>(exp, "mass", cfg.experiment.mass);
        cfg.experiment.x = field<double>(exp, "x", cfg.experiment.x);
    }
    require(!cfg.experiment.n_grid.empty(), errc::config_error, "experiment.n_grid must not be empty");
    for (std::size_t n : cfg.experiment.n_grid)
        require(n >= 2, errc::config_error, "every n in experiment.n_grid must be at least 2");
    require(cfg.experiment.replications >= 1, errc::config_error,
            "experiment.replications must be at least 1");
    require(cfg.experiment.mass > 0.0 && cfg.experiment.mass <= 1.0, errc::config_error,
            "experiment.mass must be in (0, 1]");
    require(cfg.experiment.interval_a >= 0.0 && cfg.experiment.interval_a < cfg.experiment.interval_b,
            errc::config_error, "experiment.interval must satisfy 0 <= a < b");

    // ---- normalized echo (defaults applied, field order fixed) ----
    ordered_json echo;
    echo["scenario"] = cfg.scenario;
    if (cfg.prior) {
        ordered_json p;
        p["kind"] = cfg.prior->kind == PriorKind::DirichletProcess ? "dp" : "finite";
        p["A"] = cfg.prior->total_mass;
        p["t"] = cfg.prior->base.t();
        if (cfg.prior->base.is_bounded()) {
            p["L"] = cfg.prior->base.support_bound();
        } else {
            p["L"] = nullptr;
            p["tail_rate"] = cfg.prior->base.tail_rate();
        }
        if (cfg.prior->kind == PriorKind::FiniteMixture) {
            p["K_max"] = cfg.prior->k_max;
            p["dirichlet_weight"] = cfg.prior->dirichlet_weight;
        }
        echo["prior"] = std::move(p);
    }
    if (cfg.truth) {
        ordered_json t;
        t["family"] = cfg.truth->name();
        if (doc.contains("truth")) t["params"] = doc.at("truth").at("params");
        if (cfg.truth->unbounded()) {
            t["beta"] = cfg.truth->beta();
            t["tau"] = cfg.truth->tau();
        }
        echo["truth"] = std::move(t);
    }
    echo["mcmc"] = {{"iterations", cfg.mcmc.iterations},
                    {"burn_in", cfg.mcmc.burn_in},
                    {"thinning", cfg.mcmc.thinning}};
    {
        ordered_json e;
        e["n_grid"] = cfg.experiment.n_grid;
        e["replications"] = cfg.experiment.replications;
        e["loss"] = loss_name(cfg.experiment.loss);
        e["interval"] = {cfg.experiment.interval_a, cfg.experiment.interval_b};
        e["mass"] = cfg.experiment.mass;
        e["x"] = cfg.experiment.x;
        echo["experiment"] = std::move(e);
    }
    echo["seed"] = cfg.seed;
    echo["output_dir"] = cfg.output_dir;
    cfg.echo = std::move(echo);

    return cfg;
}

} // namespace monodens
