#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "recsim/errors.hpp"
#include "recsim/format.hpp"
#include "recsim/sim.hpp"
#include "recsim/strategies.hpp"
#include "recsim/teacher.hpp"

namespace recsim {

inline bool operator==(const BetaCondition& a, const BetaCondition& b) {
    if (a.is_random() != b.is_random()) return false;
    if (a.is_random()) return true;
    return std::get<BetaCondition::Constant>(a.variant).value ==
           std::get<BetaCondition::Constant>(b.variant).value;
}

inline bool operator==(const StrategyKind& a, const StrategyKind& b) {
    return a.strategy == b.strategy &&
           (a.strategy != Strategy::EpsilonGreedy || a.epsilon == b.epsilon);
}

inline bool operator==(const TrainingHyperparams& a, const TrainingHyperparams& b) {
    return a.learning_rate == b.learning_rate && a.max_epochs == b.max_epochs &&
           a.patience == b.patience && a.validation_fraction == b.validation_fraction &&
           a.init_scale == b.init_scale && a.shuffle == b.shuffle;
}

/// A declarative sweep: base config plus beta / strategy / epsilon axes.
struct SweepSpec {
    std::size_t n = 4000;
    std::size_t m = 200;
    std::size_t k = 4;
    std::size_t k_prime = 5;
    double seed_fraction = 0.001;
    std::size_t realizations = 10;
    std::size_t random_beta_realizations = 0; // 0 means same as realizations
    bool regenerate_teacher = true;
    TrainingHyperparams hyperparams;
    std::uint64_t master_seed = 0;
    std::size_t parallelism = 1;
    double latent_scale = 0.0;
    std::size_t snapshot_stride = 1;

    std::vector<BetaCondition> betas = {BetaCondition::constant(0.0)};
    std::vector<Strategy> strategies = {Strategy::Greedy};
    std::vector<double> epsilons = {0.1};

    std::string out_dir = "out";

    bool operator==(const SweepSpec& other) const {
        return n == other.n && m == other.m && k == other.k && k_prime == other.k_prime &&
               seed_fraction == other.seed_fraction && realizations == other.realizations &&
               random_beta_realizations == other.random_beta_realizations &&
               regenerate_teacher == other.regenerate_teacher &&
               hyperparams == other.hyperparams && master_seed == other.master_seed &&
               parallelism == other.parallelism && latent_scale == other.latent_scale &&
               snapshot_stride == other.snapshot_stride && betas == other.betas &&
               strategies == other.strategies && epsilons == other.epsilons &&
               out_dir == other.out_dir;
    }
};

struct SweepCell {
    std::string id;
    ExperimentConfig config;
};

inline std::string beta_token(const BetaCondition& cond) {
    if (cond.is_random()) return "random";
    return format_number(std::get<BetaCondition::Constant>(cond.variant).value);
}

inline std::string cell_id_for(Strategy strategy, double epsilon, const BetaCondition& beta) {
    std::string id = strategy_name(strategy);
    if (strategy == Strategy::EpsilonGreedy) id += "_eps" + format_number(epsilon);
    id += "_beta" + beta_token(beta);
    return id;
}

/// Expands the sweep axes into the cross product of cells. Epsilon only
/// multiplies the epsilon_greedy strategy.
inline std::vector<SweepCell> expand_cells(const SweepSpec& spec) {
    std::vector<SweepCell> cells;
    for (const auto& beta : spec.betas) {
        for (Strategy strategy : spec.strategies) {
            std::vector<double> eps_axis =
                strategy == Strategy::EpsilonGreedy ? spec.epsilons : std::vector<double>{0.0};
            for (double eps : eps_axis) {
                ExperimentConfig cfg;
                cfg.n = spec.n;
                cfg.m = spec.m;
                cfg.k = spec.k;
                cfg.k_prime = spec.k_prime;
                cfg.beta_cond = beta;
                cfg.strategy = strategy == Strategy::EpsilonGreedy
                                   ? StrategyKind::epsilon_greedy(eps)
                                   : StrategyKind{strategy, 0.0};
                cfg.seed_fraction = spec.seed_fraction;
                cfg.realizations = beta.is_random() && spec.random_beta_realizations > 0
                                       ? spec.random_beta_realizations
                                       : spec.realizations;
                cfg.regenerate_teacher = spec.regenerate_teacher;
                cfg.hyperparams = spec.hyperparams;
                cfg.master_seed = spec.master_seed;
                cfg.parallelism = spec.parallelism;
                cfg.latent_scale = spec.latent_scale;
                cfg.validate();
                cells.push_back({cell_id_for(strategy, eps, beta), std::move(cfg)});
            }
        }
    }
    if (cells.empty()) throw config_error("sweep expands to zero cells");
    return cells;
}

namespace detail {

template <typename T>
T get_or(const nlohmann::json& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw config_error(std::string("invalid value for field '") + key + "'");
    }
}

} // namespace detail

inline SweepSpec parse_config(const nlohmann::json& j) {
    SweepSpec spec;
    if (!j.is_object()) throw config_error("config root must be a JSON object");
    if (!j.contains("master_seed")) throw config_error("missing required field 'master_seed'");
    spec.master_seed = j.at("master_seed").get<std::uint64_t>();

    spec.n = detail::get_or<std::size_t>(j, "n", spec.n);
    spec.m = detail::get_or<std::size_t>(j, "m", spec.m);
    spec.k = detail::get_or<std::size_t>(j, "k", spec.k);
    spec.k_prime = detail::get_or<std::size_t>(j, "k_prime", spec.k_prime);
    spec.seed_fraction = detail::get_or<double>(j, "seed_fraction", spec.seed_fraction);
    if (spec.seed_fraction < 0.0 || spec.seed_fraction >= 1.0)
        throw config_error("seed_fraction must lie in [0,1)");
    spec.realizations = detail::get_or<std::size_t>(j, "realizations", spec.realizations);
    if (spec.realizations == 0) throw config_error("realizations must be >= 1");
    spec.random_beta_realizations =
        detail::get_or<std::size_t>(j, "random_beta_realizations", spec.random_beta_realizations);
    spec.regenerate_teacher =
        detail::get_or<bool>(j, "regenerate_teacher", spec.regenerate_teacher);
    spec.parallelism = detail::get_or<std::size_t>(j, "parallelism", spec.parallelism);
    spec.latent_scale = detail::get_or<double>(j, "latent_scale", spec.latent_scale);
    spec.snapshot_stride = detail::get_or<std::size_t>(j, "snapshot_stride", spec.snapshot_stride);
    if (spec.snapshot_stride == 0) throw config_error("snapshot_stride must be >= 1");
    spec.out_dir = detail::get_or<std::string>(j, "out_dir", spec.out_dir);

    if (j.contains("hyperparams")) {
        const auto& h = j.at("hyperparams");
        spec.hyperparams.learning_rate =
            detail::get_or<double>(h, "learning_rate", spec.hyperparams.learning_rate);
        spec.hyperparams.max_epochs =
            detail::get_or<std::size_t>(h, "max_epochs", spec.hyperparams.max_epochs);
        spec.hyperparams.patience =
            detail::get_or<std::size_t>(h, "patience", spec.hyperparams.patience);
        spec.hyperparams.validation_fraction = detail::get_or<double>(
            h, "validation_fraction", spec.hyperparams.validation_fraction);
        spec.hyperparams.init_scale =
            detail::get_or<double>(h, "init_scale", spec.hyperparams.init_scale);
        spec.hyperparams.shuffle = detail::get_or<bool>(h, "shuffle", spec.hyperparams.shuffle);
        spec.hyperparams.validate();
    }

    if (j.contains("beta")) {
        spec.betas.clear();
        for (const auto& b : j.at("beta")) {
            if (b.is_string()) {
                if (b.get<std::string>() != "random")
                    throw config_error("beta entries must be numbers in [0,1] or \"random\"");
                spec.betas.push_back(BetaCondition::uniform_random());
            } else if (b.is_number()) {
                spec.betas.push_back(BetaCondition::constant(b.get<double>()));
            } else {
                throw config_error("beta entries must be numbers in [0,1] or \"random\"");
            }
        }
        if (spec.betas.empty()) throw config_error("beta axis must be non-empty");
    }

    if (j.contains("strategies")) {
        spec.strategies.clear();
        for (const auto& s : j.at("strategies"))
            spec.strategies.push_back(strategy_from_name(s.get<std::string>()));
        if (spec.strategies.empty()) throw config_error("strategies axis must be non-empty");
    }

    if (j.contains("epsilon")) {
        spec.epsilons.clear();
        for (const auto& e : j.at("epsilon")) {
            double eps = e.get<double>();
            if (eps < 0.0 || eps > 1.0) throw config_error("epsilon must lie in [0,1]");
            spec.epsilons.push_back(eps);
        }
        if (spec.epsilons.empty()) throw config_error("epsilon axis must be non-empty");
    }

    expand_cells(spec); // validates every cell
    return spec;
}

inline SweepSpec load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file: " + path.string());
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw config_error("config parse error in " + path.string() + ": " + e.what());
    }
    return parse_config(j);
}

inline nlohmann::json write_config(const SweepSpec& spec) {
    nlohmann::json j;
    j["master_seed"] = spec.master_seed;
    j["n"] = spec.n;
    j["m"] = spec.m;
    j["k"] = spec.k;
    j["k_prime"] = spec.k_prime;
    j["seed_fraction"] = spec.seed_fraction;
    j["realizations"] = spec.realizations;
    if (spec.random_beta_realizations > 0)
        j["random_beta_realizations"] = spec.random_beta_realizations;
    j["regenerate_teacher"] = spec.regenerate_teacher;
    j["parallelism"] = spec.parallelism;
    if (spec.latent_scale > 0.0) j["latent_scale"] = spec.latent_scale;
    j["snapshot_stride"] = spec.snapshot_stride;
    j["out_dir"] = spec.out_dir;
    j["hyperparams"] = {{"learning_rate", spec.hyperparams.learning_rate},
                        {"max_epochs", spec.hyperparams.max_epochs},
                        {"patience", spec.hyperparams.patience},
                        {"validation_fraction", spec.hyperparams.validation_fraction},
                        {"init_scale", spec.hyperparams.init_scale},
                        {"shuffle", spec.hyperparams.shuffle}};
    j["beta"] = nlohmann::json::array();
    for (const auto& b : spec.betas) {
        if (b.is_random())
            j["beta"].push_back("random");
        else
            j["beta"].push_back(std::get<BetaCondition::Constant>(b.variant).value);
    }
    j["strategies"] = nlohmann::json::array();
    for (Strategy s : spec.strategies) j["strategies"].push_back(strategy_name(s));
    j["epsilon"] = spec.epsilons;
    return j;
}

} // namespace recsim
