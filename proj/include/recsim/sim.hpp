#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "recsim/errors.hpp"
#include "recsim/interaction_log.hpp"
#include "recsim/metrics.hpp"
#include "recsim/rng.hpp"
#include "recsim/strategies.hpp"
#include "recsim/student.hpp"
#include "recsim/teacher.hpp"

namespace recsim {

struct ExperimentConfig {
    std::size_t n = 4000;
    std::size_t m = 200;
    std::size_t k = 4;
    std::size_t k_prime = 5;
    BetaCondition beta_cond = BetaCondition::constant(0.0);
    StrategyKind strategy = StrategyKind::greedy();
    double seed_fraction = 0.001;
    std::size_t realizations = 10;
    bool regenerate_teacher = true;
    TrainingHyperparams hyperparams;
    std::uint64_t master_seed = 0;
    std::size_t parallelism = 1;
    double latent_scale = 0.0; // <= 0 means 1/sqrt(k)

    void validate() const {
        if (n == 0 || m == 0 || k == 0 || k_prime == 0)
            throw config_error("dimensions and ranks must be >= 1");
        if (seed_fraction < 0.0 || seed_fraction >= 1.0)
            throw config_error("seed_fraction must lie in [0,1)");
        if (realizations == 0) throw config_error("realizations must be >= 1");
        hyperparams.validate();
    }
};

/// Everything one seeded run produces: per-timestep metric series,
/// per-item cumulative popularity snapshots, and the training trace.
struct RealizationResult {
    std::size_t realization_index = 0;
    std::uint64_t realization_seed = 0;
    std::vector<double> brier_series;           // length m
    std::vector<double> gini_series;            // length m
    std::vector<double> mean_popularity_series; // length m
    std::vector<std::vector<long long>> popularity_snapshots; // m x items
    std::vector<TrainReport> train_reports;
    std::vector<double> expected_popularity; // teacher column sums (ground truth)
    InteractionLog final_log;
};

/// Uniformly samples round(fraction*n*m) distinct pairs without
/// replacement and labels each by a teacher draw. All marked timestep 0.
inline InteractionLog seed_initial_data(const TeacherModel& teacher, double fraction,
                                        RngStream& rng) {
    if (fraction < 0.0 || fraction >= 1.0)
        throw config_error("seed fraction must lie in [0,1)");
    const std::size_t n = teacher.n, m = teacher.m;
    InteractionLog log(n, m);
    auto count = static_cast<std::size_t>(
        std::llround(fraction * static_cast<double>(n) * static_cast<double>(m)));
    if (count == 0) return log;

    // Partial Fisher-Yates over flattened pair indices.
    std::vector<std::size_t> pairs(n * m);
    std::iota(pairs.begin(), pairs.end(), std::size_t{0});
    for (std::size_t i = 0; i < count; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, pairs.size() - 1);
        std::swap(pairs[i], pairs[pick(rng)]);
        std::size_t agent = pairs[i] / m;
        std::size_t item = pairs[i] % m;
        int label = sample_choice(teacher, agent, item, rng);
        log.record(agent, item, 0, label);
    }
    return log;
}

inline TeacherModel teacher_for_realization(const ExperimentConfig& config,
                                            std::size_t realization_index) {
    SeedHierarchy seeds{config.master_seed};
    RngStream teacher_rng = config.regenerate_teacher
                                ? seeds.stream(realization_index, Stream::Teacher)
                                : seeds.shared_teacher_stream();
    return generate_teacher(config.n, config.m, config.k, config.beta_cond, teacher_rng,
                            config.latent_scale);
}

/// One full run: teacher, initial seeding, student init + fit, then for
/// t = 1..m the recommend / sample / record / retrain loop. Brier at t is
/// scored on that timestep's recommendations with pre-retraining
/// predictions; Gini and mean popularity on the cumulative per-item
/// popularity after recording.
///
/// Under the oracle strategy the student is never trained: predictions are
/// read from the teacher itself.
using StudentObserver =
    std::function<void(std::size_t realization, std::size_t timestep, const StudentModel&)>;

inline RealizationResult run_realization(const ExperimentConfig& config,
                                         std::size_t realization_index,
                                         const StudentObserver& observer = {}) {
    config.validate();
    SeedHierarchy seeds{config.master_seed};

    RealizationResult result;
    result.realization_index = realization_index;
    result.realization_seed = seeds.realization_root(realization_index);

    TeacherModel teacher = teacher_for_realization(config, realization_index);
    result.expected_popularity = expected_item_popularity(teacher);

    RngStream seeding_rng = seeds.stream(realization_index, Stream::Seeding);
    InteractionLog log = seed_initial_data(teacher, config.seed_fraction, seeding_rng);

    const bool oracle = config.strategy.strategy == Strategy::Oracle;

    TrainingHyperparams hp = config.hyperparams;
    if (hp.init_scale <= 0.0) hp.init_scale = 1.0 / std::sqrt(static_cast<double>(config.k_prime));

    RngStream init_rng = seeds.stream(realization_index, Stream::StudentInit);
    StudentModel student = init_student(config.n, config.m, config.k_prime, hp.init_scale, init_rng);
    if (!oracle && !log.outcomes().empty()) {
        RngStream t0_rng = seeds.training_stream(realization_index, 0);
        try {
            result.train_reports.push_back(train(student, log.as_training_data(), hp, t0_rng));
        } catch (const training_error& e) {
            throw training_error("realization " + std::to_string(realization_index) + ": " +
                                 e.what());
        }
    }
    if (observer) observer(realization_index, 0, student);

    RngStream strategy_rng = seeds.stream(realization_index, Stream::Strategy);
    RngStream choice_rng = seeds.stream(realization_index, Stream::Choices);

    result.brier_series.reserve(config.m);
    result.gini_series.reserve(config.m);
    result.mean_popularity_series.reserve(config.m);
    result.popularity_snapshots.reserve(config.m);

    double last_brier = 0.0;
    for (std::size_t t = 1; t <= config.m; ++t) {
        RecommendationSlate slate =
            recommend(config.strategy, student, teacher, log, strategy_rng);

        std::vector<double> preds;
        std::vector<int> labels;
        for (std::size_t i = 0; i < config.n; ++i) {
            if (!slate[i]) continue;
            std::size_t j = *slate[i];
            int outcome = sample_choice(teacher, i, j, choice_rng);
            log.record(i, j, t, outcome);
            preds.push_back(oracle ? teacher.probs(i, j) : student.predict_prob(i, j));
            labels.push_back(outcome);
        }

        // Exhausted timestep keeps the last Brier rather than breaking the
        // fixed-length series contract.
        if (!preds.empty()) last_brier = brier(preds, labels);
        result.brier_series.push_back(last_brier);

        if (!oracle && !log.outcomes().empty()) {
            RngStream train_rng = seeds.training_stream(realization_index, t);
            try {
                result.train_reports.push_back(train(student, log.as_training_data(), hp, train_rng));
            } catch (const training_error& e) {
                throw training_error("realization " + std::to_string(realization_index) +
                                     ", timestep " + std::to_string(t) + ": " + e.what());
            }
            if (observer) observer(realization_index, t, student);
        }

        std::vector<long long> pop = log.item_popularity();
        result.gini_series.push_back(gini(pop));
        result.mean_popularity_series.push_back(mean_popularity(pop));
        result.popularity_snapshots.push_back(std::move(pop));
    }

    result.final_log = std::move(log);
    return result;
}

/// Runs every realization of a config, optionally across a worker pool.
/// Each realization's randomness derives only from (master_seed, index),
/// so results are identical for any worker count.
inline std::vector<RealizationResult> run_experiment(const ExperimentConfig& config,
                                                     const StudentObserver& observer = {}) {
    config.validate();
    std::vector<RealizationResult> results(config.realizations);
    std::size_t workers = std::max<std::size_t>(config.parallelism, 1);
    workers = std::min(workers, config.realizations);

    if (workers == 1) {
        for (std::size_t r = 0; r < config.realizations; ++r)
            results[r] = run_realization(config, r, observer);
        return results;
    }

    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::vector<std::string> failures(config.realizations);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                std::size_t r = next.fetch_add(1);
                if (r >= config.realizations) return;
                try {
                    results[r] = run_realization(config, r, observer);
                } catch (const std::exception& e) {
                    failures[r] = e.what();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    for (const auto& f : failures)
        if (!f.empty()) throw training_error(f);
    return results;
}

} // namespace recsim
