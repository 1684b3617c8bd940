#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "recsim/errors.hpp"
#include "recsim/interaction_log.hpp"
#include "recsim/rng.hpp"
#include "recsim/student.hpp"
#include "recsim/teacher.hpp"

namespace recsim {

enum class Strategy { Greedy, EpsilonGreedy, Random, Oracle };

struct StrategyKind {
    Strategy strategy = Strategy::Greedy;
    double epsilon = 0.1; // only meaningful for EpsilonGreedy

    static StrategyKind greedy() { return {Strategy::Greedy, 0.0}; }
    static StrategyKind epsilon_greedy(double eps) {
        if (eps < 0.0 || eps > 1.0) throw config_error("epsilon must lie in [0,1]");
        return {Strategy::EpsilonGreedy, eps};
    }
    static StrategyKind random() { return {Strategy::Random, 0.0}; }
    static StrategyKind oracle() { return {Strategy::Oracle, 0.0}; }
};

inline std::string strategy_name(Strategy s) {
    switch (s) {
        case Strategy::Greedy: return "greedy";
        case Strategy::EpsilonGreedy: return "epsilon_greedy";
        case Strategy::Random: return "random";
        case Strategy::Oracle: return "oracle";
    }
    return "?";
}

inline Strategy strategy_from_name(const std::string& name) {
    if (name == "greedy") return Strategy::Greedy;
    if (name == "epsilon_greedy") return Strategy::EpsilonGreedy;
    if (name == "random") return Strategy::Random;
    if (name == "oracle") return Strategy::Oracle;
    throw config_error("unknown strategy: " + name);
}

/// One item per agent; empty when the agent has exhausted all items.
using RecommendationSlate = std::vector<std::optional<std::size_t>>;

namespace detail {

// Argmax over unseen items with uniform tie-breaking (reservoir over ties).
template <typename Score>
std::optional<std::size_t> argmax_unseen(const InteractionLog& history, std::size_t agent,
                                         std::size_t m, Score&& score, RngStream& rng) {
    std::optional<std::size_t> best;
    double best_score = 0.0;
    std::size_t tie_count = 0;
    for (std::size_t j = 0; j < m; ++j) {
        if (history.consumed(agent, j)) continue;
        double s = score(j);
        if (!best || s > best_score) {
            best = j;
            best_score = s;
            tie_count = 1;
        } else if (s == best_score) {
            ++tie_count;
            std::uniform_int_distribution<std::size_t> pick(0, tie_count - 1);
            if (pick(rng) == 0) best = j;
        }
    }
    return best;
}

inline std::optional<std::size_t> random_unseen(const InteractionLog& history, std::size_t agent,
                                                std::size_t m, RngStream& rng) {
    std::size_t u = history.unseen_count(agent);
    if (u == 0) return std::nullopt;
    std::uniform_int_distribution<std::size_t> pick(0, u - 1);
    std::size_t target = pick(rng);
    std::size_t seen = 0;
    for (std::size_t j = 0; j < m; ++j) {
        if (history.consumed(agent, j)) continue;
        if (seen == target) return j;
        ++seen;
    }
    return std::nullopt;
}

} // namespace detail

/// Selects one never-recommended item per agent. Agents with no unseen
/// items get an empty slot.
inline RecommendationSlate recommend(const StrategyKind& kind, const StudentModel& student,
                                     const TeacherModel& teacher, const InteractionLog& history,
                                     RngStream& rng) {
    const std::size_t n = teacher.n;
    const std::size_t m = teacher.m;
    RecommendationSlate slate(n);
    std::uniform_real_distribution<double> coin(0.0, 1.0);

    for (std::size_t i = 0; i < n; ++i) {
        switch (kind.strategy) {
            case Strategy::Greedy:
                slate[i] = detail::argmax_unseen(
                    history, i, m, [&](std::size_t j) { return student.predict(i, j); }, rng);
                break;
            case Strategy::EpsilonGreedy:
                if (coin(rng) < kind.epsilon) {
                    slate[i] = detail::random_unseen(history, i, m, rng);
                } else {
                    slate[i] = detail::argmax_unseen(
                        history, i, m, [&](std::size_t j) { return student.predict(i, j); }, rng);
                }
                break;
            case Strategy::Random:
                slate[i] = detail::random_unseen(history, i, m, rng);
                break;
            case Strategy::Oracle:
                slate[i] = detail::argmax_unseen(
                    history, i, m, [&](std::size_t j) { return teacher.probs(i, j); }, rng);
                break;
        }
    }
    return slate;
}

} // namespace recsim
