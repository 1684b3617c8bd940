#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "recsim/errors.hpp"
#include "recsim/matrix.hpp"
#include "recsim/rng.hpp"

namespace recsim {

/// Bias condition for the ground-truth model: every entry fixed to one
/// value, or each entry drawn i.i.d. uniform on [0,1].
struct BetaCondition {
    struct Constant {
        double value;
    };
    struct UniformRandom {};

    std::variant<Constant, UniformRandom> variant;

    static BetaCondition constant(double value) {
        if (value < 0.0 || value > 1.0)
            throw config_error("beta constant must lie in [0,1], got " + std::to_string(value));
        return BetaCondition{Constant{value}};
    }
    static BetaCondition uniform_random() { return BetaCondition{UniformRandom{}}; }

    bool is_random() const { return std::holds_alternative<UniformRandom>(variant); }
};

/// Ground-truth agent-choice model: choice probability is a bias term plus
/// a bias-damped low-rank preference term,
///   probs[i][j] = beta[i][j] + (1 - beta[i][j]) * (p q^T)[i][j].
struct TeacherModel {
    std::size_t n = 0; // agents
    std::size_t m = 0; // items
    std::size_t k = 0; // latent rank
    Matrix beta;       // n x m
    Matrix p;          // n x k, entries in [0, latent_scale]
    Matrix q;          // m x k
    Matrix probs;      // n x m

    double prob(std::size_t agent, std::size_t item) const {
        if (agent >= n || item >= m)
            throw std::out_of_range("teacher prob index out of range");
        return probs(agent, item);
    }
};

/// Default latent-entry upper bound. With entries uniform on [0, 1/sqrt(k)]
/// the rank-k product has mean 1/4 and maximum 1.
inline double default_latent_scale(std::size_t k) {
    return 1.0 / std::sqrt(static_cast<double>(k));
}

inline TeacherModel generate_teacher(std::size_t n, std::size_t m, std::size_t k,
                                     const BetaCondition& beta_cond, RngStream& rng,
                                     double latent_scale = 0.0) {
    if (n == 0 || m == 0 || k == 0)
        throw config_error("teacher dimensions must be >= 1");
    if (latent_scale <= 0.0) latent_scale = default_latent_scale(k);

    TeacherModel t;
    t.n = n;
    t.m = m;
    t.k = k;

    t.beta = Matrix(n, m);
    if (const auto* c = std::get_if<BetaCondition::Constant>(&beta_cond.variant)) {
        for (double& v : t.beta.data()) v = c->value;
    } else {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (double& v : t.beta.data()) v = u(rng);
    }

    std::uniform_real_distribution<double> lat(0.0, latent_scale);
    t.p = Matrix(n, k);
    for (double& v : t.p.data()) v = lat(rng);
    t.q = Matrix(m, k);
    for (double& v : t.q.data()) v = lat(rng);

    t.probs = Matrix(n, m);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            double latent = dot(t.p.row(i), t.q.row(j), k);
            double b = t.beta(i, j);
            t.probs(i, j) = b + (1.0 - b) * latent;
        }
    return t;
}

inline int sample_choice(const TeacherModel& teacher, std::size_t agent, std::size_t item,
                         RngStream& rng) {
    double p = teacher.prob(agent, item);
    std::bernoulli_distribution coin(p);
    return coin(rng) ? 1 : 0;
}

/// Expected per-item popularity if every pair were sampled once: column
/// sums of the probability matrix.
inline std::vector<double> expected_item_popularity(const TeacherModel& teacher) {
    std::vector<double> totals(teacher.m, 0.0);
    for (std::size_t i = 0; i < teacher.n; ++i)
        for (std::size_t j = 0; j < teacher.m; ++j)
            totals[j] += teacher.probs(i, j);
    return totals;
}

} // namespace recsim
