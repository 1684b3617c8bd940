#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "recsim/errors.hpp"
#include "recsim/matrix.hpp"
#include "recsim/rng.hpp"

namespace recsim {

struct Interaction {
    std::size_t agent;
    std::size_t item;
    int label; // 0 or 1
};

using TrainingDataset = std::vector<Interaction>;

struct TrainingHyperparams {
    double learning_rate = 0.05;
    std::size_t max_epochs = 200;
    std::size_t patience = 5;
    double validation_fraction = 0.2;
    double init_scale = 0.0; // <= 0 means 1/sqrt(k')
    bool shuffle = true;

    void validate() const {
        if (learning_rate <= 0.0) throw config_error("learning_rate must be positive");
        if (max_epochs == 0) throw config_error("max_epochs must be >= 1");
        if (validation_fraction <= 0.0 || validation_fraction >= 1.0)
            throw config_error("validation_fraction must lie in (0,1)");
    }
};

struct TrainReport {
    std::size_t epochs_run = 0;
    double best_validation_brier = 0.0;
    double train_brier = 0.0;
    bool stopped_early = false;
};

/// Rank-k' factorization estimate of the user-item matrix,
/// prediction = p_hat[i] . q_hat[j].
struct StudentModel {
    std::size_t n = 0;
    std::size_t m = 0;
    std::size_t k_prime = 0;
    Matrix p_hat; // n x k'
    Matrix q_hat; // m x k'

    double predict(std::size_t agent, std::size_t item) const {
        if (agent >= n || item >= m)
            throw std::out_of_range("student predict index out of range");
        return dot(p_hat.row(agent), q_hat.row(item), k_prime);
    }

    double predict_prob(std::size_t agent, std::size_t item) const {
        return std::clamp(predict(agent, item), 0.0, 1.0);
    }
};

inline StudentModel init_student(std::size_t n, std::size_t m, std::size_t k_prime,
                                 double init_scale, RngStream& rng) {
    if (n == 0 || m == 0 || k_prime == 0)
        throw config_error("student dimensions must be >= 1");
    if (init_scale < 0.0) throw config_error("init_scale must be nonnegative");

    StudentModel s;
    s.n = n;
    s.m = m;
    s.k_prime = k_prime;
    s.p_hat = Matrix(n, k_prime);
    s.q_hat = Matrix(m, k_prime);
    std::uniform_real_distribution<double> u(0.0, init_scale);
    for (double& v : s.p_hat.data()) v = u(rng);
    for (double& v : s.q_hat.data()) v = u(rng);
    return s;
}

/// Mean squared error between probabilistic predictions and binary labels.
inline double brier(const std::vector<double>& predictions, const std::vector<int>& labels) {
    if (predictions.empty() || predictions.size() != labels.size())
        throw std::invalid_argument("brier requires equal-length non-empty inputs");
    double s = 0.0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        double d = predictions[i] - static_cast<double>(labels[i]);
        s += d * d;
    }
    return s / static_cast<double>(predictions.size());
}

namespace detail {

inline double brier_on(const StudentModel& s, const TrainingDataset& data,
                       const std::vector<std::size_t>& idx) {
    double sum = 0.0;
    for (std::size_t id : idx) {
        const auto& ex = data[id];
        double d = s.predict_prob(ex.agent, ex.item) - static_cast<double>(ex.label);
        sum += d * d;
    }
    return sum / static_cast<double>(idx.size());
}

} // namespace detail

/// SGD on squared error with validation-based early stopping. Mutates the
/// model in place; warm starting across timesteps is just calling train
/// again on the same model. The train/validation split is redrawn on every
/// call. The weights achieving the best validation Brier are restored
/// before returning.
inline TrainReport train(StudentModel& student, const TrainingDataset& data,
                         const TrainingHyperparams& hp, RngStream& rng) {
    hp.validate();
    if (data.empty()) throw training_error("cannot train on an empty dataset");

    std::vector<std::size_t> order(data.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);

    auto n_val = static_cast<std::size_t>(
        std::llround(hp.validation_fraction * static_cast<double>(data.size())));
    n_val = std::min(n_val, data.size() - 1);
    std::vector<std::size_t> val_idx(order.begin(), order.begin() + n_val);
    std::vector<std::size_t> train_idx(order.begin() + n_val, order.end());
    // Degenerate tiny datasets: validate on the train split itself.
    if (val_idx.empty()) val_idx = train_idx;

    const std::size_t k = student.k_prime;
    const double lr = hp.learning_rate;

    double best_val = detail::brier_on(student, data, val_idx);
    Matrix best_p = student.p_hat;
    Matrix best_q = student.q_hat;
    std::size_t epochs_since_best = 0;
    TrainReport report;

    std::vector<double> grad_p(k);
    for (std::size_t epoch = 1; epoch <= hp.max_epochs; ++epoch) {
        if (hp.shuffle) std::shuffle(train_idx.begin(), train_idx.end(), rng);

        for (std::size_t id : train_idx) {
            const auto& ex = data[id];
            double* pi = student.p_hat.row(ex.agent);
            double* qj = student.q_hat.row(ex.item);
            double err = dot(pi, qj, k) - static_cast<double>(ex.label);
            if (!std::isfinite(err))
                throw training_error("SGD diverged (non-finite loss) at epoch " +
                                     std::to_string(epoch));
            double step = 2.0 * lr * err;
            for (std::size_t f = 0; f < k; ++f) grad_p[f] = step * qj[f];
            for (std::size_t f = 0; f < k; ++f) qj[f] -= step * pi[f];
            for (std::size_t f = 0; f < k; ++f) pi[f] -= grad_p[f];
        }

        double val = detail::brier_on(student, data, val_idx);
        if (!std::isfinite(val))
            throw training_error("SGD diverged (non-finite validation loss) at epoch " +
                                 std::to_string(epoch));
        report.epochs_run = epoch;
        if (val < best_val) {
            best_val = val;
            best_p = student.p_hat;
            best_q = student.q_hat;
            epochs_since_best = 0;
        } else {
            ++epochs_since_best;
            if (epochs_since_best >= hp.patience) {
                report.stopped_early = true;
                break;
            }
        }
    }

    student.p_hat = std::move(best_p);
    student.q_hat = std::move(best_q);
    report.best_validation_brier = best_val;
    report.train_brier = detail::brier_on(student, data, train_idx);
    return report;
}

} // namespace recsim
