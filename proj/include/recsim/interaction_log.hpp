#pragma once

#include <cstddef>
#include <vector>

#include "recsim/student.hpp"

namespace recsim {

struct OutcomeRecord {
    std::size_t agent;
    std::size_t item;
    std::size_t timestep; // 0 = initial seeding, else 1..m
    int label;            // 0 or 1
};

/// Which (agent,item) pairs have been consumed (seeded or recommended) and
/// the outcome of each. A pair is consumed at most once per realization.
class InteractionLog {
public:
    InteractionLog() = default;
    InteractionLog(std::size_t n, std::size_t m)
        : n_(n), m_(m), consumed_(n * m, 0), unseen_count_(n, m) {}

    std::size_t n_agents() const { return n_; }
    std::size_t n_items() const { return m_; }

    bool consumed(std::size_t agent, std::size_t item) const {
        return consumed_[agent * m_ + item] != 0;
    }

    std::size_t unseen_count(std::size_t agent) const { return unseen_count_[agent]; }

    void record(std::size_t agent, std::size_t item, std::size_t timestep, int label) {
        auto& slot = consumed_[agent * m_ + item];
        if (slot) throw std::logic_error("pair consumed twice");
        slot = 1;
        --unseen_count_[agent];
        outcomes_.push_back({agent, item, timestep, label});
    }

    const std::vector<OutcomeRecord>& outcomes() const { return outcomes_; }

    TrainingDataset as_training_data() const {
        TrainingDataset data;
        data.reserve(outcomes_.size());
        for (const auto& o : outcomes_) data.push_back({o.agent, o.item, o.label});
        return data;
    }

    /// Cumulative per-item chosen counts over all recorded outcomes.
    std::vector<long long> item_popularity() const {
        std::vector<long long> pop(m_, 0);
        for (const auto& o : outcomes_)
            if (o.label) ++pop[o.item];
        return pop;
    }

private:
    std::size_t n_ = 0;
    std::size_t m_ = 0;
    std::vector<char> consumed_;
    std::vector<std::size_t> unseen_count_;
    std::vector<OutcomeRecord> outcomes_;
};

} // namespace recsim
