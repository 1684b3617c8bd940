#pragma once

#include <cstdint>
#include <random>

namespace recsim {

/// splitmix64 finalizer; used to turn (seed, id...) tuples into well-mixed
/// 64-bit stream seeds so that every component of a realization gets an
/// independent, reproducible random stream.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t id) {
    return mix64(root ^ mix64(id));
}

using RngStream = std::mt19937_64;

/// Named substreams of one realization. Keeping them separate makes results
/// independent of evaluation order within a timestep and across workers.
enum class Stream : std::uint64_t {
    Teacher = 1,
    Seeding = 2,
    Strategy = 3,
    Choices = 4,
    StudentInit = 5,
    TrainingBase = 64, // per-timestep training stream = TrainingBase + t
};

struct SeedHierarchy {
    std::uint64_t master_seed;

    std::uint64_t realization_root(std::uint64_t realization_index) const {
        return derive_seed(master_seed, 0x5245414cULL ^ (realization_index + 1));
    }

    RngStream stream(std::uint64_t realization_index, Stream which) const {
        return RngStream(derive_seed(realization_root(realization_index),
                                     static_cast<std::uint64_t>(which)));
    }

    RngStream training_stream(std::uint64_t realization_index, std::uint64_t timestep) const {
        return RngStream(derive_seed(realization_root(realization_index),
                                     static_cast<std::uint64_t>(Stream::TrainingBase) + timestep));
    }

    /// Teacher stream shared by all realizations when regenerate_teacher=false.
    RngStream shared_teacher_stream() const {
        return RngStream(derive_seed(master_seed, static_cast<std::uint64_t>(Stream::Teacher)));
    }
};

} // namespace recsim
