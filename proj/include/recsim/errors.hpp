#pragma once

#include <stdexcept>
#include <string>

namespace recsim {

// Bad dimensions, out-of-range parameters, malformed config files.
class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

// Empty datasets, non-finite losses, anything that aborts a training run.
class training_error : public std::runtime_error {
public:
    explicit training_error(const std::string& what) : std::runtime_error(what) {}
};

// Zero-variance inputs to a correlation.
class undefined_correlation : public std::runtime_error {
public:
    explicit undefined_correlation(const std::string& what) : std::runtime_error(what) {}
};

} // namespace recsim
