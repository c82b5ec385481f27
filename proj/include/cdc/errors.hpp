#pragma once

#include <stdexcept>
#include <string>

namespace cdc {

/// Invalid user-supplied configuration (bad sizes, units, schema violations).
struct config_error : std::runtime_error {
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

/// A linear solve or other numerical routine failed to produce a trustworthy
/// result. Carries a condition-number estimate when one is available.
struct solver_error : std::runtime_error {
    explicit solver_error(const std::string& what, double condition_estimate = 0.0)
        : std::runtime_error(what), condition(condition_estimate) {}
    double condition;
};

/// File format or filesystem failure while reading/writing artifacts.
struct io_error : std::runtime_error {
    explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

/// Runtime failure inside the link simulator (e.g. alignment check failed).
struct link_error : std::runtime_error {
    explicit link_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace cdc
