#pragma once

#include "ftag/config.hpp"
#include "ftag/results.hpp"

#include <string>
#include <utility>
#include <vector>

namespace ftag::harness {

struct ExperimentInfo {
    std::string id;
    std::string description;
    /// Every accepted key with its default; keys outside this list are rejected.
    std::vector<std::pair<std::string, std::string>> defaults;
};

/// Keys shared by every experiment: experiment, seed, trials.
const std::vector<ExperimentInfo>& catalog();

/// Throws ConfigError for an unknown id.
const ExperimentInfo& find_experiment(const std::string& id);

/// Defaults merged under the user's values. Requires the "experiment" key.
Config effective_config(const Config& user);

/// Runs one catalog entry. The rows depend only on the effective
/// configuration, never on `workers` (0 = hardware concurrency).
SweepResult run_experiment(const Config& cfg, std::size_t workers = 0);

/// Linear interpolation of the first upward crossing of `target` along x.
/// NaN when the curve never reaches the target.
double crossing_point(const std::vector<double>& x, const std::vector<double>& y, double target);

inline constexpr const char* code_version = FTAG_VERSION;

} // namespace ftag::harness
