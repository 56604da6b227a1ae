#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace ftag::harness {

/// Per-metric running sums for one batch of trials.
struct Tally {
    std::vector<double> sum;
    std::vector<double> sum_sq;
    std::size_t trials = 0;

    explicit Tally(std::size_t metrics = 0) : sum(metrics, 0.0), sum_sq(metrics, 0.0) {}

    void add(std::span<const double> values);
    void merge(const Tally& other);

    double mean(std::size_t i) const;
    /// sqrt(p(1-p)/n) for 0/1 outcomes.
    double binomial_stderr(std::size_t i) const;
    /// Sample standard deviation over sqrt(n).
    double mean_stderr(std::size_t i) const;
};

/// fn(trial, out) writes one value per metric into out (pre-zeroed).
using TrialFn = std::function<void(std::size_t trial, std::span<double> out)>;

/// Trials are split into fixed-size chunks pulled from a shared counter by
/// `workers` threads; chunk tallies are merged in chunk order, so the result
/// is identical for any worker count.
Tally run_trials(std::size_t trials, std::size_t metrics, std::size_t workers, const TrialFn& fn,
                 std::size_t chunk = 256);

/// Worker count from hardware concurrency when 0 is requested.
std::size_t resolve_workers(std::size_t requested);

} // namespace ftag::harness
