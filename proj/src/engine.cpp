#include "ftag/engine.hpp"

#include "ftag/bitvec.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace ftag::harness {

void Tally::add(std::span<const double> values)
{
    for (std::size_t i = 0; i < values.size(); ++i) {
        sum[i] += values[i];
        sum_sq[i] += values[i] * values[i];
    }
    ++trials;
}

void Tally::merge(const Tally& other)
{
    for (std::size_t i = 0; i < sum.size(); ++i) {
        sum[i] += other.sum[i];
        sum_sq[i] += other.sum_sq[i];
    }
    trials += other.trials;
}

double Tally::mean(std::size_t i) const
{
    return trials ? sum[i] / static_cast<double>(trials) : 0.0;
}

double Tally::binomial_stderr(std::size_t i) const
{
    if (!trials)
        return 0.0;
    const double p = mean(i);
    return std::sqrt(std::max(0.0, p * (1.0 - p)) / static_cast<double>(trials));
}

double Tally::mean_stderr(std::size_t i) const
{
    if (trials < 2)
        return 0.0;
    const double n = static_cast<double>(trials);
    const double m = mean(i);
    const double var = std::max(0.0, (sum_sq[i] - n * m * m) / (n - 1.0));
    return std::sqrt(var / n);
}

std::size_t resolve_workers(std::size_t requested)
{
    if (requested > 0)
        return requested;
    const auto hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

Tally run_trials(std::size_t trials, std::size_t metrics, std::size_t workers, const TrialFn& fn, std::size_t chunk)
{
    if (chunk == 0)
        throw Error("run_trials: chunk size must be positive");
    const std::size_t chunks = (trials + chunk - 1) / chunk;
    std::vector<Tally> partial(chunks, Tally(metrics));
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mu;

    auto work = [&] {
        std::vector<double> out(metrics);
        for (;;) {
            const std::size_t c = next.fetch_add(1);
            if (c >= chunks)
                return;
            try {
                const std::size_t end = std::min(trials, (c + 1) * chunk);
                for (std::size_t t = c * chunk; t < end; ++t) {
                    std::fill(out.begin(), out.end(), 0.0);
                    fn(t, out);
                    partial[c].add(out);
                }
            } catch (...) {
                std::lock_guard lock(failure_mu);
                if (!failure)
                    failure = std::current_exception();
                next.store(chunks);
                return;
            }
        }
    };

    const std::size_t threads = std::min(resolve_workers(workers), std::max<std::size_t>(chunks, 1));
    if (threads <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (std::size_t i = 0; i < threads; ++i)
            pool.emplace_back(work);
    }
    if (failure)
        std::rethrow_exception(failure);

    Tally total(metrics);
    for (const auto& p : partial)
        total.merge(p);
    return total;
}

} // namespace ftag::harness
