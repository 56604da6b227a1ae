#pragma once

#include "ftag/keyed_index.hpp"

#include <cstdint>
#include <random>

namespace ftag {

/// Stream roles; each role of each trial gets an independent seed.
enum class Role : std::uint64_t {
    message = 1,
    channel = 2,
    eve = 3,
    spoof_key = 4,
    untagged = 5,
    misc = 6,
};

/// Seed for (master, point, trial, role), mixed so neighbouring tuples decorrelate.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t point, std::uint64_t trial, Role role)
{
    std::uint64_t s = keyed::absorb(0x52756e53656564ULL, master);
    s = keyed::absorb(s, point);
    s = keyed::absorb(s, trial);
    s = keyed::absorb(s, static_cast<std::uint64_t>(role));
    return keyed::mix64(s);
}

/// Per-trial random stream. Never shared between workers.
class RngStream {
public:
    using result_type = std::uint64_t;

    explicit RngStream(std::uint64_t seed) : engine_(seed) {}
    RngStream(std::uint64_t master, std::uint64_t point, std::uint64_t trial, Role role)
        : engine_(derive_seed(master, point, trial, role))
    {
    }

    static constexpr result_type min() { return std::mt19937_64::min(); }
    static constexpr result_type max() { return std::mt19937_64::max(); }
    result_type operator()() { return engine_(); }

    double normal() { return normal_(engine_); }
    double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
    std::uint8_t bit() { return static_cast<std::uint8_t>(engine_() >> 63); }

    BitVec bits(std::size_t n)
    {
        BitVec out(n);
        for (auto& b : out)
            b = bit();
        return out;
    }

    keyed::SecretKey key()
    {
        const auto hi = engine_();
        return {hi, engine_()};
    }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

} // namespace ftag
