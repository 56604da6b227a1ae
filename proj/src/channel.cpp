#include "ftag/channel.hpp"

#include "ftag/numeric.hpp"

#include <fmt/format.h>

#include <cmath>
#include <numeric>

namespace ftag::channel {

Fading fading_from_string(const std::string& s)
{
    if (s == "none")
        return Fading::none;
    if (s == "rayleigh" || s == "rayleigh-block")
        return Fading::rayleigh_block;
    throw Error("unknown fading model '" + s + "'");
}

std::string to_string(Fading f)
{
    return f == Fading::none ? "none" : "rayleigh-block";
}

double ChannelConfig::noise_var() const
{
    return sigma2_from_snr_db(snr_db);
}

double ChannelConfig::eve_noise_var() const
{
    return sigma2_from_snr_db(eve_snr_db);
}

double ChannelConfig::interference_power() const
{
    if (!sinr_db)
        return 0.0;
    return std::pow(10.0, -*sinr_db / 10.0);
}

std::vector<double> ChannelConfig::interference_amplitudes() const
{
    std::vector<double> amp(k_users, 0.0);
    if (!sinr_db || k_users == 0)
        return amp;
    const double total = interference_power();
    if (interference_weights.empty()) {
        std::fill(amp.begin(), amp.end(), std::sqrt(total / static_cast<double>(k_users)));
        return amp;
    }
    const double wsum = std::accumulate(interference_weights.begin(), interference_weights.end(), 0.0);
    for (std::size_t k = 0; k < k_users; ++k)
        amp[k] = std::sqrt(total * interference_weights[k] / wsum);
    return amp;
}

void ChannelConfig::validate() const
{
    // +inf is allowed and means a noiseless link.
    if (std::isnan(snr_db) || std::isnan(eve_snr_db) || snr_db == -HUGE_VAL || eve_snr_db == -HUGE_VAL)
        throw Error("SNR values must be numbers above -inf");
    if (sinr_db && k_users < 1)
        throw Error("an SINR requires at least one interfering user");
    if (sinr_db && !std::isfinite(*sinr_db))
        throw Error("SINR must be finite");
    if (!interference_weights.empty()) {
        if (interference_weights.size() != k_users)
            throw Error(fmt::format("{} interference weights given for {} users", interference_weights.size(),
                                    k_users));
        for (double w : interference_weights)
            if (!(w >= 0.0))
                throw Error("interference weights must be nonnegative");
        if (std::accumulate(interference_weights.begin(), interference_weights.end(), 0.0) <= 0.0)
            throw Error("interference weights must not all be zero");
    }
}

std::vector<double> modulate_bpsk(std::span<const std::uint8_t> bits)
{
    std::vector<double> x(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i)
        x[i] = bits[i] ? -1.0 : 1.0;
    return x;
}

BitVec demodulate_hard(std::span<const double> symbols)
{
    BitVec b(symbols.size());
    for (std::size_t i = 0; i < symbols.size(); ++i)
        b[i] = symbols[i] < 0.0 ? 1 : 0;
    return b;
}

ChannelDraw apply_channel(const ChannelConfig& cfg, std::span<const double> x_mod, RngStream& rng)
{
    const std::size_t n = x_mod.size();
    ChannelDraw d;
    if (cfg.fading == Fading::rayleigh_block) {
        const double re = rng.normal() * std::sqrt(0.5);
        const double im = rng.normal() * std::sqrt(0.5);
        d.h = {re, im};
    }
    d.interference.assign(n, 0.0);
    for (double a : cfg.interference_amplitudes()) {
        if (a == 0.0)
            continue;
        // One engine word supplies 64 interferer symbols.
        std::uint64_t word = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (i % 64 == 0)
                word = rng();
            d.interference[i] += (word >> (i % 64)) & 1U ? -a : a;
        }
    }
    const double sigma = std::sqrt(cfg.noise_var());
    d.noise.resize(n);
    for (auto& w : d.noise)
        w = sigma * rng.normal();
    // Transmitting x_mod / h through h cancels the fade exactly.
    d.received.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        d.received[i] = x_mod[i] + d.interference[i] + d.noise[i];
    return d;
}

std::vector<double> eve_observe(const ChannelConfig& cfg, std::span<const double> x_mod, RngStream& rng)
{
    const double sigma = std::sqrt(cfg.eve_noise_var());
    std::vector<double> y(x_mod.begin(), x_mod.end());
    for (auto& v : y)
        v += sigma * rng.normal();
    return y;
}

} // namespace ftag::channel
