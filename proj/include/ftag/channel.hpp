#pragma once

#include "ftag/bitvec.hpp"
#include "ftag/rng.hpp"

#include <complex>
#include <optional>
#include <span>
#include <vector>

namespace ftag::channel {

enum class Fading { none, rayleigh_block };

Fading fading_from_string(const std::string& s);
std::string to_string(Fading f);

struct ChannelConfig {
    double snr_db = 10.0;
    /// Signal over total residual interference; empty means no interference.
    std::optional<double> sinr_db;
    std::size_t k_users = 0;
    Fading fading = Fading::none;
    double eve_snr_db = 10.0;
    /// Relative interferer powers; empty means equal weights.
    std::vector<double> interference_weights;

    double noise_var() const;
    double eve_noise_var() const;
    /// Total interference power relative to unit signal power.
    double interference_power() const;
    /// Per-user amplitudes alpha_k.
    std::vector<double> interference_amplitudes() const;
    void validate() const;
};

struct ChannelDraw {
    std::complex<double> h{1.0, 0.0};
    std::vector<double> interference;
    std::vector<double> noise;
    std::vector<double> received;
};

/// 0 -> +1, 1 -> -1.
std::vector<double> modulate_bpsk(std::span<const std::uint8_t> bits);

/// Sign decision; exactly zero maps to bit 0.
BitVec demodulate_hard(std::span<const double> symbols);

/// Bob's observation. Perfect pre-equalization leaves x_mod as the effective signal.
ChannelDraw apply_channel(const ChannelConfig& cfg, std::span<const double> x_mod, RngStream& rng);

/// Eve's observation: interference-free, noise variance from eve_snr_db.
std::vector<double> eve_observe(const ChannelConfig& cfg, std::span<const double> x_mod, RngStream& rng);

} // namespace ftag::channel
