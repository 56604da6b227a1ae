#pragma once

#include "ftag/bitvec.hpp"
#include "ftag/keyed_index.hpp"
#include "ftag/polar.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ftag::pla {

struct ProtocolParams {
    std::size_t n = 0;   // message / outer code length
    std::size_t k_o = 0; // outer information length
    std::size_t n_e = 0; // frozen tag length
    std::size_t k_e = 0; // anchor length
    polar::PolarSpec inner_spec;
    polar::PolarSpec outer_spec;
    keyed::SecretKey key;
    std::size_t list_len_inner = 1;
    std::size_t list_len_outer = 1;
    /// Acceptance threshold on delta; defaults to k_e (all anchor bits agree).
    std::optional<std::size_t> gamma0;

    std::size_t threshold() const { return gamma0.value_or(k_e); }
    std::size_t tag_len() const { return n_e - k_e; }
    void validate() const;
};

/// Inner code by GA at inner_sigma2; outer code by Bhattacharyya on the AWGN
/// channel with noise variance outer_sigma2.
ProtocolParams make_params(std::size_t n, std::size_t k_o, std::size_t n_e, std::size_t k_e,
                           const keyed::SecretKey& key, double inner_sigma2, double outer_sigma2,
                           std::size_t list_len_inner = 1, std::size_t list_len_outer = 1);

struct FrameContext {
    BitVec s_o;
    keyed::IndexSet idx;
    BitVec anchor;     // s_o at the first k_e positions of idx
    BitVec raw_tag;    // n_e - k_e bits
    BitVec frozen_tag; // inner codeword, n_e bits
    BitVec tagged;     // s_o with frozen_tag written over idx
};

/// Overwrites `positions` of `base` with `values`, preserving order.
BitVec splice(std::span<const std::uint8_t> base, std::span<const std::size_t> positions,
              std::span<const std::uint8_t> values);

BitVec outer_encode(const ProtocolParams& params, std::span<const std::uint8_t> msg_bits);

FrameContext tx_build_frame(const ProtocolParams& params, std::span<const std::uint8_t> msg_bits);

/// Throws Error naming the first violated frame invariant.
void check_frame(const ProtocolParams& params, const FrameContext& frame);

/// Debug form: positions and hex bit strings.
std::string serialize_frame(const FrameContext& frame);

/// 2r / (sigma2 + interference_power).
double llr_effective(double r, double sigma2, double interference_power);

polar::SoftObservation soft_observation(std::span<const double> received, std::span<const std::size_t> positions,
                                        double sigma2, double interference_power);

struct AuthDecision {
    std::size_t delta = 0;
    bool accept = false;
    BitVec s_hat; // anchor read from the recovered message
    BitVec s_re;  // anchor re-estimated by the inner decoder
    BitVec s_o_hat;
    keyed::IndexSet idx_hat;
};

/// Outer SCL decode with all-zero frozen bits, then re-encode.
BitVec recover_message(const ProtocolParams& params, std::span<const double> received, double noise_var,
                       double interference_power = 0.0);

/// Full receiver pipeline.
AuthDecision rx_authenticate(const ProtocolParams& params, std::span<const double> received, double noise_var,
                             double interference_power = 0.0);

/// Receiver pipeline from a given message estimate onward (genie receiver when s_o_hat is the truth).
AuthDecision rx_authenticate_with_message(const ProtocolParams& params, std::span<const double> received,
                                          std::span<const std::uint8_t> s_o_hat, double noise_var,
                                          double interference_power = 0.0);

// Uncoded baseline: the raw tag itself is written at the keyed positions.

struct BaselineFrame {
    BitVec s_o;
    keyed::IndexSet idx;
    BitVec tag; // n_e bits
    BitVec tagged;
};

struct BaselineDecision {
    double delta = 0.0;
    double threshold = 0.0;
    bool accept = false;
};

/// sqrt(n_e) * Qinv(p_fa): the H0 correlation is a sum of n_e independent +-1 terms.
double baseline_threshold(std::size_t n_e, double p_fa);

BaselineFrame baseline_uncoded_tx(const ProtocolParams& params, std::span<const std::uint8_t> msg_bits);

BaselineDecision baseline_uncoded_rx(const ProtocolParams& params, std::span<const double> received,
                                     double noise_var, double interference_power = 0.0, double p_fa = 0.01);

BaselineDecision baseline_uncoded_rx_with_message(const ProtocolParams& params, std::span<const double> received,
                                                  std::span<const std::uint8_t> s_o_hat, double p_fa = 0.01);

} // namespace ftag::pla
