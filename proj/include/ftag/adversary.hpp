#pragma once

#include "ftag/bitvec.hpp"
#include "ftag/keyed_index.hpp"
#include "ftag/polar.hpp"
#include "ftag/protocol.hpp"
#include "ftag/rng.hpp"

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace ftag::adversary {

struct PositionClassification {
    keyed::IndexSet decided_tag_set;
    /// Filled by score_classification.
    BitVec error_flags;
    std::size_t false_alarms = 0;
    std::size_t missed = 0;

    std::size_t errors() const { return false_alarms + missed; }
};

/// Flags position i as tag iff the sign of y_E[i] disagrees with the BPSK polarity of s_o[i].
PositionClassification eve_classify_positions(std::span<const double> y_e, std::span<const std::uint8_t> s_o);

/// Scores a classification against the true tag positions.
void score_classification(PositionClassification& cls, const keyed::IndexSet& truth);

struct PositionErrorModel {
    double p_fa = 0.0;
    double p_md1 = 0.0;
    double p_md2 = 0.0;
    double p_err = 0.0;
    double p_err_asy = 0.0;
    double p_pcc = 0.0;
    double log10_p_pcc = 0.0;
};

PositionErrorModel analytic_position_errors(double sigma_e, std::size_t n, std::size_t n_e, double p_neq = 0.5);

/// BPSK symbol to coding domain: (1 - y) / 2.
inline double to_coding_domain(double y) { return 0.5 * (1.0 - y); }

struct TagEstimate {
    Eigen::VectorXd t_hat_soft;
    Eigen::MatrixXd accumulated_noise_cov;
    Eigen::VectorXd component_powers;
};

/// Linear attack on the frozen tag, computed once per inner code.
class TagEstimator {
public:
    explicit TagEstimator(const polar::PolarSpec& inner);

    const polar::PolarSpec& spec() const { return spec_; }
    const Eigen::MatrixXd& m_r() const { return pinv_.m_r; }
    /// (sigma_E^2 / 4) (G_F G_F^T)^-1.
    Eigen::MatrixXd noise_cov(double sigma_e2) const { return 0.25 * sigma_e2 * pinv_.gram_inverse; }

    /// t_hat = ((1 - y_A) / 2 - s G_I) M_R, with the known anchor's contribution removed in real arithmetic.
    TagEstimate estimate(std::span<const double> y_e_at_a, std::span<const std::uint8_t> anchor,
                         double sigma_e2) const;

private:
    polar::PolarSpec spec_;
    Eigen::MatrixXd g_info_;
    polar::PseudoInverse pinv_;
};

TagEstimate eve_estimate_raw_tag(std::span<const double> y_e_at_a, const polar::GeneratorView& gen,
                                 std::span<const std::uint8_t> anchor_known, double sigma_e2);

struct NoisePowerReport {
    double max_power = 0.0;
    double avg_power = 0.0;
    double raw_power = 0.0;
};

NoisePowerReport noise_power_report(const polar::GeneratorView& gen, double sigma_e);

/// Eve transmits with her own key: random positions, random raw tag.
BitVec spoof_frame(const pla::ProtocolParams& params, const keyed::SecretKey& eve_key,
                   std::span<const std::uint8_t> msg_bits);

/// Overlap of the position sets derived under two independent random keys for one random message.
std::size_t symmetric_difference_trial(std::size_t n, std::size_t n_e, RngStream& rng);

/// |A_B delta A_E| / (2 n_e) = 1 - overlap / n_e.
inline double normalized_symmetric_difference(std::size_t overlap, std::size_t n_e)
{
    return 1.0 - static_cast<double>(overlap) / static_cast<double>(n_e);
}

struct SymmetricDifferenceStats {
    double mean_overlap = 0.0;
    double p_sd = 0.0;
    double p_sd_stderr = 0.0;
    std::size_t trials = 0;
};

SymmetricDifferenceStats symmetric_difference_stats(std::size_t n, std::size_t n_e, std::size_t trials,
                                                    RngStream& rng);

} // namespace ftag::adversary
