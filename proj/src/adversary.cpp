#include "ftag/adversary.hpp"

#include "ftag/numeric.hpp"

#include <fmt/format.h>

#include <cmath>

namespace ftag::adversary {

PositionClassification eve_classify_positions(std::span<const double> y_e, std::span<const std::uint8_t> s_o)
{
    if (y_e.size() != s_o.size())
        throw Error("eve_classify_positions: length mismatch");
    PositionClassification c;
    c.decided_tag_set.n = s_o.size();
    for (std::size_t i = 0; i < s_o.size(); ++i) {
        const bool received_negative = y_e[i] < 0.0;
        const bool message_negative = s_o[i] != 0;
        if (received_negative != message_negative)
            c.decided_tag_set.indices.push_back(i);
    }
    return c;
}

void score_classification(PositionClassification& c, const keyed::IndexSet& truth)
{
    const std::size_t n = c.decided_tag_set.n;
    if (truth.n != n)
        throw Error("score_classification: index sets cover different lengths");
    c.error_flags.assign(n, 0);
    c.false_alarms = 0;
    c.missed = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const bool decided = c.decided_tag_set.contains(i);
        const bool actual = truth.contains(i);
        if (decided && !actual)
            ++c.false_alarms;
        if (!decided && actual)
            ++c.missed;
        c.error_flags[i] = decided != actual;
    }
}

PositionErrorModel analytic_position_errors(double sigma_e, std::size_t n, std::size_t n_e, double p_neq)
{
    if (!(sigma_e > 0.0))
        throw Error("Eve's noise standard deviation must be positive");
    if (!(p_neq >= 0.0 && p_neq <= 1.0))
        throw Error("polarity mismatch probability must lie in [0, 1]");
    if (n == 0 || n_e > n)
        throw Error("tag length must not exceed message length");
    PositionErrorModel m;
    m.p_fa = q_function(1.0 / sigma_e);
    m.p_md1 = m.p_fa;
    m.p_md2 = q_function(-1.0 / sigma_e);
    const double p_tag = static_cast<double>(n_e) / static_cast<double>(n);
    m.p_err = (1.0 - p_tag) * m.p_fa + p_tag * (p_neq * m.p_md1 + (1.0 - p_neq) * m.p_md2);
    m.p_err_asy = p_neq * p_tag;
    m.log10_p_pcc = static_cast<double>(n) * std::log1p(-m.p_err) / std::log(10.0);
    m.p_pcc = std::pow(10.0, m.log10_p_pcc);
    return m;
}

TagEstimator::TagEstimator(const polar::PolarSpec& inner)
    : spec_(inner)
{
    const polar::GeneratorView gen(spec_);
    g_info_ = gen.info_matrix();
    pinv_ = polar::frozen_pseudo_inverse(gen);
}

TagEstimate TagEstimator::estimate(std::span<const double> y_e_at_a, std::span<const std::uint8_t> anchor,
                                   double sigma_e2) const
{
    if (y_e_at_a.size() != spec_.n)
        throw Error(fmt::format("tag estimate needs {} observations, got {}", spec_.n, y_e_at_a.size()));
    if (anchor.size() != spec_.k)
        throw Error("anchor length does not match the inner code");
    Eigen::RowVectorXd y(static_cast<Eigen::Index>(spec_.n));
    for (std::size_t j = 0; j < spec_.n; ++j)
        y(static_cast<Eigen::Index>(j)) = to_coding_domain(y_e_at_a[j]);
    Eigen::RowVectorXd s(static_cast<Eigen::Index>(spec_.k));
    for (std::size_t j = 0; j < spec_.k; ++j)
        s(static_cast<Eigen::Index>(j)) = anchor[j];
    TagEstimate est;
    est.t_hat_soft = ((y - s * g_info_) * pinv_.m_r).transpose();
    est.accumulated_noise_cov = noise_cov(sigma_e2);
    est.component_powers = est.accumulated_noise_cov.diagonal();
    return est;
}

TagEstimate eve_estimate_raw_tag(std::span<const double> y_e_at_a, const polar::GeneratorView& gen,
                                 std::span<const std::uint8_t> anchor_known, double sigma_e2)
{
    return TagEstimator(gen.spec()).estimate(y_e_at_a, anchor_known, sigma_e2);
}

NoisePowerReport noise_power_report(const polar::GeneratorView& gen, double sigma_e)
{
    const auto pinv = polar::frozen_pseudo_inverse(gen);
    const double raw = 0.25 * sigma_e * sigma_e;
    const Eigen::VectorXd diag = raw * pinv.gram_inverse.diagonal();
    NoisePowerReport r;
    r.raw_power = raw;
    r.max_power = diag.maxCoeff();
    r.avg_power = diag.mean();
    return r;
}

BitVec spoof_frame(const pla::ProtocolParams& params, const keyed::SecretKey& eve_key,
                   std::span<const std::uint8_t> msg_bits)
{
    pla::ProtocolParams eve = params;
    eve.key = eve_key;
    return pla::tx_build_frame(eve, msg_bits).tagged;
}

std::size_t symmetric_difference_trial(std::size_t n, std::size_t n_e, RngStream& rng)
{
    const BitVec msg = rng.bits(n);
    const auto kb = rng.key();
    const auto ke = rng.key();
    const auto a = keyed::gen_pos(msg, kb, n_e);
    const auto b = keyed::gen_pos(msg, ke, n_e);
    std::size_t overlap = 0;
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.size() && j < b.size()) {
        if (a.indices[i] == b.indices[j]) {
            ++overlap;
            ++i;
            ++j;
        } else if (a.indices[i] < b.indices[j]) {
            ++i;
        } else {
            ++j;
        }
    }
    return overlap;
}

SymmetricDifferenceStats symmetric_difference_stats(std::size_t n, std::size_t n_e, std::size_t trials,
                                                    RngStream& rng)
{
    if (trials == 0)
        throw Error("symmetric difference statistics need at least one trial");
    double sum = 0.0;
    double sum_sq = 0.0;
    double overlap_sum = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
        const auto ov = symmetric_difference_trial(n, n_e, rng);
        const double sd = normalized_symmetric_difference(ov, n_e);
        overlap_sum += static_cast<double>(ov);
        sum += sd;
        sum_sq += sd * sd;
    }
    SymmetricDifferenceStats s;
    s.trials = trials;
    const double tn = static_cast<double>(trials);
    s.mean_overlap = overlap_sum / tn;
    s.p_sd = sum / tn;
    const double var = trials > 1 ? std::max(0.0, (sum_sq - tn * s.p_sd * s.p_sd) / (tn - 1.0)) : 0.0;
    s.p_sd_stderr = std::sqrt(var / tn);
    return s;
}

} // namespace ftag::adversary
