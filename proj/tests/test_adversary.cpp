#include "ftag/adversary.hpp"
#include "ftag/channel.hpp"
#include "ftag/numeric.hpp"

#include <doctest.h>

#include <cmath>

using namespace ftag;
using namespace ftag::adversary;

namespace {

const keyed::SecretKey alice_key = keyed::SecretKey::from_hex("a5a5a5a5a5a5a5a55a5a5a5a5a5a5a5a");

double empirical_position_error(double snr_db, std::size_t n_e, std::size_t frames, std::uint64_t seed)
{
    const auto p = pla::make_params(256, 128, n_e, n_e / 4, alice_key, 1.0, 1.0);
    channel::ChannelConfig cfg;
    cfg.eve_snr_db = snr_db;
    std::size_t errors = 0;
    for (std::size_t t = 0; t < frames; ++t) {
        RngStream msg(seed, 0, t, Role::message);
        RngStream eve(seed, 0, t, Role::eve);
        const auto f = pla::tx_build_frame(p, msg.bits(p.k_o));
        const auto y = channel::eve_observe(cfg, channel::modulate_bpsk(f.tagged), eve);
        auto c = eve_classify_positions(y, f.s_o);
        score_classification(c, f.idx);
        errors += c.errors();
    }
    return static_cast<double>(errors) / static_cast<double>(frames * 256);
}

} // namespace

TEST_CASE("analytic position errors at the reference point")
{
    const double sigma = std::sqrt(sigma2_from_snr_db(2.0));
    const auto m = analytic_position_errors(sigma, 256, 128);
    CHECK(m.p_err == doctest::Approx(0.302).epsilon(0.001 / 0.302));
    CHECK(m.p_pcc >= 1e-41);
    CHECK(m.p_pcc <= 1e-39);
    CHECK(m.p_fa == m.p_md1);
    CHECK(m.p_md2 == doctest::Approx(1.0 - m.p_fa));
    CHECK(m.p_err_asy == doctest::Approx(0.25));
}

TEST_CASE("analytic position errors limits")
{
    const auto hi = analytic_position_errors(0.05, 256, 128);
    CHECK(hi.p_err == doctest::Approx(0.25).epsilon(1e-6));
    const double sigma = 0.8;
    const auto none = analytic_position_errors(sigma, 256, 0);
    CHECK(none.p_err == doctest::Approx(q_function(1.0 / sigma)));
    CHECK(none.p_pcc == doctest::Approx(std::pow(1.0 - q_function(1.0 / sigma), 256)));
    CHECK_THROWS_AS(analytic_position_errors(0.0, 256, 128), Error);
    CHECK_THROWS_AS(analytic_position_errors(1.0, 256, 128, 1.5), Error);
}

TEST_CASE("noiseless classification")
{
    const BitVec s_o{0, 0, 1, 1};
    // Position 0 tagged with a flipped bit, position 2 tagged with an equal bit.
    const BitVec tagged{1, 0, 1, 1};
    const auto y = channel::modulate_bpsk(tagged);
    auto c = eve_classify_positions(y, s_o);
    CHECK(c.decided_tag_set.indices == std::vector<std::size_t>{0});
    score_classification(c, keyed::IndexSet{{0, 2}, 4});
    CHECK(c.missed == 1);
    CHECK(c.false_alarms == 0);
    CHECK(c.error_flags == BitVec{0, 0, 1, 0});
}

TEST_CASE("empirical position error rate")
{
    const double measured = empirical_position_error(2.0, 128, 400, 31);
    MESSAGE("P_err at 2 dB: " << measured);
    CHECK(std::abs(measured - 0.302) < 0.005);
    const double asy = empirical_position_error(20.0, 128, 400, 32);
    CHECK(std::abs(asy - 0.25) < 0.005);
    for (double snr : {-2.0, 0.0, 4.0, 8.0}) {
        for (std::size_t n_e : {32, 64}) {
            const auto m = analytic_position_errors(std::sqrt(sigma2_from_snr_db(snr)), 256, n_e);
            const double e = empirical_position_error(snr, n_e, 200, 33);
            // Positions within a frame are correlated through the tag; allow 3 sigma on frames.
            const double se = 2.0 * binomial_stderr(m.p_err, 200 * 256);
            CHECK(std::abs(e - m.p_err) < 3.0 * se + 1e-3);
        }
    }
}

TEST_CASE("single frozen bit covariance")
{
    const auto spec = polar::construct_ga(2, 1, 1.0);
    REQUIRE(spec.frozen_set == std::vector<std::size_t>{0});
    const polar::GeneratorView gen(spec);
    const TagEstimator est(spec);
    CHECK(est.noise_cov(0.8)(0, 0) == doctest::Approx(0.2));
    const auto r = noise_power_report(gen, 0.6);
    CHECK(r.max_power == doctest::Approx(0.09));
    CHECK(r.avg_power == doctest::Approx(0.09));
    CHECK(r.raw_power == doctest::Approx(0.09));
}

TEST_CASE("noiseless tag estimate over the integers")
{
    RngStream rng(41);
    for (std::size_t n_e : {4, 8, 16, 32}) {
        const auto spec = polar::construct_ga(n_e, n_e / 2, 1.0);
        const polar::GeneratorView gen(spec);
        const TagEstimator est(spec);
        const auto gi = gen.info_matrix();
        const auto gf = gen.frozen_matrix();
        for (int rep = 0; rep < 20; ++rep) {
            const auto s = rng.bits(spec.k);
            const auto t = rng.bits(spec.n_frozen());
            Eigen::RowVectorXd sv(spec.k);
            Eigen::RowVectorXd tv(spec.n_frozen());
            for (std::size_t j = 0; j < spec.k; ++j)
                sv(j) = s[j];
            for (std::size_t j = 0; j < spec.n_frozen(); ++j)
                tv(j) = t[j];
            // Integer-valued coding-domain word, mapped back to the modulation domain.
            const Eigen::RowVectorXd c = sv * gi + tv * gf;
            std::vector<double> y(n_e);
            for (std::size_t j = 0; j < n_e; ++j)
                y[j] = 1.0 - 2.0 * c(j);
            const auto e = est.estimate(y, s, 0.0);
            for (std::size_t j = 0; j < spec.n_frozen(); ++j)
                CHECK(e.t_hat_soft(j) == doctest::Approx(t[j]).epsilon(1e-9));
        }
    }
}

TEST_CASE("tag estimation noise covariance")
{
    const auto spec = polar::construct_ga(16, 8, 1.0);
    const TagEstimator est(spec);
    const double sigma_e2 = sigma2_from_snr_db(2.0);
    const auto sigma_e = std::sqrt(sigma_e2);
    RngStream rng(42);
    const auto s = rng.bits(spec.k);
    const auto t = rng.bits(spec.n_frozen());
    const auto clean = channel::modulate_bpsk(polar::encode(spec, polar::assemble_input(spec, s, t)));
    const Eigen::VectorXd t_clean = est.estimate(clean, s, sigma_e2).t_hat_soft;

    const auto dim = static_cast<Eigen::Index>(spec.n_frozen());
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(dim, dim);
    constexpr int draws = 100000;
    std::vector<double> y(clean.size());
    for (int d = 0; d < draws; ++d) {
        for (std::size_t j = 0; j < y.size(); ++j)
            y[j] = clean[j] + sigma_e * rng.normal();
        const Eigen::VectorXd w = est.estimate(y, s, sigma_e2).t_hat_soft - t_clean;
        acc += w * w.transpose();
    }
    const Eigen::MatrixXd empirical = acc / draws;
    const Eigen::MatrixXd analytic = est.noise_cov(sigma_e2);
    const double rel = (empirical - analytic).norm() / analytic.norm();
    MESSAGE("covariance Frobenius relative error " << rel);
    CHECK(rel < 0.05);
    CHECK((analytic - analytic.transpose()).norm() < 1e-12);
    Eigen::LLT<Eigen::MatrixXd> llt(analytic);
    CHECK(llt.info() == Eigen::Success);
}

TEST_CASE("accumulated noise powers")
{
    const double sigma_e = 1.0;
    const auto big = polar::construct_ga(128, 32, 1.0);
    const auto r = noise_power_report(polar::GeneratorView(big), sigma_e);
    CHECK(r.max_power > r.avg_power);
    CHECK(r.avg_power > r.raw_power);
    double prev = 0.0;
    for (std::size_t n_e : {32, 64, 128, 256}) {
        const auto spec = polar::construct_ga(n_e, n_e / 4, 1.0);
        const auto rep = noise_power_report(polar::GeneratorView(spec), sigma_e);
        MESSAGE("n_e " << n_e << " avg " << rep.avg_power << " max " << rep.max_power);
        CHECK(rep.avg_power > prev);
        prev = rep.avg_power;
    }
}

TEST_CASE("spoofing")
{
    const auto p = pla::make_params(256, 64, 8, 4, alice_key, 1.0, 0.1, 1, 4);
    RngStream rng(43);
    channel::ChannelConfig cfg;
    cfg.snr_db = 12.0;
    for (int rep = 0; rep < 50; ++rep) {
        const auto msg = rng.bits(p.k_o);
        CHECK(spoof_frame(p, p.key, msg) == pla::tx_build_frame(p, msg).tagged);
    }
    std::size_t accepted = 0;
    std::size_t below = 0;
    constexpr std::size_t trials = 10000;
    for (std::size_t t = 0; t < trials; ++t) {
        RngStream msg(44, 0, t, Role::message);
        RngStream key(44, 0, t, Role::spoof_key);
        RngStream ch(44, 0, t, Role::channel);
        const auto frame = spoof_frame(p, key.key(), msg.bits(p.k_o));
        const auto d = channel::apply_channel(cfg, channel::modulate_bpsk(frame), ch);
        const auto dec = pla::rx_authenticate(p, d.received, cfg.noise_var());
        accepted += dec.accept;
        below += dec.delta < p.k_e;
    }
    const double rate = static_cast<double>(accepted) / trials;
    MESSAGE("spoof acceptance " << rate);
    CHECK(std::abs(rate - 1.0 / 16.0) < 4.0 * binomial_stderr(1.0 / 16.0, trials));
    CHECK(below > trials * 0.9);
}

TEST_CASE("symmetric difference statistics")
{
    RngStream rng(45);
    const auto a = symmetric_difference_stats(256, 128, 10000, rng);
    CHECK(std::abs(a.p_sd - 0.5) < 0.01);
    CHECK(std::abs(a.mean_overlap - 64.0) < 0.5);
    const auto full = symmetric_difference_stats(64, 64, 100, rng);
    CHECK(full.p_sd == 0.0);
    const auto b = symmetric_difference_stats(512, 64, 10000, rng);
    CHECK(std::abs(b.mean_overlap - 8.0) < 0.2);
    CHECK(std::abs(b.p_sd - 0.875) < 0.01);
    CHECK(normalized_symmetric_difference(3, 4) == doctest::Approx(0.25));
}
