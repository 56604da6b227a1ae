// Acceptance suite: one PASS/FAIL line per criterion, each at its stated
// tolerance. Exit status is 0 once every criterion has been evaluated;
// --strict turns any FAIL into a nonzero exit.
#include "ftag/adversary.hpp"
#include "ftag/bounds.hpp"
#include "ftag/channel.hpp"
#include "ftag/experiments.hpp"
#include "ftag/numeric.hpp"
#include "ftag/polar.hpp"
#include "ftag/results.hpp"
#include "ftag/rng.hpp"

#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <cstring>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

using namespace ftag;
using namespace ftag::harness;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    const char* name;
    std::function<Outcome()> run;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

Config config_of(std::initializer_list<std::pair<const char*, std::string>> kv)
{
    Config c;
    for (const auto& [k, v] : kv)
        c.set(k, v);
    return c;
}

double value_of(const SweepResult& r, const std::string& metric, const ParamMap& match)
{
    const auto* row = r.find(metric, match);
    if (!row)
        throw std::runtime_error(fmt::format("missing row {} {}", metric, format_params(match)));
    return row->value;
}

// ---------------------------------------------------------------------------

Outcome position_confusion()
{
    const auto t0 = Clock::now();
    const double sigma = std::sqrt(sigma2_from_snr_db(2.0));
    const auto m = adversary::analytic_position_errors(sigma, 256, 128);
    const bool analytic_ok = std::abs(m.p_err - 0.302) <= 0.001 && m.p_pcc >= 1e-41 && m.p_pcc <= 1e-39;

    // 1000 frames of 256 positions.
    const auto r = run_experiment(config_of({{"experiment", "eaves-position"},
                                             {"N", "256"},
                                             {"Ne", "128"},
                                             {"snr_db", "2"},
                                             {"trials", "1000"}}));
    const auto* mc = r.find("p_err", {{"Ne", "128"}, {"snr_db", "2"}});
    const std::size_t positions = mc->trials * 256;
    const bool mc_ok = std::abs(mc->value - 0.302) <= 0.005 && positions >= 100000;
    const double secs = seconds_since(t0);
    return {analytic_ok && mc_ok && secs < 10.0,
            fmt::format("analytic P_err={:.5f} P_PCC={:.3e}; MC P_err={:.5f} over {} positions; {:.1f} s", m.p_err,
                        m.p_pcc, mc->value, positions, secs)};
}

Outcome spoofing_symmetric_difference()
{
    const auto t0 = Clock::now();
    const auto r = run_experiment(
        config_of({{"experiment", "spoof-sd"}, {"N", "256,512"}, {"Ne", "128"}, {"trials", "10000"}}));
    const double a = value_of(r, "p_sd", {{"N", "256"}, {"Ne", "128"}});
    const double b = value_of(r, "p_sd", {{"N", "512"}, {"Ne", "128"}});
    const double secs = seconds_since(t0);
    return {std::abs(a - 0.5) <= 0.01 && std::abs(b - 0.75) <= 0.01 && secs < 30.0,
            fmt::format("P_SD(256,128)={:.5f} P_SD(512,128)={:.5f}; {:.1f} s", a, b, secs)};
}

Outcome tag_confusion_covariance()
{
    const auto t0 = Clock::now();
    const auto spec = polar::construct_ga(16, 8, 1.0);
    const adversary::TagEstimator est(spec);
    const double sigma_e2 = sigma2_from_snr_db(2.0);
    const double sigma_e = std::sqrt(sigma_e2);
    RngStream rng(derive_seed(1, 0, 0, Role::eve));
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
    const Eigen::MatrixXd analytic = est.noise_cov(sigma_e2);
    const double rel = (acc / draws - analytic).norm() / analytic.norm();

    const double sigma_raw = 1.0;
    const auto big = polar::construct_ga(128, 32, 1.0);
    const auto rep = adversary::noise_power_report(polar::GeneratorView(big), sigma_raw);
    const bool strict = rep.avg_power > rep.raw_power && rep.max_power > rep.raw_power;

    bool monotone = true;
    double prev = 0.0;
    std::string avgs;
    for (std::size_t n_e : {32, 64, 128, 256}) {
        const auto sp = polar::construct_ga(n_e, n_e / 4, 1.0);
        const double avg = adversary::noise_power_report(polar::GeneratorView(sp), sigma_raw).avg_power;
        monotone = monotone && avg > prev;
        prev = avg;
        avgs += fmt::format(" {:.3f}", avg);
    }
    const double secs = seconds_since(t0);
    return {rel < 0.05 && strict && monotone && secs < 120.0,
            fmt::format("Frobenius rel err={:.4f}; (128,32) avg={:.3f} max={:.3f} raw={:.3f}; avg vs Ne:{}; {:.1f} s", rel,
                        rep.avg_power, rep.max_power, rep.raw_power, avgs, secs)};
}

Outcome sinr_gap()
{
    const auto t0 = Clock::now();
    const auto r = run_experiment(config_of({{"experiment", "interference-sweep"},
                                             {"snr_db", "0"},
                                             {"K", "8"},
                                             {"Ke", "32"},
                                             {"Ne", "128,256"},
                                             {"trials", "10000"},
                                             {"sinr_db", "-16:8:0.5"},
                                             {"target_pd", "0.8"}}));
    const double g128 = value_of(r, "sinr_gap_db", {{"Ne", "128"}});
    const double g256 = value_of(r, "sinr_gap_db", {{"Ne", "256"}});
    const double p128 = value_of(r, "sinr_required_proposed", {{"Ne", "128"}});
    const double b128 = value_of(r, "sinr_required_baseline", {{"Ne", "128"}});
    const double p256 = value_of(r, "sinr_required_proposed", {{"Ne", "256"}});
    const double b256 = value_of(r, "sinr_required_baseline", {{"Ne", "256"}});
    const double secs = seconds_since(t0);
    const bool ok = std::abs(g128 - 3.5) <= 1.0 && std::abs(g256 - 6.0) <= 1.5 && secs < 1800.0;
    return {ok, fmt::format("gap(Ne=128)={:.2f} dB [proposed {:.2f}, baseline {:.2f}]; gap(Ne=256)={:.2f} dB "
                            "[proposed {:.2f}, baseline {:.2f}]; {:.0f} s",
                            g128, p128, b128, g256, p256, b256, secs)};
}

Outcome union_bound_and_lists()
{
    const auto t0 = Clock::now();
    const auto r = run_experiment(config_of({{"experiment", "detect-sweep"},
                                             {"Ne", "128"},
                                             {"Ke", "4"},
                                             {"L", "1,4"},
                                             {"trials", "10000"}}));
    bool below = true;
    bool close = true;
    bool lists = true;
    std::string worst;
    double worst_excess = -1.0;
    std::size_t checked = 0;
    for (const auto* sc : r.select("pd", {{"L", "1"}})) {
        ParamMap point = sc->params;
        point.erase("L");
        const double ub = value_of(r, "pd_union_bound", point);
        auto l4 = point;
        l4["L"] = "4";
        const auto* big = r.find("pd", l4);
        if (sc->value >= 0.5) {
            ++checked;
            if (ub > sc->value) {
                below = false;
                if (ub - sc->value > worst_excess) {
                    worst_excess = ub - sc->value;
                    worst = fmt::format(" worst at {} dB: UB={:.5f} sim={:.5f} (stderr {:.5f})", point.at("snr_db"), ub,
                                        sc->value, sc->stderr_value);
                }
            }
        }
        if (sc->value >= 0.99 && std::abs(sc->value - ub) > 0.02)
            close = false;
        if (big->value < sc->value - 2.0 * sc->stderr_value)
            lists = false;
    }
    const double secs = seconds_since(t0);
    return {below && close && lists && secs < 1200.0,
            fmt::format("UB<=sim: {} over {} points{}; |sim-UB|<=0.02 at sim>=0.99: {}; L=4 >= L=1-2se: {}; {:.0f} s",
                        below ? "yes" : "no", checked, worst, close ? "yes" : "no", lists ? "yes" : "no", secs)};
}

Outcome decoder_oracle()
{
    const auto spec = polar::construct_ga(8, 4, 1.0);
    const double sigma2 = 1.0;
    RngStream rng(derive_seed(1, 1, 0, Role::misc));
    constexpr int frames = 10000;
    int agree = 0;
    int ties = 0;
    for (int f = 0; f < frames; ++f) {
        const auto frozen = rng.bits(spec.n_frozen());
        const auto u = polar::assemble_input(spec, rng.bits(spec.k), frozen);
        const auto x = polar::encode(spec, u);
        std::vector<double> y(8);
        std::vector<double> llr(8);
        for (std::size_t i = 0; i < 8; ++i) {
            y[i] = (x[i] ? -1.0 : 1.0) + std::sqrt(sigma2) * rng.normal();
            llr[i] = 2.0 * y[i] / sigma2;
        }
        // Brute force over the 16 codewords consistent with the frozen values.
        double best = 1e300;
        double second = 1e300;
        BitVec best_u;
        for (unsigned m = 0; m < 16; ++m) {
            BitVec info(4);
            for (unsigned b = 0; b < 4; ++b)
                info[b] = static_cast<std::uint8_t>(m >> (3 - b) & 1U);
            const auto cand = polar::assemble_input(spec, info, frozen);
            const auto cw = polar::encode(spec, cand);
            double d = 0.0;
            for (std::size_t i = 0; i < 8; ++i) {
                const double e = y[i] - (cw[i] ? -1.0 : 1.0);
                d += e * e;
            }
            if (d < best) {
                second = best;
                best = d;
                best_u = cand;
            } else if (d < second) {
                second = d;
            }
        }
        const auto res = polar::decode_scl(spec, polar::SoftObservation(llr), frozen, 16);
        if (res.u_hat == best_u)
            ++agree;
        else if (second - best < 1e-9)
            ++ties;
    }
    const bool ml_ok = agree >= 0.999 * frames && agree + ties == frames;

    std::size_t trips = 0;
    std::size_t trip_ok = 0;
    for (std::size_t n = 2; n <= 256; n *= 2) {
        const auto sp = polar::construct_ga(n, n / 2, 1.0);
        for (int f = 0; f < 1000; ++f) {
            const auto frozen = rng.bits(sp.n_frozen());
            const auto u = polar::assemble_input(sp, rng.bits(sp.k), frozen);
            const auto x = polar::encode(sp, u);
            std::vector<double> llr(n);
            for (std::size_t i = 0; i < n; ++i)
                llr[i] = x[i] ? -polar::SoftObservation::cap : polar::SoftObservation::cap;
            ++trips;
            trip_ok += polar::decode_sc(sp, polar::SoftObservation(llr), frozen).u_hat == u;
        }
    }
    return {ml_ok && trip_ok == trips,
            fmt::format("SCL(L=16) = ML on {}/{} frames, {} metric ties; SC round trip {}/{} (n_e 2..256)", agree,
                        frames, ties, trip_ok, trips)};
}

Outcome compatibility_bound()
{
    const auto t0 = Clock::now();
    const auto r = run_experiment(config_of({{"experiment", "ber-bound"},
                                             {"N", "256"},
                                             {"rate", "0.5"},
                                             {"Ne", "0,16,32"},
                                             {"snr_db", "0:6:1"},
                                             {"trials", "10000"}}));
    std::size_t points = 0;
    std::size_t violations = 0;
    std::string worst;
    double worst_ratio = 0.0;
    bool tag_free = true;
    bool monotone = true;
    for (const auto* b : r.select("ber_bound")) {
        ++points;
        const double mc = value_of(r, "ber_mc", b->params);
        if (mc > b->value) {
            ++violations;
            if (mc / b->value > worst_ratio) {
                worst_ratio = mc / b->value;
                worst = fmt::format(" worst Ne={} {} dB: sim={:.4g} bound={:.4g};", b->params.at("Ne"),
                                    b->params.at("snr_db"), mc, b->value);
            }
        }
        if (b->params.at("Ne") == "0" && std::abs(b->value - value_of(r, "ber_bound_untagged", b->params)) > 1e-12)
            tag_free = false;
    }
    for (const auto* b0 : r.select("ber_bound", {{"Ne", "0"}})) {
        auto p16 = b0->params;
        p16["Ne"] = "16";
        auto p32 = b0->params;
        p32["Ne"] = "32";
        const double v16 = value_of(r, "ber_bound", p16);
        const double v32 = value_of(r, "ber_bound", p32);
        monotone = monotone && b0->value <= v16 && v16 <= v32;
    }
    const double secs = seconds_since(t0);
    return {violations == 0 && tag_free && monotone && secs < 1200.0,
            fmt::format("sim<=bound at {}/{} points;{} Ne=0 equals tag-free: {}; monotone in Ne: {}; {:.0f} s",
                        points - violations, points, worst, tag_free ? "yes" : "no", monotone ? "yes" : "no", secs)};
}

Outcome determinism()
{
    const std::vector<Config> configs{
        config_of({{"experiment", "detect-sweep"}, {"snr_db", "-10,-6"}, {"trials", "300"}, {"L", "1,2"}}),
        config_of({{"experiment", "taglen-sweep"}, {"Ne", "64"}, {"snr_db", "-2,0"}, {"trials", "300"}}),
        config_of({{"experiment", "interference-sweep"}, {"Ne", "128"}, {"sinr_db", "-4:0:2"}, {"trials", "300"}}),
        config_of({{"experiment", "eaves-position"}, {"snr_db", "0,2"}, {"trials", "300"}}),
        config_of({{"experiment", "eaves-tag"}, {"snr_db", "0,4"}, {"trials", "300"}}),
        config_of({{"experiment", "spoof-sd"}, {"trials", "1000"}}),
        config_of({{"experiment", "ber-bound"}, {"snr_db", "1,3"}, {"trials", "300"}}),
    };
    std::size_t same = 0;
    for (const auto& c : configs) {
        const auto a = format_csv(run_experiment(c, 1));
        const auto b = format_csv(run_experiment(c, 1));
        const auto d = format_csv(run_experiment(c, 2));
        const auto e = format_csv(run_experiment(c, 4));
        same += a == b && a == d && a == e;
    }
    return {same == configs.size(),
            fmt::format("{}/{} experiments byte-identical across reruns and 1, 2, 4 workers", same, configs.size())};
}

} // namespace

int main(int argc, char** argv)
{
    bool strict = false;
    std::string only;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--strict") == 0)
            strict = true;
        else if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc)
            only = argv[++i];
        else {
            std::cerr << "usage: acceptance [--strict] [--only <name substring>]\n";
            return 2;
        }
    }

    const std::vector<Criterion> criteria{
        {"position-confusion", position_confusion},
        {"spoof-symmetric-difference", spoofing_symmetric_difference},
        {"tag-confusion-covariance", tag_confusion_covariance},
        {"sinr-gap", sinr_gap},
        {"union-bound-and-list-monotonicity", union_bound_and_lists},
        {"decoder-oracle", decoder_oracle},
        {"compatibility-bound", compatibility_bound},
        {"determinism", determinism},
    };

    std::size_t failed = 0;
    std::size_t ran = 0;
    for (const auto& c : criteria) {
        if (!only.empty() && std::string(c.name).find(only) == std::string::npos)
            continue;
        ++ran;
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, fmt::format("exception: {}", e.what())};
        }
        failed += !o.pass;
        fmt::print("{} {}: {}\n", o.pass ? "PASS" : "FAIL", c.name, o.detail);
        std::fflush(stdout);
    }
    fmt::print("{} of {} criteria passed\n", ran - failed, ran);
    return strict && failed ? 1 : 0;
}
