#include "ftag/selftest.hpp"

#include "ftag/bounds.hpp"
#include "ftag/channel.hpp"
#include "ftag/engine.hpp"
#include "ftag/experiments.hpp"
#include "ftag/keyed_index.hpp"
#include "ftag/polar.hpp"
#include "ftag/protocol.hpp"
#include "ftag/results.hpp"
#include "ftag/rng.hpp"

#include <fmt/format.h>

#include <cmath>
#include <functional>
#include <string>
#include <vector>

namespace ftag::harness {

namespace {

struct Check {
    const char* name;
    std::function<bool()> run;
};

std::vector<double> saturated_llrs(const BitVec& bits)
{
    std::vector<double> llr(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i)
        llr[i] = bits[i] ? -polar::SoftObservation::cap : polar::SoftObservation::cap;
    return llr;
}

bool sc_round_trip()
{
    RngStream rng(11);
    for (std::size_t n = 2; n <= 256; n *= 2) {
        const auto spec = polar::construct_ga(n, n / 2, 1.0);
        for (int t = 0; t < 20; ++t) {
            const auto info = rng.bits(spec.k);
            const auto frozen = rng.bits(spec.n_frozen());
            const auto u = polar::assemble_input(spec, info, frozen);
            const auto res = polar::decode_sc(spec, polar::SoftObservation(saturated_llrs(polar::encode(spec, u))), frozen);
            if (res.u_hat != u)
                return false;
        }
    }
    return true;
}

bool scl_one_is_sc()
{
    RngStream rng(12);
    const auto spec = polar::construct_ga(64, 16, 1.5);
    for (int t = 0; t < 100; ++t) {
        const auto frozen = rng.bits(spec.n_frozen());
        const auto x = polar::encode(spec, polar::assemble_input(spec, rng.bits(spec.k), frozen));
        std::vector<double> llr(x.size());
        for (std::size_t i = 0; i < x.size(); ++i)
            llr[i] = 2.0 * ((x[i] ? -1.0 : 1.0) + std::sqrt(1.5) * rng.normal()) / 1.5;
        const polar::SoftObservation obs(llr);
        if (polar::decode_sc(spec, obs, frozen).u_hat != polar::decode_scl(spec, obs, frozen, 1).u_hat)
            return false;
    }
    return true;
}

bool construction_reference()
{
    return polar::construct_ga(8, 4, 1.0).info_set == std::vector<std::size_t>{3, 5, 6, 7};
}

bool pseudo_inverse_identity()
{
    const auto spec = polar::construct_ga(16, 8, 1.0);
    const polar::GeneratorView gen(spec);
    const auto pinv = polar::frozen_pseudo_inverse(gen);
    const Eigen::MatrixXd id = gen.frozen_matrix() * pinv.m_r;
    return (id - Eigen::MatrixXd::Identity(id.rows(), id.cols())).norm() < 1e-9;
}

bool positions_well_formed()
{
    RngStream rng(13);
    for (int t = 0; t < 200; ++t) {
        const auto msg = rng.bits(256);
        const auto key = rng.key();
        const auto a = keyed::gen_pos(msg, key, 64);
        if (a.indices.size() != 64 || a.indices != keyed::gen_pos(msg, key, 64).indices)
            return false;
        for (std::size_t i = 0; i < a.indices.size(); ++i)
            if (a.indices[i] >= 256 || (i && a.indices[i] <= a.indices[i - 1]))
                return false;
    }
    return true;
}

bool frames_consistent_and_authenticate()
{
    const auto key = keyed::SecretKey::from_hex("00112233445566778899aabbccddeeff");
    const auto p = pla::make_params(256, 64, 8, 4, key, 1.0, 0.1, 1, 32);
    RngStream rng(14);
    for (int t = 0; t < 50; ++t) {
        const auto frame = pla::tx_build_frame(p, rng.bits(p.k_o));
        pla::check_frame(p, frame);
        const auto dec = pla::rx_authenticate(p, channel::modulate_bpsk(frame.tagged), 1e-3);
        if (!dec.accept || dec.s_o_hat != frame.s_o)
            return false;
    }
    return true;
}

bool untagged_bound_matches()
{
    for (double snr : {0.0, 3.0, 6.0}) {
        const auto b = bounds::ber_upper_bound(256, 128, 0, std::pow(10.0, -snr / 10.0));
        if (std::abs(b.value - b.tag_free_value) > 1e-12)
            return false;
    }
    return true;
}

bool worker_count_invariance()
{
    Config c;
    c.set("experiment", "spoof-sd");
    c.set("N", "256");
    c.set("Ne", "64,128");
    c.set("trials", "600");
    const auto a = format_csv(run_experiment(c, 1));
    const auto b = format_csv(run_experiment(c, 3));
    return a == b;
}

bool csv_round_trip()
{
    Config c;
    c.set("experiment", "eaves-tag");
    c.set("Ne", "32");
    c.set("snr_db", "0,2");
    c.set("trials", "20");
    const auto r = run_experiment(c, 1);
    const auto f = parse_csv(format_csv(r));
    if (f.manifest_hash != r.manifest.hash() || f.rows.size() != r.rows.size())
        return false;
    for (std::size_t i = 0; i < f.rows.size(); ++i)
        if (f.rows[i].value != r.rows[i].value || f.rows[i].params != r.rows[i].params)
            return false;
    return true;
}

} // namespace

std::size_t run_selftest(std::ostream& out)
{
    const std::vector<Check> checks{
        {"SC round trip with arbitrary frozen values", sc_round_trip},
        {"SCL with one path equals SC", scl_one_is_sc},
        {"GA construction reference (8,4)", construction_reference},
        {"frozen-set right inverse", pseudo_inverse_identity},
        {"keyed positions sorted, distinct, deterministic", positions_well_formed},
        {"noiseless frames authenticate", frames_consistent_and_authenticate},
        {"tag-free compatibility bound", untagged_bound_matches},
        {"results independent of worker count", worker_count_invariance},
        {"CSV round trip", csv_round_trip},
    };
    std::size_t failures = 0;
    for (const auto& c : checks) {
        bool ok = false;
        std::string detail;
        try {
            ok = c.run();
        } catch (const std::exception& e) {
            detail = fmt::format(" ({})", e.what());
        }
        failures += !ok;
        out << (ok ? "ok   " : "FAIL ") << c.name << detail << '\n';
    }
    out << fmt::format("{} of {} checks passed\n", checks.size() - failures, checks.size());
    return failures;
}

} // namespace ftag::harness
