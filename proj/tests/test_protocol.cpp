#include "ftag/channel.hpp"
#include "ftag/protocol.hpp"
#include "ftag/rng.hpp"

#include <doctest.h>

#include <cmath>

using namespace ftag;
using namespace ftag::pla;

namespace {

const keyed::SecretKey alice_key = keyed::SecretKey::from_hex("00112233445566778899aabbccddeeff");

// Small tag on a rate-1/4 message code: the outer decoder absorbs the tag overwrite.
ProtocolParams small_params(const keyed::SecretKey& key = alice_key, std::size_t outer_list = 4)
{
    return make_params(256, 64, 8, 4, key, 1.0, 0.1, 1, outer_list);
}

std::vector<double> noiseless(const BitVec& tagged)
{
    return channel::modulate_bpsk(tagged);
}

constexpr double tiny_sigma2 = 1e-3;

} // namespace

TEST_CASE("parameter validation")
{
    CHECK_THROWS_AS(make_params(256, 128, 8, 8, alice_key, 1.0, 1.0), Error);
    CHECK_THROWS_AS(make_params(256, 128, 512, 4, alice_key, 1.0, 1.0), Error);
    CHECK_THROWS_AS(make_params(200, 128, 8, 4, alice_key, 1.0, 1.0), Error);
    auto p = small_params();
    CHECK_NOTHROW(p.validate());
    CHECK(p.threshold() == 4);
    p.gamma0 = 3;
    CHECK(p.threshold() == 3);
    p.gamma0 = 5;
    CHECK_THROWS_AS(p.validate(), Error);
    p.gamma0.reset();
    p.list_len_inner = 0;
    CHECK_THROWS_AS(p.validate(), Error);
}

TEST_CASE("twelve-position splice example")
{
    // Tag positions {1,3,4,6,9,10,11,12} counted from one.
    const std::vector<std::size_t> positions{0, 2, 3, 5, 8, 9, 10, 11};
    const BitVec s_o{0, 1, 1, 0, 1, 0, 0, 1, 1, 0, 1, 0};
    const BitVec t_e{1, 0, 0, 1, 0, 1, 1, 0};
    const keyed::IndexSet idx{positions, 12};
    const auto anchor = gather(s_o, idx.prefix(4));
    CHECK(anchor == BitVec{s_o[0], s_o[2], s_o[3], s_o[5]});
    const auto tagged = splice(s_o, positions, t_e);
    const BitVec expected{t_e[0], s_o[1], t_e[1], t_e[2], s_o[4], t_e[3], s_o[6], s_o[7], t_e[4], t_e[5], t_e[6], t_e[7]};
    CHECK(tagged == expected);
    CHECK(gather(tagged, positions) == t_e);
    CHECK_THROWS_AS(splice(s_o, positions, BitVec{1}), Error);
}

TEST_CASE("effective llr")
{
    CHECK(llr_effective(0.0, 0.7, 0.2) == 0.0);
    CHECK(llr_effective(0.5, 0.25, 0.0) == doctest::Approx(4.0));
    CHECK(llr_effective(1.0, 1.0, 1.0) == doctest::Approx(1.0));
}

TEST_CASE("frame invariants hold")
{
    const auto p = small_params();
    RngStream rng(3);
    for (int rep = 0; rep < 200; ++rep) {
        const auto f = tx_build_frame(p, rng.bits(p.k_o));
        CHECK_NOTHROW(check_frame(p, f));
        CHECK(f.raw_tag == keyed::gen_tag(f.s_o, p.key, p.n_e - p.k_e));
        CHECK(f.idx == keyed::gen_pos(f.s_o, p.key, p.n_e));
        CHECK(hamming_distance(f.tagged, f.s_o) <= p.n_e);
    }
    auto f = tx_build_frame(p, rng.bits(p.k_o));
    f.tagged[f.idx.complement()[0]] ^= 1u;
    CHECK_THROWS_AS(check_frame(p, f), Error);
    CHECK_THROWS_AS(tx_build_frame(p, BitVec(p.k_o + 1, 0)), Error);
    CHECK(serialize_frame(f).find("positions=") == 0);
}

TEST_CASE("noiseless legitimate frames authenticate")
{
    RngStream rng(4);
    std::size_t recovered = 0;
    for (int rep = 0; rep < 1000; ++rep) {
        const auto p = small_params(rng.key(), 32);
        const auto f = tx_build_frame(p, rng.bits(p.k_o));
        const auto d = rx_authenticate(p, noiseless(f.tagged), tiny_sigma2);
        recovered += d.s_o_hat == f.s_o;
        CHECK(d.accept);
        CHECK(d.delta == p.k_e);
        CHECK(d.delta == p.k_e - hamming_distance(d.s_re, d.s_hat));
    }
    CHECK(recovered == 1000);
}

TEST_CASE("key sensitivity of tag positions")
{
    const auto p = small_params();
    RngStream rng(5);
    std::size_t changed = 0;
    std::size_t total = 0;
    for (int rep = 0; rep < 20; ++rep) {
        const auto s_o = outer_encode(p, rng.bits(p.k_o));
        const auto base = keyed::gen_pos(s_o, p.key, p.n_e);
        for (unsigned bit = 0; bit < 128; ++bit) {
            changed += keyed::gen_pos(s_o, p.key.with_bit_flipped(bit), p.n_e) != base;
            ++total;
        }
    }
    CHECK(changed >= 0.99 * static_cast<double>(total));
}

TEST_CASE("wrong receiver key accepts at chance level")
{
    const auto p = small_params(alice_key, 1);
    auto bob = p;
    bob.key = alice_key.with_bit_flipped(77);
    channel::ChannelConfig cfg;
    cfg.snr_db = 10.0;
    std::size_t accepted = 0;
    constexpr std::size_t trials = 100000;
    for (std::size_t t = 0; t < trials; ++t) {
        RngStream msg(21, 0, t, Role::message);
        RngStream ch(21, 0, t, Role::channel);
        const auto f = tx_build_frame(p, msg.bits(p.k_o));
        const auto d = apply_channel(cfg, channel::modulate_bpsk(f.tagged), ch);
        accepted += rx_authenticate(bob, d.received, cfg.noise_var()).accept;
    }
    const double rate = static_cast<double>(accepted) / trials;
    MESSAGE("wrong-key acceptance rate " << rate);
    CHECK(std::abs(rate - 1.0 / 16.0) < 0.005);
}

TEST_CASE("untagged frames are rejected")
{
    const auto p = small_params();
    channel::ChannelConfig cfg;
    cfg.snr_db = 10.0;
    std::size_t accepted = 0;
    constexpr std::size_t trials = 20000;
    for (std::size_t t = 0; t < trials; ++t) {
        RngStream msg(22, 0, t, Role::message);
        RngStream ch(22, 0, t, Role::channel);
        const auto s_o = outer_encode(p, msg.bits(p.k_o));
        const auto d = apply_channel(cfg, channel::modulate_bpsk(s_o), ch);
        accepted += rx_authenticate(p, d.received, cfg.noise_var()).accept;
    }
    const double rate = static_cast<double>(accepted) / trials;
    MESSAGE("untagged acceptance rate " << rate);
    CHECK(rate <= 1.0 / 16.0 + 0.01);
}

TEST_CASE("uncoded baseline")
{
    const auto p = small_params();
    RngStream rng(6);
    for (int rep = 0; rep < 200; ++rep) {
        const auto msg = rng.bits(p.k_o);
        const auto b = baseline_uncoded_tx(p, msg);
        const auto f = tx_build_frame(p, msg);
        // Both schemes overwrite exactly n_e positions of the same message.
        CHECK(b.idx.size() == p.n_e);
        CHECK(f.idx.size() == p.n_e);
        CHECK(b.s_o == f.s_o);
        for (auto i : b.idx.complement())
            CHECK(b.tagged[i] == b.s_o[i]);
        CHECK(gather(b.tagged, b.idx.indices) == b.tag);
        const auto d = baseline_uncoded_rx_with_message(p, noiseless(b.tagged), b.s_o);
        CHECK(d.delta == doctest::Approx(static_cast<double>(p.n_e)));
        CHECK(d.accept);
    }
    CHECK(baseline_threshold(128, 0.01) == doctest::Approx(std::sqrt(128.0) * 2.3263478740).epsilon(1e-9));

    // H0: correlation against an independent random tag has zero mean.
    double sum = 0.0;
    constexpr int trials = 20000;
    for (int t = 0; t < trials; ++t) {
        const auto msg = rng.bits(p.k_o);
        auto b = baseline_uncoded_tx(p, msg);
        const auto fake = splice(b.s_o, b.idx.indices, rng.bits(p.n_e));
        sum += baseline_uncoded_rx_with_message(p, noiseless(fake), b.s_o).delta;
    }
    CHECK(std::abs(sum / trials) < 4.0 * std::sqrt(double(p.n_e) / trials));
}

TEST_CASE("genie receiver matches the full receiver when the message is recovered")
{
    const auto p = small_params();
    channel::ChannelConfig cfg;
    cfg.snr_db = 4.0;
    for (std::uint64_t t = 0; t < 300; ++t) {
        RngStream msg(23, 0, t, Role::message);
        RngStream ch(23, 0, t, Role::channel);
        const auto f = tx_build_frame(p, msg.bits(p.k_o));
        const auto d = apply_channel(cfg, channel::modulate_bpsk(f.tagged), ch);
        const auto full = rx_authenticate(p, d.received, cfg.noise_var());
        if (full.s_o_hat != f.s_o)
            continue;
        const auto genie = rx_authenticate_with_message(p, d.received, f.s_o, cfg.noise_var());
        CHECK(genie.delta == full.delta);
        CHECK(genie.s_re == full.s_re);
    }
}
