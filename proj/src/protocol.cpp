#include "ftag/protocol.hpp"

#include "ftag/numeric.hpp"

#include <fmt/format.h>

#include <cmath>

namespace ftag::pla {

using keyed::gen_pos;
using keyed::gen_tag;

void ProtocolParams::validate() const
{
    if (!polar::is_power_of_two(n))
        throw Error(fmt::format("message length {} is not a power of two", n));
    if (k_o < 1 || k_o > n)
        throw Error(fmt::format("outer information length {} out of range", k_o));
    if (n_e < 2 || n_e > n)
        throw Error(fmt::format("frozen tag length {} must lie in [2, {}]", n_e, n));
    if (k_e < 1 || k_e >= n_e)
        throw Error(fmt::format("anchor length {} must lie in [1, {}) so the raw tag is non-empty", k_e, n_e));
    if (inner_spec.n != n_e || inner_spec.k != k_e)
        throw Error("inner code does not match (n_e, k_e)");
    if (outer_spec.n != n || outer_spec.k != k_o)
        throw Error("outer code does not match (n, k_o)");
    if (list_len_inner < 1 || list_len_outer < 1)
        throw Error("list lengths must be at least 1");
    if (gamma0 && *gamma0 > k_e)
        throw Error("threshold cannot exceed the anchor length");
}

ProtocolParams make_params(std::size_t n, std::size_t k_o, std::size_t n_e, std::size_t k_e,
                           const keyed::SecretKey& key, double inner_sigma2, double outer_sigma2,
                           std::size_t list_len_inner, std::size_t list_len_outer)
{
    if (k_e >= n_e)
        throw Error(fmt::format("anchor length {} must be below the frozen tag length {}", k_e, n_e));
    ProtocolParams p;
    p.n = n;
    p.k_o = k_o;
    p.n_e = n_e;
    p.k_e = k_e;
    p.inner_spec = polar::construct_ga(n_e, k_e, inner_sigma2);
    p.outer_spec = polar::construct_bhattacharyya(n, k_o, std::exp(-1.0 / (2.0 * outer_sigma2)));
    p.key = key;
    p.list_len_inner = list_len_inner;
    p.list_len_outer = list_len_outer;
    p.validate();
    return p;
}

BitVec splice(std::span<const std::uint8_t> base, std::span<const std::size_t> positions,
              std::span<const std::uint8_t> values)
{
    if (positions.size() != values.size())
        throw Error("splice: position and value counts differ");
    BitVec out(base.begin(), base.end());
    for (std::size_t j = 0; j < positions.size(); ++j)
        out.at(positions[j]) = values[j];
    return out;
}

BitVec outer_encode(const ProtocolParams& params, std::span<const std::uint8_t> msg_bits)
{
    if (msg_bits.size() != params.k_o)
        throw Error(fmt::format("message has {} bits, expected {}", msg_bits.size(), params.k_o));
    const BitVec zeros(params.outer_spec.n_frozen(), 0);
    return polar::encode(params.outer_spec, polar::assemble_input(params.outer_spec, msg_bits, zeros));
}

FrameContext tx_build_frame(const ProtocolParams& params, std::span<const std::uint8_t> msg_bits)
{
    FrameContext f;
    f.s_o = outer_encode(params, msg_bits);
    f.idx = gen_pos(f.s_o, params.key, params.n_e);
    f.anchor = gather(f.s_o, f.idx.prefix(params.k_e));
    f.raw_tag = gen_tag(f.s_o, params.key, params.tag_len());
    f.frozen_tag = polar::encode(params.inner_spec, polar::assemble_input(params.inner_spec, f.anchor, f.raw_tag));
    f.tagged = splice(f.s_o, f.idx.indices, f.frozen_tag);
    return f;
}

void check_frame(const ProtocolParams& params, const FrameContext& f)
{
    if (f.s_o.size() != params.n || f.tagged.size() != params.n)
        throw Error("frame length mismatch");
    if (f.idx.size() != params.n_e || f.frozen_tag.size() != params.n_e)
        throw Error("tag length mismatch");
    if (gather(f.s_o, f.idx.prefix(params.k_e)) != f.anchor)
        throw Error("anchor is not the message at the first k_e tag positions");
    if (gather(f.tagged, f.idx.indices) != f.frozen_tag)
        throw Error("tagged frame does not carry the frozen tag at the tag positions");
    for (auto i : f.idx.complement())
        if (f.tagged[i] != f.s_o[i])
            throw Error(fmt::format("tagged frame differs from the message at untagged position {}", i));
    const auto u = polar::assemble_input(params.inner_spec, f.anchor, f.raw_tag);
    if (polar::encode(params.inner_spec, u) != f.frozen_tag)
        throw Error("frozen tag is not the inner encoding of (anchor, raw tag)");
}

std::string serialize_frame(const FrameContext& f)
{
    std::string pos;
    for (std::size_t j = 0; j < f.idx.size(); ++j)
        pos += fmt::format("{}{}", j ? " " : "", f.idx.indices[j]);
    return fmt::format("positions={};s_o={};anchor={};raw_tag={};frozen_tag={};tagged={}", pos, to_hex(f.s_o),
                       to_hex(f.anchor), to_hex(f.raw_tag), to_hex(f.frozen_tag), to_hex(f.tagged));
}

double llr_effective(double r, double sigma2, double interference_power)
{
    return 2.0 * r / (sigma2 + interference_power);
}

polar::SoftObservation soft_observation(std::span<const double> received, std::span<const std::size_t> positions,
                                        double sigma2, double interference_power)
{
    std::vector<double> llr(positions.size());
    for (std::size_t j = 0; j < positions.size(); ++j)
        llr[j] = llr_effective(received[positions[j]], sigma2, interference_power);
    return polar::SoftObservation(std::move(llr));
}

BitVec recover_message(const ProtocolParams& params, std::span<const double> received, double noise_var,
                       double interference_power)
{
    if (received.size() != params.n)
        throw Error(fmt::format("received frame has {} samples, expected {}", received.size(), params.n));
    if (!(noise_var > 0.0))
        throw Error("noise variance must be positive");
    std::vector<double> llr(received.size());
    for (std::size_t i = 0; i < received.size(); ++i)
        llr[i] = llr_effective(received[i], noise_var, interference_power);
    const BitVec zeros(params.outer_spec.n_frozen(), 0);
    const auto dec =
        polar::decode_scl(params.outer_spec, polar::SoftObservation(std::move(llr)), zeros, params.list_len_outer);
    return polar::polar_transform(dec.u_hat);
}

AuthDecision rx_authenticate_with_message(const ProtocolParams& params, std::span<const double> received,
                                          std::span<const std::uint8_t> s_o_hat, double noise_var,
                                          double interference_power)
{
    if (received.size() != params.n || s_o_hat.size() != params.n)
        throw Error("receiver input length mismatch");
    AuthDecision d;
    d.s_o_hat.assign(s_o_hat.begin(), s_o_hat.end());
    d.idx_hat = gen_pos(d.s_o_hat, params.key, params.n_e);
    d.s_hat = gather(d.s_o_hat, d.idx_hat.prefix(params.k_e));
    const BitVec t_hat = gen_tag(d.s_o_hat, params.key, params.tag_len());
    const auto obs = soft_observation(received, d.idx_hat.indices, noise_var, interference_power);
    d.s_re = polar::decode_scl(params.inner_spec, obs, t_hat, params.list_len_inner).info_bits;
    d.delta = params.k_e - hamming_distance(d.s_re, d.s_hat);
    d.accept = d.delta >= params.threshold();
    return d;
}

AuthDecision rx_authenticate(const ProtocolParams& params, std::span<const double> received, double noise_var,
                             double interference_power)
{
    const BitVec s_o_hat = recover_message(params, received, noise_var, interference_power);
    return rx_authenticate_with_message(params, received, s_o_hat, noise_var, interference_power);
}

double baseline_threshold(std::size_t n_e, double p_fa)
{
    return std::sqrt(static_cast<double>(n_e)) * q_inverse(p_fa);
}

BaselineFrame baseline_uncoded_tx(const ProtocolParams& params, std::span<const std::uint8_t> msg_bits)
{
    BaselineFrame f;
    f.s_o = outer_encode(params, msg_bits);
    f.idx = gen_pos(f.s_o, params.key, params.n_e);
    f.tag = gen_tag(f.s_o, params.key, params.n_e);
    f.tagged = splice(f.s_o, f.idx.indices, f.tag);
    return f;
}

BaselineDecision baseline_uncoded_rx_with_message(const ProtocolParams& params, std::span<const double> received,
                                                  std::span<const std::uint8_t> s_o_hat, double p_fa)
{
    if (received.size() != params.n || s_o_hat.size() != params.n)
        throw Error("receiver input length mismatch");
    const auto idx = gen_pos(s_o_hat, params.key, params.n_e);
    const auto tag = gen_tag(s_o_hat, params.key, params.n_e);
    BaselineDecision d;
    for (std::size_t j = 0; j < params.n_e; ++j) {
        const double expected = tag[j] ? -1.0 : 1.0;
        const double estimate = received[idx.indices[j]] < 0.0 ? -1.0 : 1.0;
        d.delta += expected * estimate;
    }
    d.threshold = baseline_threshold(params.n_e, p_fa);
    d.accept = d.delta >= d.threshold;
    return d;
}

BaselineDecision baseline_uncoded_rx(const ProtocolParams& params, std::span<const double> received,
                                     double noise_var, double interference_power, double p_fa)
{
    const BitVec s_o_hat = recover_message(params, received, noise_var, interference_power);
    return baseline_uncoded_rx_with_message(params, received, s_o_hat, p_fa);
}

} // namespace ftag::pla
