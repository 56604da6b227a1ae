#include "ftag/polar.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ftag::polar {

namespace {

double clamp_llr(double x)
{
    return std::clamp(x, -SoftObservation::cap, SoftObservation::cap);
}

std::uint8_t hard_decision(double llr)
{
    return llr < 0.0 ? 1 : 0;
}

/// -log P(bit | llr) up to the bit-independent term; the mismatch cost is |llr|.
double bit_penalty(std::uint8_t bit, double llr)
{
    const double a = std::abs(llr);
    return std::log1p(std::exp(-a)) + (bit != hard_decision(llr) ? a : 0.0);
}

void check_inputs(const PolarSpec& spec, const SoftObservation& obs, std::span<const std::uint8_t> frozen_vals)
{
    if (obs.size() != spec.n)
        throw Error(fmt::format("observation length {} does not match code length {}", obs.size(), spec.n));
    if (frozen_vals.size() != spec.n_frozen())
        throw Error(fmt::format("{} frozen values supplied for {} frozen positions", frozen_vals.size(),
                                spec.n_frozen()));
}

/// Frozen value for every position (0 at information positions).
BitVec frozen_lookup(const PolarSpec& spec, std::span<const std::uint8_t> frozen_vals)
{
    BitVec lookup(spec.n, 0);
    for (std::size_t j = 0; j < spec.frozen_set.size(); ++j)
        lookup[spec.frozen_set[j]] = frozen_vals[j] & 1u;
    return lookup;
}

// ---------------------------------------------------------------------------
// Successive cancellation

struct ScContext {
    const PolarSpec& spec;
    const BitVec& frozen_value;
    CheckNodeRule rule;
    std::vector<std::vector<double>> llr;         // per depth, size n >> (depth + 1)
    std::vector<std::vector<std::uint8_t>> left;  // partial sums of left children
    std::vector<std::vector<std::uint8_t>> right; // partial sums of right children
    BitVec u_hat;
    double metric = 0.0;
};

void sc_node(ScContext& ctx, std::span<const double> llr, std::size_t offset, std::size_t depth,
             std::span<std::uint8_t> partial)
{
    const std::size_t m = llr.size();
    if (m == 1) {
        const std::uint8_t bit = ctx.spec.frozen_mask[offset] ? ctx.frozen_value[offset] : hard_decision(llr[0]);
        ctx.metric += bit_penalty(bit, llr[0]);
        ctx.u_hat[offset] = bit;
        partial[0] = bit;
        return;
    }
    const std::size_t h = m / 2;
    std::span<double> child(ctx.llr[depth].data(), h);
    std::span<std::uint8_t> ps_left(ctx.left[depth].data(), h);
    std::span<std::uint8_t> ps_right(ctx.right[depth].data(), h);

    for (std::size_t j = 0; j < h; ++j)
        child[j] = check_node(llr[j], llr[j + h], ctx.rule);
    sc_node(ctx, child, offset, depth + 1, ps_left);
    for (std::size_t j = 0; j < h; ++j)
        child[j] = variable_node(llr[j], llr[j + h], ps_left[j]);
    sc_node(ctx, child, offset + h, depth + 1, ps_right);
    for (std::size_t j = 0; j < h; ++j) {
        partial[j] = ps_left[j] ^ ps_right[j];
        partial[j + h] = ps_right[j];
    }
}

// ---------------------------------------------------------------------------
// Successive cancellation list
//
// Each node processes all live paths at once. A node returns the surviving
// paths' partial sums and, for each survivor, the index of the input path it
// descends from; parents compose these maps on the way back up.

struct ListOutput {
    std::vector<std::uint8_t> partial; // survivors x m, row major
    std::vector<std::size_t> parent;   // survivor -> input path
};

struct SclContext {
    const PolarSpec& spec;
    const BitVec& frozen_value;
    CheckNodeRule rule;
    std::size_t list_len;
    std::vector<double> metric; // one per live path
};

struct Candidate {
    double metric;
    bool off_decision;
    std::size_t path;
    std::uint8_t bit;
};

ListOutput scl_leaf(SclContext& ctx, std::span<const double> llr, std::size_t offset)
{
    const std::size_t paths = llr.size();
    ListOutput out;
    if (ctx.spec.frozen_mask[offset]) {
        const std::uint8_t bit = ctx.frozen_value[offset];
        out.partial.assign(paths, bit);
        out.parent.resize(paths);
        std::iota(out.parent.begin(), out.parent.end(), std::size_t{0});
        for (std::size_t p = 0; p < paths; ++p)
            ctx.metric[p] += bit_penalty(bit, llr[p]);
        return out;
    }

    std::vector<Candidate> cand;
    cand.reserve(2 * paths);
    for (std::size_t p = 0; p < paths; ++p)
        for (std::uint8_t b = 0; b < 2; ++b)
            cand.push_back({ctx.metric[p] + bit_penalty(b, llr[p]), b != hard_decision(llr[p]), p, b});

    const std::size_t keep = std::min(ctx.list_len, cand.size());
    // Ties prefer the hard decision, then the lower path; this makes L = 1 reproduce SC exactly.
    auto better = [](const Candidate& a, const Candidate& b) {
        if (a.metric != b.metric)
            return a.metric < b.metric;
        if (a.off_decision != b.off_decision)
            return !a.off_decision;
        if (a.path != b.path)
            return a.path < b.path;
        return a.bit < b.bit;
    };
    std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(keep), cand.end(), better);
    cand.resize(keep);
    // Survivors keep lineage order so path indices stay stable across forks.
    std::sort(cand.begin(), cand.end(),
              [](const Candidate& a, const Candidate& b) { return a.path != b.path ? a.path < b.path : a.bit < b.bit; });

    out.partial.resize(keep);
    out.parent.resize(keep);
    std::vector<double> metric(keep);
    for (std::size_t s = 0; s < keep; ++s) {
        out.partial[s] = cand[s].bit;
        out.parent[s] = cand[s].path;
        metric[s] = cand[s].metric;
    }
    ctx.metric = std::move(metric);
    return out;
}

/// llr is paths x m, row major.
ListOutput scl_node(SclContext& ctx, const std::vector<double>& llr, std::size_t m, std::size_t offset)
{
    const std::size_t paths = llr.size() / m;
    if (m == 1)
        return scl_leaf(ctx, llr, offset);

    const std::size_t h = m / 2;
    std::vector<double> child(paths * h);
    for (std::size_t p = 0; p < paths; ++p)
        for (std::size_t j = 0; j < h; ++j)
            child[p * h + j] = check_node(llr[p * m + j], llr[p * m + j + h], ctx.rule);
    ListOutput left = scl_node(ctx, child, h, offset);

    const std::size_t mid_paths = left.parent.size();
    child.assign(mid_paths * h, 0.0);
    for (std::size_t q = 0; q < mid_paths; ++q) {
        const std::size_t p = left.parent[q];
        for (std::size_t j = 0; j < h; ++j)
            child[q * h + j] = variable_node(llr[p * m + j], llr[p * m + j + h], left.partial[q * h + j]);
    }
    ListOutput right = scl_node(ctx, child, h, offset + h);

    const std::size_t out_paths = right.parent.size();
    ListOutput out;
    out.partial.resize(out_paths * m);
    out.parent.resize(out_paths);
    for (std::size_t r = 0; r < out_paths; ++r) {
        const std::size_t q = right.parent[r];
        for (std::size_t j = 0; j < h; ++j) {
            const std::uint8_t b = right.partial[r * h + j];
            out.partial[r * m + j] = left.partial[q * h + j] ^ b;
            out.partial[r * m + j + h] = b;
        }
        out.parent[r] = left.parent[q];
    }
    return out;
}

DecodeResult finish(const PolarSpec& spec, BitVec u_hat, double metric)
{
    DecodeResult res;
    res.info_bits = gather(u_hat, spec.info_set);
    res.u_hat = std::move(u_hat);
    res.path_metric = metric;
    return res;
}

} // namespace

double check_node(double a, double b, CheckNodeRule rule)
{
    const double sign = ((a < 0.0) != (b < 0.0)) ? -1.0 : 1.0;
    const double mag = std::min(std::abs(a), std::abs(b));
    if (rule == CheckNodeRule::min_sum)
        return clamp_llr(sign * mag);
    // 2 atanh(tanh(a/2) tanh(b/2)) without overflow.
    const double corr = std::log1p(std::exp(-std::abs(a + b))) - std::log1p(std::exp(-std::abs(a - b)));
    return clamp_llr(sign * mag + corr);
}

double variable_node(double a, double b, std::uint8_t partial)
{
    return clamp_llr(partial ? b - a : b + a);
}

SoftObservation::SoftObservation(std::vector<double> llrs) : llrs_(std::move(llrs))
{
    for (auto& x : llrs_) {
        if (std::isnan(x))
            throw Error("SoftObservation: NaN LLR");
        x = clamp_llr(x);
    }
}

BitVec polar_transform(std::span<const std::uint8_t> u)
{
    if (!is_power_of_two(u.size()))
        throw Error(fmt::format("polar transform length {} is not a power of two", u.size()));
    BitVec x(u.begin(), u.end());
    const std::size_t n = x.size();
    for (std::size_t h = 1; h < n; h *= 2)
        for (std::size_t i = 0; i < n; i += 2 * h)
            for (std::size_t j = i; j < i + h; ++j)
                x[j] ^= x[j + h];
    return x;
}

BitVec encode(const PolarSpec& spec, std::span<const std::uint8_t> u)
{
    if (u.size() != spec.n)
        throw Error(fmt::format("encoder input length {} does not match code length {}", u.size(), spec.n));
    return polar_transform(u);
}

BitVec assemble_input(const PolarSpec& spec, std::span<const std::uint8_t> info_bits,
                      std::span<const std::uint8_t> frozen_vals)
{
    if (info_bits.size() != spec.k)
        throw Error(fmt::format("{} information bits supplied for {} positions", info_bits.size(), spec.k));
    if (frozen_vals.size() != spec.n_frozen())
        throw Error(fmt::format("{} frozen values supplied for {} positions", frozen_vals.size(), spec.n_frozen()));
    BitVec u(spec.n, 0);
    for (std::size_t j = 0; j < spec.k; ++j)
        u[spec.info_set[j]] = info_bits[j] & 1u;
    for (std::size_t j = 0; j < spec.frozen_set.size(); ++j)
        u[spec.frozen_set[j]] = frozen_vals[j] & 1u;
    return u;
}

DecodeResult decode_sc(const PolarSpec& spec, const SoftObservation& obs, std::span<const std::uint8_t> frozen_vals,
                       const DecoderOptions& opts)
{
    check_inputs(spec, obs, frozen_vals);
    const BitVec lookup = frozen_lookup(spec, frozen_vals);
    ScContext ctx{spec, lookup, opts.check_node, {}, {}, {}, BitVec(spec.n, 0), 0.0};
    for (std::size_t m = spec.n / 2; m >= 1; m /= 2) {
        ctx.llr.emplace_back(m);
        ctx.left.emplace_back(m);
        ctx.right.emplace_back(m);
    }
    BitVec codeword(spec.n);
    sc_node(ctx, obs.llrs(), 0, 0, codeword);
    return finish(spec, std::move(ctx.u_hat), ctx.metric);
}

DecodeResult decode_scl(const PolarSpec& spec, const SoftObservation& obs, std::span<const std::uint8_t> frozen_vals,
                        std::size_t list_len, const DecoderOptions& opts)
{
    if (list_len < 1)
        throw Error("list length must be at least 1");
    check_inputs(spec, obs, frozen_vals);
    const BitVec lookup = frozen_lookup(spec, frozen_vals);
    SclContext ctx{spec, lookup, opts.check_node, list_len, {0.0}};
    const std::vector<double> root(obs.llrs().begin(), obs.llrs().end());
    ListOutput out = scl_node(ctx, root, spec.n, 0);

    // Lowest metric wins; ties go to the lowest path index.
    std::size_t best = 0;
    for (std::size_t p = 1; p < ctx.metric.size(); ++p)
        if (ctx.metric[p] < ctx.metric[best])
            best = p;
    const std::span<const std::uint8_t> codeword(out.partial.data() + best * spec.n, spec.n);
    // G is an involution over GF(2), so the input is the transform of the codeword.
    return finish(spec, polar_transform(codeword), ctx.metric[best]);
}

// ---------------------------------------------------------------------------

GeneratorView::GeneratorView(const PolarSpec& spec) : spec_(spec) {}

std::vector<BitVec> GeneratorView::rows(std::span<const std::size_t> row_set) const
{
    std::vector<BitVec> out;
    out.reserve(row_set.size());
    for (auto d : row_set) {
        if (d >= spec_.n)
            throw Error("generator row index out of range");
        BitVec unit(spec_.n, 0);
        unit[d] = 1;
        out.push_back(polar_transform(unit));
    }
    return out;
}

Eigen::MatrixXd GeneratorView::matrix(std::span<const std::size_t> row_set) const
{
    const auto r = rows(row_set);
    Eigen::MatrixXd g(static_cast<Eigen::Index>(r.size()), static_cast<Eigen::Index>(spec_.n));
    for (std::size_t i = 0; i < r.size(); ++i)
        for (std::size_t j = 0; j < spec_.n; ++j)
            g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = r[i][j];
    return g;
}

PseudoInverse frozen_pseudo_inverse(const GeneratorView& gen)
{
    const Eigen::MatrixXd g_f = gen.frozen_matrix();
    if (g_f.rows() == 0)
        throw Error("frozen_pseudo_inverse: code has no frozen rows");
    const Eigen::MatrixXd gram = g_f * g_f.transpose();
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(gram);

    PseudoInverse out;
    const double rcond = lu.rcond();
    out.condition_estimate = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
    out.ill_conditioned = out.condition_estimate > 1e12;
    out.gram_inverse = lu.inverse();
    out.m_r = g_f.transpose() * out.gram_inverse;

    const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(g_f.rows(), g_f.rows());
    out.residual = (g_f * out.m_r - eye).cwiseAbs().maxCoeff();
    if (!(out.residual < 1e-9))
        throw Error(fmt::format("frozen rows of G are numerically rank deficient (residual {:.3e}, cond {:.3e})",
                                out.residual, out.condition_estimate));
    return out;
}

} // namespace ftag::polar
