#include "ftag/bounds.hpp"

#include "ftag/numeric.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace ftag::bounds {

namespace {

constexpr std::size_t max_quad_order = 4096;

const GaussHermiteRule& cached_rule(std::size_t order)
{
    static std::mutex mu;
    static std::map<std::size_t, GaussHermiteRule> cache;
    std::lock_guard lock(mu);
    auto it = cache.find(order);
    if (it == cache.end())
        it = cache.emplace(order, gauss_hermite(order)).first;
    return it->second;
}

double cascade_integral(double a, double b, double sigma2, const GaussHermiteRule& rule)
{
    // r = sqrt(2 sigma2) x; sqrt(a + 2b cosh z) = e^{|z|/2} sqrt(b + a e^{-|z|} + b e^{-2|z|}).
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        if (rule.weights[i] <= 0.0)
            continue;
        const double r = std::sqrt(2.0 * sigma2) * rule.nodes[i];
        const double z = std::abs(2.0 * r / sigma2);
        const double e1 = std::exp(-z);
        const double log_term = 0.5 * z + 0.5 * std::log(b + a * e1 + b * e1 * e1) - 1.0 / (2.0 * sigma2);
        sum += std::exp(std::log(rule.weights[i]) + log_term);
    }
    return sum / std::sqrt(std::numbers::pi);
}

} // namespace

BoundReport union_bound_pd(const polar::PolarSpec& spec, double sigma2)
{
    if (!(sigma2 > 0.0))
        throw Error("noise variance must be positive");
    polar::PolarSpec ga = spec;
    if (spec.method != polar::Construction::gaussian_approx || spec.design_param != sigma2)
        ga = polar::construct_ga(spec.n, spec.k, sigma2);
    BoundReport r;
    r.per_index = ga.reliabilities;
    r.info_set = ga.info_set;
    double sum_q = 0.0;
    for (auto i : ga.info_set)
        sum_q += q_function(std::sqrt(ga.reliabilities[i] / 2.0));
    r.unclamped = 1.0 - sum_q;
    r.value = std::clamp(r.unclamped, 0.0, 1.0);
    r.clamped = r.value != r.unclamped;
    return r;
}

CascadeChannel CascadeChannel::for_tag(std::size_t n, std::size_t n_e, double sigma2)
{
    if (n == 0 || n_e > n)
        throw Error("tag length must not exceed message length");
    CascadeChannel ch;
    ch.p_bsc = static_cast<double>(n_e) / (2.0 * static_cast<double>(n));
    ch.sigma2 = sigma2;
    ch.validate();
    return ch;
}

void CascadeChannel::validate() const
{
    if (!(p_bsc >= 0.0 && p_bsc <= 0.5))
        throw Error("BSC crossover probability must lie in [0, 1/2]");
    if (!(sigma2 > 0.0))
        throw Error("noise variance must be positive");
}

double cascade_bhattacharyya_init(const CascadeChannel& ch, std::size_t quad_order, double rel_tol)
{
    ch.validate();
    if (quad_order < 32)
        throw Error("quadrature order must be at least 32");
    const double p = ch.p_bsc;
    if (p == 0.0)
        return std::exp(-1.0 / (2.0 * ch.sigma2));
    const double a = (1.0 - p) * (1.0 - p) + p * p;
    const double b = (1.0 - p) * p;
    double prev = cascade_integral(a, b, ch.sigma2, cached_rule(quad_order));
    for (std::size_t order = 2 * quad_order; order <= max_quad_order; order *= 2) {
        const double cur = cascade_integral(a, b, ch.sigma2, cached_rule(order));
        if (std::abs(cur - prev) <= rel_tol * std::abs(cur))
            return std::min(cur, 1.0);
        prev = cur;
    }
    throw Error(fmt::format("cascade Bhattacharyya quadrature did not converge (p={}, sigma2={})", p, ch.sigma2));
}

BoundReport ber_upper_bound(std::size_t n, std::size_t k_o, std::size_t n_e, double sigma2)
{
    const double z0 = std::exp(-1.0 / (2.0 * sigma2));
    const auto spec = polar::construct_bhattacharyya(n, k_o, z0);
    const double zc = cascade_bhattacharyya_init(CascadeChannel::for_tag(n, n_e, sigma2));
    BoundReport r;
    r.z_init = zc;
    r.per_index = polar::bhattacharyya_params(n, zc);
    r.info_set = spec.info_set;
    double tagged = 0.0;
    double tag_free = 0.0;
    for (auto i : spec.info_set) {
        tagged += r.per_index[i];
        tag_free += spec.reliabilities[i];
    }
    const double k = static_cast<double>(spec.info_set.size());
    r.unclamped = tagged / k;
    r.value = std::clamp(r.unclamped, 0.0, 1.0);
    r.clamped = r.value != r.unclamped;
    r.tag_free_value = tag_free / k;
    return r;
}

} // namespace ftag::bounds
