#include "ftag/polar.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

namespace ftag::polar {

namespace {

// Chung et al. fit exp(alpha x^beta + gamma) on [phi_low, phi_split), the
// asymptotic form above phi_split. Below phi_low the fit exceeds 1, so a
// quadratic exponent exp(c2 x^2 + c1 x) takes over, giving phi(0) = 1.
constexpr double phi_alpha = -0.4527;
constexpr double phi_beta = 0.86;
constexpr double phi_gamma = 0.0218;
constexpr double phi_split = 10.0;
constexpr double phi_low = 0.6357;
constexpr double phi_c2 = 0.0564;
constexpr double phi_c1 = -0.48560;

double log_phi(double x)
{
    if (x < phi_low)
        return phi_c2 * x * x + phi_c1 * x;
    if (x < phi_split)
        return phi_alpha * std::pow(x, phi_beta) + phi_gamma;
    return 0.5 * std::log(std::numbers::pi / x) - x / 4.0 + std::log1p(-10.0 / (7.0 * x));
}

double log_phi_inverse(double log_y)
{
    if (log_y >= 0.0)
        return 0.0;
    const double log_at_low = phi_c2 * phi_low * phi_low + phi_c1 * phi_low;
    if (log_y >= log_at_low) {
        const double disc = phi_c1 * phi_c1 + 4.0 * phi_c2 * log_y;
        return (-phi_c1 - std::sqrt(std::max(disc, 0.0))) / (2.0 * phi_c2);
    }
    // Closed-form inverse of the middle piece down to its value at the split.
    const double log_at_split = phi_alpha * std::pow(phi_split, phi_beta) + phi_gamma;
    if (log_y >= log_at_split) {
        const double t = (phi_gamma - log_y) / -phi_alpha;
        return std::max(std::pow(std::max(t, 0.0), 1.0 / phi_beta), phi_low);
    }
    // Asymptotic piece is decreasing in x; bracket then bisect.
    double lo = phi_split;
    double hi = 2.0 * phi_split;
    while (log_phi(hi) > log_y)
        hi *= 2.0;
    for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (log_phi(mid) > log_y)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

void check_geometry(std::size_t n, std::size_t k)
{
    if (!is_power_of_two(n))
        throw Error(fmt::format("polar code length {} is not a power of two", n));
    if (k < 1 || k > n)
        throw Error(fmt::format("information length {} out of range [1, {}]", k, n));
}

PolarSpec make_spec(std::size_t n, std::size_t k, std::vector<double> rel, Construction method,
                    double design_param)
{
    PolarSpec spec;
    spec.n = n;
    spec.k = k;
    spec.reliabilities = std::move(rel);
    spec.method = method;
    spec.design_param = design_param;

    const auto order = reliability_order(spec);
    spec.info_set.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));
    std::sort(spec.info_set.begin(), spec.info_set.end());
    spec.frozen_mask.assign(n, 1);
    for (auto i : spec.info_set)
        spec.frozen_mask[i] = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (spec.frozen_mask[i])
            spec.frozen_set.push_back(i);
    return spec;
}

} // namespace

std::string to_string(Construction c)
{
    return c == Construction::gaussian_approx ? "ga" : "bhattacharyya";
}

Construction construction_from_string(const std::string& s)
{
    if (s == "ga")
        return Construction::gaussian_approx;
    if (s == "bhattacharyya" || s == "bh")
        return Construction::bhattacharyya;
    throw Error("unknown construction method '" + s + "'");
}

bool is_power_of_two(std::size_t n)
{
    return n != 0 && (n & (n - 1)) == 0;
}

double ga_phi(double x)
{
    if (x <= 0.0)
        return 1.0;
    return std::exp(log_phi(x));
}

double ga_phi_inverse(double y)
{
    if (!(y > 0.0))
        throw Error("ga_phi_inverse: argument must be positive");
    return log_phi_inverse(std::log(y));
}

std::vector<double> ga_means(std::size_t n, double sigma2)
{
    if (!is_power_of_two(n))
        throw Error(fmt::format("polar code length {} is not a power of two", n));
    if (!(sigma2 > 0.0))
        throw Error("design noise variance must be positive");
    std::vector<double> m{2.0 / sigma2};
    while (m.size() < n) {
        std::vector<double> next(2 * m.size());
        for (std::size_t j = 0; j < m.size(); ++j) {
            // 1 - (1 - phi)^2 = phi (2 - phi), evaluated in the log domain.
            const double lp = log_phi(m[j]);
            const double p = std::exp(lp);
            next[2 * j] = m[j] <= 0.0 ? 0.0 : log_phi_inverse(lp + std::log(2.0 - std::min(p, 1.0)));
            next[2 * j + 1] = 2.0 * m[j];
        }
        m = std::move(next);
    }
    return m;
}

std::vector<double> bhattacharyya_params(std::size_t n, double z_init)
{
    if (!is_power_of_two(n))
        throw Error(fmt::format("polar code length {} is not a power of two", n));
    if (!(z_init >= 0.0 && z_init <= 1.0))
        throw Error("initial Bhattacharyya parameter must lie in [0, 1]");
    std::vector<double> z{z_init};
    while (z.size() < n) {
        std::vector<double> next(2 * z.size());
        for (std::size_t j = 0; j < z.size(); ++j) {
            next[2 * j] = 2.0 * z[j] - z[j] * z[j];
            next[2 * j + 1] = z[j] * z[j];
        }
        z = std::move(next);
    }
    return z;
}

std::vector<std::size_t> reliability_order(const PolarSpec& spec)
{
    std::vector<std::size_t> order(spec.reliabilities.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    const auto& r = spec.reliabilities;
    if (spec.method == Construction::gaussian_approx)
        std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return r[a] > r[b]; });
    else
        std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return r[a] < r[b]; });
    return order;
}

PolarSpec construct_ga(std::size_t n, std::size_t k, double design_sigma2)
{
    check_geometry(n, k);
    return make_spec(n, k, ga_means(n, design_sigma2), Construction::gaussian_approx, design_sigma2);
}

PolarSpec construct_bhattacharyya(std::size_t n, std::size_t k, double z_init)
{
    check_geometry(n, k);
    return make_spec(n, k, bhattacharyya_params(n, z_init), Construction::bhattacharyya, z_init);
}

std::string format_golden_row(const PolarSpec& spec)
{
    std::string row = fmt::format("{} {} {} {} :", spec.n, spec.k, to_string(spec.method), spec.design_param);
    for (auto i : spec.info_set)
        row += fmt::format(" {}", i);
    return row;
}

GoldenConstruction parse_golden_row(const std::string& line)
{
    std::istringstream in(line);
    GoldenConstruction row;
    std::string method;
    std::string colon;
    if (!(in >> row.n >> row.k >> method >> row.design_param >> colon) || colon != ":")
        throw Error("malformed construction golden row: " + line);
    row.method = construction_from_string(method);
    std::size_t idx;
    while (in >> idx)
        row.info_set.push_back(idx);
    if (!in.eof())
        throw Error("malformed construction golden row: " + line);
    return row;
}

PolarSpec construct(const GoldenConstruction& row)
{
    return row.method == Construction::gaussian_approx ? construct_ga(row.n, row.k, row.design_param)
                                                       : construct_bhattacharyya(row.n, row.k, row.design_param);
}

} // namespace ftag::polar
