#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace ftag {

/// Gaussian tail probability Q(x) = P(N(0,1) > x).
double q_function(double x);

/// Inverse of q_function on (0, 1).
double q_inverse(double p);

/// Unit signal power: sigma^2 = 10^(-snr_db/10) per real dimension.
inline double sigma2_from_snr_db(double snr_db) { return std::pow(10.0, -snr_db / 10.0); }

inline double snr_db_from_sigma2(double sigma2) { return -10.0 * std::log10(sigma2); }

/// Gauss-Hermite rule for the weight exp(-x^2) (physicists' convention).
struct GaussHermiteRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Golub-Welsch construction; order >= 1.
GaussHermiteRule gauss_hermite(std::size_t order);

/// Binomial standard error sqrt(p(1-p)/n).
inline double binomial_stderr(double p, std::size_t trials)
{
    return trials == 0 ? 0.0 : std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

} // namespace ftag
