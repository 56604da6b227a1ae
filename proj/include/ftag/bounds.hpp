#pragma once

#include "ftag/polar.hpp"

#include <string>
#include <vector>

namespace ftag::bounds {

struct BoundReport {
    /// GA means or Bhattacharyya parameters, one per synthetic channel.
    std::vector<double> per_index;
    std::vector<std::size_t> info_set;
    double value = 0.0;
    /// Set when the unclamped value left [0, 1].
    bool clamped = false;
    double unclamped = 0.0;
    /// Same bound on the untagged channel (compatibility bound only).
    double tag_free_value = 0.0;
    double z_init = 0.0;
};

/// 1 - sum over the information set of Q(sqrt(e_i / 2)), clamped to [0, 1].
/// The GA code at sigma2 is used; a spec built otherwise is reconstructed.
BoundReport union_bound_pd(const polar::PolarSpec& spec, double sigma2);

struct CascadeChannel {
    double p_bsc = 0.0; // tag insertion flip probability n_e / (2 n)
    double sigma2 = 1.0;

    static CascadeChannel for_tag(std::size_t n, std::size_t n_e, double sigma2);
    void validate() const;
};

/// Bhattacharyya parameter of the BSC followed by BPSK-AWGN, by Gauss-Hermite
/// quadrature of exp(-1/(2 sigma2)) E_r[sqrt(a + 2b cosh(2r/sigma2))], r ~ N(0, sigma2).
/// The order is doubled until two successive results agree to rel_tol.
double cascade_bhattacharyya_init(const CascadeChannel& ch, std::size_t quad_order = 64, double rel_tol = 1e-8);

/// Average of Z over the information set chosen on the untagged AWGN channel,
/// with the recursion started from the cascaded channel's parameter.
BoundReport ber_upper_bound(std::size_t n, std::size_t k_o, std::size_t n_e, double sigma2);

} // namespace ftag::bounds
