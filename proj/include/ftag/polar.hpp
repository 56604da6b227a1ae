#pragma once

#include "ftag/bitvec.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <string>
#include <vector>

/// Polar codes over the natural-order Arikan kernel G = F^{(x)n}, F = [[1,0],[1,1]].
///
/// All indices are zero based. Frozen positions carry caller-supplied values,
/// which is what lets the authentication layer hide a tag in them.
namespace ftag::polar {

enum class Construction { gaussian_approx, bhattacharyya };

std::string to_string(Construction c);
Construction construction_from_string(const std::string& s);

/// A constructed code. Immutable once built.
struct PolarSpec {
    std::size_t n = 0;
    std::size_t k = 0;
    std::vector<std::size_t> info_set;   // ascending
    std::vector<std::size_t> frozen_set; // ascending
    /// GA mean LLR (larger is better) or Bhattacharyya Z (smaller is better).
    std::vector<double> reliabilities;
    Construction method = Construction::gaussian_approx;
    /// sigma^2 for GA, initial Z for Bhattacharyya.
    double design_param = 0.0;
    /// frozen_mask[i] == 1 iff i is frozen.
    BitVec frozen_mask;

    std::size_t n_frozen() const { return n - k; }
};

bool is_power_of_two(std::size_t n);

/// Mean LLR of each bit channel under the Gaussian approximation, seeded with 2/sigma2.
std::vector<double> ga_means(std::size_t n, double sigma2);

/// Z-parameters via Z- = 2Z - Z^2, Z+ = Z^2.
std::vector<double> bhattacharyya_params(std::size_t n, double z_init);

/// Chung's two-piece approximation of phi(x) = 1 - E[tanh(L/2)], L ~ N(x, 2x).
double ga_phi(double x);
double ga_phi_inverse(double y);

PolarSpec construct_ga(std::size_t n, std::size_t k, double design_sigma2);
PolarSpec construct_bhattacharyya(std::size_t n, std::size_t k, double z_init);

/// Bit channels sorted best first, ties to the lower index.
std::vector<std::size_t> reliability_order(const PolarSpec& spec);

/// u * G over GF(2) for any power-of-two length.
BitVec polar_transform(std::span<const std::uint8_t> u);

BitVec encode(const PolarSpec& spec, std::span<const std::uint8_t> u);

/// Scatter info bits onto the information set and frozen values onto the frozen set.
BitVec assemble_input(const PolarSpec& spec, std::span<const std::uint8_t> info_bits,
                      std::span<const std::uint8_t> frozen_vals);

/// Channel LLRs, positive favouring 0, saturated at +-cap.
class SoftObservation {
public:
    static constexpr double cap = 40.0;

    SoftObservation() = default;
    explicit SoftObservation(std::vector<double> llrs);

    std::span<const double> llrs() const { return llrs_; }
    std::size_t size() const { return llrs_.size(); }

private:
    std::vector<double> llrs_;
};

enum class CheckNodeRule { exact, min_sum };

struct DecoderOptions {
    CheckNodeRule check_node = CheckNodeRule::exact;
};

struct DecodeResult {
    BitVec u_hat;
    BitVec info_bits;
    /// Accumulated path metric, -log of the path posterior up to a constant.
    double path_metric = 0.0;
};

DecodeResult decode_sc(const PolarSpec& spec, const SoftObservation& obs,
                       std::span<const std::uint8_t> frozen_vals, const DecoderOptions& opts = {});

/// Path-metric SCL without CRC. Bit-exact with decode_sc when list_len == 1.
DecodeResult decode_scl(const PolarSpec& spec, const SoftObservation& obs,
                        std::span<const std::uint8_t> frozen_vals, std::size_t list_len,
                        const DecoderOptions& opts = {});

/// Check-node and variable-node updates, exposed for tests.
double check_node(double a, double b, CheckNodeRule rule = CheckNodeRule::exact);
double variable_node(double a, double b, std::uint8_t partial);

/// Rows of G restricted to the information or frozen set.
class GeneratorView {
public:
    explicit GeneratorView(const PolarSpec& spec);

    const PolarSpec& spec() const { return spec_; }
    std::vector<BitVec> rows(std::span<const std::size_t> row_set) const;
    /// 0/1 real embedding of the selected rows.
    Eigen::MatrixXd matrix(std::span<const std::size_t> row_set) const;
    Eigen::MatrixXd info_matrix() const { return matrix(spec_.info_set); }
    Eigen::MatrixXd frozen_matrix() const { return matrix(spec_.frozen_set); }

private:
    PolarSpec spec_;
};

struct PseudoInverse {
    /// n x (n - k) right inverse of G_F.
    Eigen::MatrixXd m_r;
    /// (G_F G_F^T)^{-1}.
    Eigen::MatrixXd gram_inverse;
    double residual = 0.0;
    double condition_estimate = 0.0;
    bool ill_conditioned = false;
};

/// M_R = G_F^T (G_F G_F^T)^{-1}; throws if the identity check fails.
PseudoInverse frozen_pseudo_inverse(const GeneratorView& gen);

/// One row of a construction golden file: "n k method design_param : i0 i1 ...".
struct GoldenConstruction {
    std::size_t n = 0;
    std::size_t k = 0;
    Construction method = Construction::gaussian_approx;
    double design_param = 0.0;
    std::vector<std::size_t> info_set;
};

std::string format_golden_row(const PolarSpec& spec);
GoldenConstruction parse_golden_row(const std::string& line);
PolarSpec construct(const GoldenConstruction& row);

} // namespace ftag::polar
