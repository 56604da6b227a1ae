#include "ftag/numeric.hpp"

#include "ftag/bitvec.hpp"

#include <Eigen/Eigenvalues>
#include <boost/math/special_functions/erf.hpp>

#include <algorithm>
#include <numbers>

namespace ftag {

double q_function(double x)
{
    return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

double q_inverse(double p)
{
    if (!(p > 0.0 && p < 1.0))
        throw Error("q_inverse: probability must lie in (0, 1)");
    return std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

GaussHermiteRule gauss_hermite(std::size_t order)
{
    if (order == 0)
        throw Error("gauss_hermite: order must be positive");
    const auto n = static_cast<Eigen::Index>(order);
    // Golub-Welsch: nodes are the eigenvalues of the Jacobi matrix (zero
    // diagonal, off-diagonal sqrt(k/2)).
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd sub(std::max<Eigen::Index>(n - 1, 0));
    for (Eigen::Index k = 1; k < n; ++k)
        sub(k - 1) = std::sqrt(static_cast<double>(k) / 2.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw Error("gauss_hermite: eigen solve failed");

    // Eigenvector weights lose relative accuracy in the tails, so each node is
    // polished by Newton steps on the orthonormal Hermite recurrence and its
    // weight taken as 2 / psi_n'(x)^2.
    const double nd = static_cast<double>(order);
    auto evaluate = [&](double x, double& psi_n, double& dpsi_n) {
        double p1 = std::pow(std::numbers::pi, -0.25);
        double p2 = 0.0;
        for (std::size_t j = 1; j <= order; ++j) {
            const double p3 = p2;
            p2 = p1;
            const double jd = static_cast<double>(j);
            p1 = x * std::sqrt(2.0 / jd) * p2 - std::sqrt((jd - 1.0) / jd) * p3;
        }
        psi_n = p1;
        dpsi_n = std::sqrt(2.0 * nd) * p2;
    };
    GaussHermiteRule rule;
    rule.nodes.resize(order);
    rule.weights.resize(order);
    for (Eigen::Index k = 0; k < n; ++k) {
        double x = solver.eigenvalues()(k);
        double psi = 0.0;
        double dpsi = 1.0;
        for (int it = 0; it < 3; ++it) {
            evaluate(x, psi, dpsi);
            x -= psi / dpsi;
        }
        evaluate(x, psi, dpsi);
        rule.nodes[static_cast<std::size_t>(k)] = x;
        rule.weights[static_cast<std::size_t>(k)] = 2.0 / (dpsi * dpsi);
    }
    return rule;
}

} // namespace ftag
