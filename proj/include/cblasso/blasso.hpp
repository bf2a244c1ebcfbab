#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "cblasso/cblasso.hpp"

namespace cblasso {

struct BLassoResult {
    Eigen::VectorXcd amplitudes;
    double sigma_heuristic = 0.0;
    std::vector<TorusPoint> support;
    double residual_norm = 0.0;
    bool ridged = false;
};

/// One shrunken least-squares step on a fixed support with the noise
/// level held fixed: a = X^+ y - n lambda sigma (X*X)^{-1} zeta.
/// Shares the amplitude-step code path of the alternating minimization.
inline BLassoResult blasso_amplitudes(const FourierOperator& op, const Eigen::VectorXcd& y,
                                      const std::vector<TorusPoint>& support,
                                      const Eigen::VectorXcd& zeta, double lambda_blasso,
                                      double sigma_fixed) {
    if (support.empty()) throw std::invalid_argument("blasso_amplitudes: empty support");
    if (long(support.size()) > op.n())
        throw std::invalid_argument("blasso_amplitudes: support larger than n");
    detail::AmplitudeStep step(op, y, support, zeta);
    BLassoResult res;
    res.support = support;
    res.ridged = step.ridged;
    res.amplitudes = step.amplitudes(double(op.n()) * lambda_blasso * sigma_fixed);
    res.residual_norm = (y - step.X * res.amplitudes).norm();
    return res;
}

/// lambda_max for the BLasso convention, ||F_n^*(y)||_inf / n.
inline double blasso_lambda_max(const FourierOperator& op, const Eigen::VectorXcd& y) {
    return sup_modulus(adjoint_polynomial(op, y)).value / double(op.n());
}

/// Residual-based noise heuristic ||y - F_n(mu)||_2 / sqrt(n - s).
inline double blasso_sigma_heuristic(const FourierOperator& op, const Eigen::VectorXcd& y,
                                     const AtomicMeasure& mu_hat, int s_hat) {
    if (s_hat >= op.n()) throw std::invalid_argument("blasso_sigma_heuristic: s_hat >= n");
    return (y - fourier_coefficients(op, mu_hat)).norm() / std::sqrt(double(op.n() - s_hat));
}

}  // namespace cblasso
