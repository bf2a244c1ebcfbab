#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "cblasso/fourier.hpp"
#include "cblasso/rng.hpp"

namespace cblasso {

/// tau_n = 2 pi sqrt(fc (fc+1)) / sqrt(3); Var(X'(t)) = tau_n^2 n for the
/// stationary noise process X.
inline double tau_n(int fc) {
    return 2.0 * std::numbers::pi * std::sqrt(double(fc) * double(fc + 1)) / std::sqrt(3.0);
}

/// Tail bound on ||F_n^*(eps)||_inf: n exp(-u^2 / (4 n sigma0^2)).
inline double gaussian_sup_bound(double u, int n, double sigma0) {
    if (u <= 0.0) throw std::invalid_argument("gaussian_sup_bound: u must be positive");
    return double(n) * std::exp(-u * u / (4.0 * double(n) * sigma0 * sigma0));
}

enum class SupBoundVariant { simple, sharp };

/// Tail bound on ||F_n^*(eps)||_inf / (sqrt(n) ||eps||_2):
///   simple: (2 sqrt2 + 2n/sqrt3) (1 - u^2/2)^n, valid for 0 < u <= 1
///   sharp:  (2 sqrt2/sqrt(2-u^2) + 2 tau_n/(pi (2-u^2))) (1 - u^2/2)^n,
///           valid for 0 < u < sqrt2.
inline double normalized_sup_bound(double u, int fc, SupBoundVariant variant) {
    const int n = 2 * fc + 1;
    const double base = std::pow(1.0 - u * u / 2.0, n);
    if (variant == SupBoundVariant::simple) {
        if (u <= 0.0 || u > 1.0) throw std::invalid_argument("normalized_sup_bound: need 0 < u <= 1");
        return (2.0 * std::sqrt(2.0) + 2.0 * double(n) / std::sqrt(3.0)) * base;
    }
    if (u <= 0.0 || u >= std::sqrt(2.0))
        throw std::invalid_argument("normalized_sup_bound: need 0 < u < sqrt(2)");
    const double d = 2.0 - u * u;
    return (2.0 * std::sqrt(2.0) / std::sqrt(d) +
            2.0 * tau_n(fc) / (std::numbers::pi * d)) * base;
}

/// Joint density of (X(t), X'(t)) for the normalized process, and the
/// marginal density of X(t); both vanish outside their supports.
inline double process_joint_density(double a, double b, int fc) {
    const int n = 2 * fc + 1;
    if (n < 2) throw std::invalid_argument("process_joint_density: n >= 2 required");
    const double tn = tau_n(fc);
    const double r = 1.0 - a * a - (b / tn) * (b / tn);
    if (r <= 0.0) return 0.0;
    return double(n - 1) / (tn * std::numbers::pi) * std::pow(r, n - 2);
}

inline double process_marginal_density(double a, int fc) {
    const int n = 2 * fc + 1;
    if (std::abs(a) >= 1.0) return 0.0;
    const double logc = std::lgamma(double(n)) - 0.5 * std::log(std::numbers::pi) -
                        std::lgamma(double(n) - 0.5);
    return std::exp(logc + (double(n) - 1.5) * std::log1p(-a * a));
}

/// Rice-method bounds for the normalized process at level u/sqrt(2):
/// expected up-crossing count and the stay-above probability.
struct CrossingBounds {
    double upcrossing;
    double stay_above;
};

inline CrossingBounds crossing_bounds(double u, int fc) {
    if (u <= 0.0 || u >= std::sqrt(2.0))
        throw std::invalid_argument("crossing_bounds: need 0 < u < sqrt(2)");
    const int n = 2 * fc + 1;
    const double base = 1.0 - u * u / 2.0;
    return {tau_n(fc) / (2.0 * std::numbers::pi) * std::pow(base, n - 1),
            2.0 * std::pow(base, double(n) - 0.5)};
}

/// Chi-square concentration thresholds for ||eps||_2^2 (each side is
/// violated with probability at most exp(-x)).
struct Chi2Bounds {
    double lower_threshold;
    double upper_threshold;
};

inline Chi2Bounds chi2_bounds(int n, double sigma0, double x) {
    if (x < 0.0) throw std::invalid_argument("chi2_bounds: x must be >= 0");
    const double s2 = 2.0 * double(n) * sigma0 * sigma0;
    return {s2 * (1.0 - std::sqrt(2.0 * x / double(n))),
            s2 * (1.0 + x / double(n) + std::sqrt(2.0 * x / double(n)))};
}

/// Checkable noise-estimation conditions: derived quantities, condition
/// flags, and the guaranteed failure-probability bound.
struct Prop4Check {
    double lambda = 0.0;
    double eta = 0.0;
    double alpha = 0.0;
    int n = 0;
    double mu0_tv = 0.0;
    double sigma0 = 0.0;

    double R = 0.0;            // sqrt(2 log(n/alpha) / n)
    double sigma_lower = 0.0;  // sqrt2 sigma0 (1 - sqrt(-2 log alpha / n))^{1/2}
    bool cond_lambda = false;  // lambda >= R / (1 - eta)
    bool cond_snr = false;     // lambda ||mu0||_TV / sigma_lower <= 2(sqrt(1+(eta/2)^2)-1)
    double prob_bound = 0.0;   // alpha (2 sqrt2 / n + (2 sqrt3 + 3)/3)
};

inline Prop4Check prop4_check(double lambda, double eta, double alpha, int n, double mu0_tv,
                              double sigma0) {
    if (eta <= 0.0 || eta >= 1.0 || alpha <= 0.0 || alpha >= 1.0)
        throw std::invalid_argument("prop4_check: eta, alpha must be in (0, 1)");
    if (-2.0 * std::log(alpha) / double(n) >= 1.0)
        throw std::invalid_argument("prop4_check: n too small, sigma_lower undefined");
    Prop4Check chk;
    chk.lambda = lambda;
    chk.eta = eta;
    chk.alpha = alpha;
    chk.n = n;
    chk.mu0_tv = mu0_tv;
    chk.sigma0 = sigma0;
    chk.R = std::sqrt(2.0 * std::log(double(n) / alpha) / double(n));
    chk.sigma_lower =
        std::sqrt(2.0) * sigma0 * std::sqrt(1.0 - std::sqrt(-2.0 * std::log(alpha) / double(n)));
    chk.cond_lambda = lambda >= chk.R / (1.0 - eta);
    chk.cond_snr =
        lambda * mu0_tv / chk.sigma_lower <= 2.0 * (std::sqrt(1.0 + (eta / 2.0) * (eta / 2.0)) - 1.0);
    chk.prob_bound =
        alpha * (2.0 * std::sqrt(2.0) / double(n) + (2.0 * std::sqrt(3.0) + 3.0) / 3.0);
    return chk;
}

/// Complex Gaussian noise: real and imaginary parts i.i.d. N(0, sigma0^2)
/// per coordinate, drawn in fixed (k ascending, re then im) order.
inline Eigen::VectorXcd sample_noise(const FourierOperator& op, double sigma0, Rng& rng) {
    if (sigma0 <= 0.0) throw std::invalid_argument("sample_noise: sigma0 must be positive");
    Eigen::VectorXcd eps(op.n());
    for (int i = 0; i < op.n(); ++i) {
        const double re = sigma0 * rng.gaussian();
        const double im = sigma0 * rng.gaussian();
        eps(i) = Complex(re, im);
    }
    return eps;
}

/// Expected value of sqrt(n) sigma_hat / (sqrt2 sigma0) for chi noise,
/// Gamma(n + 1/2) / (sqrt(n) Gamma(n)), via log-gamma.
inline double sigma_bias_factor(int n) {
    return std::exp(std::lgamma(double(n) + 0.5) - std::lgamma(double(n)) -
                    0.5 * std::log(double(n)));
}

}  // namespace cblasso
