#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cblasso/fourier.hpp"
#include "cblasso/sdp.hpp"
#include "cblasso/trigpoly.hpp"

namespace cblasso {

struct CBLassoConfig {
    // exactly one of lambda / lambda_frac is used; lambda wins when set
    std::optional<double> lambda;
    std::optional<double> lambda_frac;  // fraction of lambda_max(y), in (0, 1]
    double tol_sigma = 1e-4;            // relative stopping on sigma iterates
    int max_alt_iters = 1000;
    double eps_support = 1e-4;
    bool compute_lambda_min = false;
    // Amplitude half-step shrink scaling. Stationarity of the fixed-support
    // problem gives a = X^+ y - n lambda sigma (X*X)^{-1} zeta (the default,
    // for which the primal-dual identities hold); the published update drops
    // the factor n, and that form is kept selectable because the reported
    // experiment figures (near-unbiased sigma_hat) are produced by it.
    bool paper_shrink = false;
    ConicConfig conic;

    double resolve_lambda(double lam_max) const {
        if (lambda && lambda_frac)
            throw std::invalid_argument("CBLassoConfig: set only one of lambda / lambda_frac");
        if (lambda) {
            if (*lambda <= 0.0) throw std::invalid_argument("lambda must be positive");
            return *lambda;
        }
        if (lambda_frac) {
            if (*lambda_frac <= 0.0 || *lambda_frac > 1.0)
                throw std::invalid_argument("lambda_frac must be in (0, 1]");
            return *lambda_frac * lam_max;
        }
        throw std::invalid_argument("CBLassoConfig: one of lambda / lambda_frac required");
    }
};

/// lambda_max(y) = ||F_n^*(y)||_inf / (sqrt(n) ||y||_2).
inline double lambda_max(const FourierOperator& op, const Eigen::VectorXcd& y) {
    if (y.norm() == 0.0) throw std::invalid_argument("lambda_max: zero observation vector");
    return sup_modulus(adjoint_polynomial(op, y)).value / (std::sqrt(double(op.n())) * y.norm());
}

struct DualSolution {
    Eigen::VectorXcd c_hat;
    TrigPoly p_hat;
    double lambda = 0.0;
    double objective = 0.0;  // lambda <y, c>
    double sup_p = 0.0;      // ||p_hat||_inf
    double ball_level = 0.0; // n lambda^2 ||c||^2
    ConicSolution conic;
};

/// Solve the dual problem: maximize lambda <y, c> over the set
/// ||F_n^*(c)||_inf <= 1, n lambda^2 ||c||^2 <= 1.
inline DualSolution solve_dual(const FourierOperator& op, const Eigen::VectorXcd& y,
                               double lambda, const CBLassoConfig& cfg = {}) {
    if (lambda <= 0.0) throw std::invalid_argument("solve_dual: lambda must be positive");
    if (y.norm() == 0.0) throw std::invalid_argument("solve_dual: y must be nonzero");
    const double n = double(op.n());
    ConicProblem prob;
    prob.b = lambda * y;
    prob.radius = 1.0 / (lambda * std::sqrt(n));
    DualSolution d;
    d.conic = solve_conic(prob, cfg.conic);
    d.c_hat = d.conic.c;
    d.p_hat = adjoint_polynomial(op, d.c_hat);
    d.lambda = lambda;
    d.objective = d.conic.objective;
    d.sup_p = sup_modulus(d.p_hat).value;
    d.ball_level = n * lambda * lambda * d.c_hat.squaredNorm();
    return d;
}

/// Beurling minimal extrapolation dual: same conic structure without the
/// ball constraint. Returns the solution and lambda_min = 1/(||c|| sqrt(n)).
inline std::pair<ConicSolution, double> solve_bme(const FourierOperator& op,
                                                  const Eigen::VectorXcd& y,
                                                  const CBLassoConfig& cfg = {}) {
    if (y.norm() == 0.0) throw std::invalid_argument("solve_bme: y must be nonzero");
    ConicProblem prob;
    prob.b = y;
    ConicSolution s = solve_conic(prob, cfg.conic);
    const double lambda_min = 1.0 / (s.c.norm() * std::sqrt(double(op.n())));
    return {s, lambda_min};
}

/// Support extraction from the dual polynomial. Constant-modulus |p|^2 is
/// flagged in the returned RootSet rather than yielding spurious roots.
inline RootSet extract_support(const DualSolution& dual, const CBLassoConfig& cfg = {}) {
    return unit_modulus_roots(dual.p_hat, cfg.eps_support);
}

struct AltMinResult {
    Eigen::VectorXcd amplitudes;
    double sigma_hat = 0.0;
    int iterations = 0;
    bool converged = true;
    bool ridged = false;   // X*X ill-conditioned, ridge added
};

namespace detail {

/// Design matrix X_{k,j} = exp(-2 pi i k t_j), rows k = -fc..fc.
inline Eigen::MatrixXcd design_matrix(const FourierOperator& op, const std::vector<TorusPoint>& pts) {
    Eigen::MatrixXcd X(op.n(), pts.size());
    for (std::size_t j = 0; j < pts.size(); ++j)
        for (int k = -op.fc; k <= op.fc; ++k)
            X(k + op.fc, j) = std::polar(1.0, -kTwoPi * k * pts[j].t);
    return X;
}

struct AmplitudeStep {
    Eigen::MatrixXcd X;
    Eigen::VectorXcd ls;      // X^+ y
    Eigen::VectorXcd shrink;  // (X*X)^{-1} zeta
    bool ridged = false;

    AmplitudeStep(const FourierOperator& op, const Eigen::VectorXcd& y,
                  const std::vector<TorusPoint>& pts, const Eigen::VectorXcd& zeta) {
        X = design_matrix(op, pts);
        Eigen::MatrixXcd G = X.adjoint() * X;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(G, Eigen::EigenvaluesOnly);
        const double emin = es.eigenvalues()(0), emax = es.eigenvalues()(es.eigenvalues().size() - 1);
        if (emin <= 0.0 || emax / emin > 1e12) {
            G += (1e-10 * G.real().trace() / double(G.rows())) *
                 Eigen::MatrixXcd::Identity(G.rows(), G.cols());
            ridged = true;
        }
        Eigen::LDLT<Eigen::MatrixXcd> ldlt(G);
        ls = ldlt.solve(X.adjoint() * y);
        shrink = ldlt.solve(zeta);
    }

    /// One concomitant lasso half-step on the fixed support,
    /// a = X^+ y - n lambda sigma (X*X)^{-1} zeta.
    Eigen::VectorXcd amplitudes(double n_lambda_sigma) const { return ls - n_lambda_sigma * shrink; }
};

}  // namespace detail

/// Alternate between the closed-form amplitude update and the residual
/// scale update sigma = ||y - X a||_2 / sqrt(n), from sigma = ||y||/sqrt(n).
inline AltMinResult alternating_minimization(const FourierOperator& op, const Eigen::VectorXcd& y,
                                             const std::vector<TorusPoint>& support, double lambda,
                                             const Eigen::VectorXcd& zeta,
                                             const CBLassoConfig& cfg = {}) {
    if (support.empty()) throw std::invalid_argument("alternating_minimization: empty support");
    if (long(support.size()) > op.n())
        throw std::invalid_argument("alternating_minimization: support larger than n");
    const double n = double(op.n());
    const double shrink_scale = cfg.paper_shrink ? 1.0 : n;
    detail::AmplitudeStep step(op, y, support, zeta);

    // sigma |-> ||r0 + s lambda sigma w||/sqrt(n) with r0, w fixed
    const Eigen::VectorXcd r0 = y - step.X * step.ls;
    const Eigen::VectorXcd w = step.X * step.shrink;

    AltMinResult res;
    res.ridged = step.ridged;
    double sigma = y.norm() / std::sqrt(n);
    const double sigma_floor = 1e-13 * (sigma + 1.0);
    res.converged = false;
    for (res.iterations = 1; res.iterations <= cfg.max_alt_iters; ++res.iterations) {
        const double sigma_new = (r0 + (shrink_scale * lambda * sigma) * w).norm() / std::sqrt(n);
        const bool done = std::abs(sigma_new - sigma) <= cfg.tol_sigma * std::max(sigma_new, 1e-300);
        sigma = sigma_new;
        if (done) {
            res.converged = true;
            break;
        }
        if (sigma <= sigma_floor) {  // overfitting collapse, fixed point is 0
            sigma = 0.0;
            res.converged = true;
            break;
        }
    }
    // closed-form refinement: the fixed point of sigma = ||r0 + s lambda
    // sigma w|| / sqrt(n) solves A s^2 + B s + C = 0 with the coefficients
    // below; when a stable nonnegative root exists it is exact, so the
    // residual identity sigma = ||y - X a||/sqrt(n) holds to machine
    // precision rather than to the iteration tolerance
    {
        const double s = shrink_scale * lambda;
        const double A = n - s * s * w.squaredNorm();
        const double B = -2.0 * s * (r0.adjoint() * w).real()(0);
        const double C = -r0.squaredNorm();
        const double disc = B * B - 4.0 * A * C;
        if (A > 1e-12 * n && disc >= 0.0) {
            const double root = (-B + std::sqrt(disc)) / (2.0 * A);
            if (root >= 0.0) sigma = root;
        }
        if (sigma <= sigma_floor) sigma = 0.0;
    }
    res.sigma_hat = sigma;
    res.amplitudes = step.amplitudes(shrink_scale * lambda * sigma);
    return res;
}

enum class Regime { interior, overfitting, null };

inline const char* regime_name(Regime r) {
    switch (r) {
        case Regime::interior: return "interior";
        case Regime::overfitting: return "overfitting";
        case Regime::null: return "null";
    }
    return "?";
}

struct CBLassoResult {
    AtomicMeasure mu_hat;
    double sigma_hat = 0.0;
    double lambda_used = 0.0;
    double lambda_hat = 0.0;  // lambda * sigma_hat
    double lambda_max = 0.0;
    std::optional<double> lambda_min;
    Regime regime = Regime::null;
    double kkt_residual = 0.0;
    int alt_iterations = 0;
    std::vector<double> support_residuals;
    bool constant_modulus = false;
    bool empty_support = false;
    bool ridged = false;
    std::optional<DualSolution> dual;
};

/// sup-norm KKT residual ||(1/n) F_n^*(y - F_n(mu)) - lambda_hat p_hat||_inf.
inline double kkt_residual(const FourierOperator& op, const Eigen::VectorXcd& y,
                           const AtomicMeasure& mu, double lambda_hat,
                           const Eigen::VectorXcd& c_hat) {
    const Eigen::VectorXcd resid = (y - fourier_coefficients(op, mu)) / double(op.n());
    return sup_modulus(adjoint_polynomial(op, Eigen::VectorXcd(resid - lambda_hat * c_hat))).value;
}

/// Full pipeline: regime gate on lambda_max, dual solve, root finding,
/// alternating amplitude/scale minimization.
inline CBLassoResult solve_pipeline(const FourierOperator& op, const Eigen::VectorXcd& y,
                                    const CBLassoConfig& cfg) {
    if (y.norm() == 0.0) throw std::invalid_argument("solve_pipeline: y must be nonzero");
    CBLassoResult out;
    const double n = double(op.n());
    out.lambda_max = lambda_max(op, y);
    const double lambda = cfg.resolve_lambda(out.lambda_max);
    out.lambda_used = lambda;

    if (cfg.compute_lambda_min) out.lambda_min = solve_bme(op, y, cfg).second;

    if (lambda > out.lambda_max) {
        out.regime = Regime::null;
        out.sigma_hat = y.norm() / std::sqrt(n);
        out.lambda_hat = lambda * out.sigma_hat;
        out.kkt_residual = 0.0;
        return out;
    }

    out.dual = solve_dual(op, y, lambda, cfg);
    RootSet roots = extract_support(*out.dual, cfg);
    out.constant_modulus = roots.constant_modulus;
    out.support_residuals = roots.residuals;

    if (roots.constant_modulus || roots.points.empty()) {
        // no usable unit-modulus set; report the zero measure and flag it
        out.empty_support = true;
        out.sigma_hat = y.norm() / std::sqrt(n);
        out.regime = (out.lambda_min && lambda <= *out.lambda_min) ? Regime::overfitting
                                                                   : Regime::interior;
        out.lambda_hat = lambda * out.sigma_hat;
        out.kkt_residual = kkt_residual(op, y, out.mu_hat, out.lambda_hat, out.dual->c_hat);
        return out;
    }

    Eigen::VectorXcd zeta(roots.points.size());
    for (std::size_t j = 0; j < roots.points.size(); ++j) {
        const Complex pv = out.dual->p_hat.eval(roots.points[j].t);
        zeta(j) = pv / std::abs(pv);
    }

    AltMinResult alt = alternating_minimization(op, y, roots.points, lambda, zeta, cfg);
    out.alt_iterations = alt.iterations;
    out.ridged = alt.ridged;
    out.sigma_hat = alt.sigma_hat;
    for (std::size_t j = 0; j < roots.points.size(); ++j)
        out.mu_hat.add(roots.points[j], alt.amplitudes(j));

    if (out.sigma_hat < 1e-10 || (out.lambda_min && lambda <= *out.lambda_min))
        out.regime = Regime::overfitting;
    else
        out.regime = Regime::interior;

    out.lambda_hat = lambda * out.sigma_hat;
    out.kkt_residual = kkt_residual(op, y, out.mu_hat, out.lambda_hat, out.dual->c_hat);
    return out;
}

}  // namespace cblasso
