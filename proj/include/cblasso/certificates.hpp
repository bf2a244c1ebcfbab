#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "cblasso/fourier.hpp"
#include "cblasso/trigpoly.hpp"

namespace cblasso {

enum class CertKind { q1, q01, q0 };

inline const char* cert_kind_name(CertKind k) {
    switch (k) {
        case CertKind::q1: return "q1";
        case CertKind::q01: return "q01";
        case CertKind::q0: return "q0";
    }
    return "?";
}

struct CertificateConfig {
    double min_separation = -1.0;  // < 0: default 2/n; 0 disables the check
    double near_c1 = 0.5;          // near-region radius c1/fc

    double resolved_separation(const FourierOperator& op) const {
        return min_separation < 0.0 ? 2.0 / double(op.n()) : min_separation;
    }
};

struct Certificate {
    TrigPoly poly;
    CertKind kind = CertKind::q1;
    std::vector<TorusPoint> nodes;
    Eigen::VectorXcd targets;
    int fc = 0;
};

namespace detail {

/// Coefficients of the cubed Fejer kernel of degree 3m <= fc,
/// normalized to K(0) = 1. Real, even, nonnegative kernel.
inline TrigPoly fejer_cubed_kernel(int fc) {
    if (fc < 3) throw std::invalid_argument("certificate kernel needs fc >= 3");
    const int m = fc / 3;
    std::vector<double> g(2 * m + 1);
    for (int k = -m; k <= m; ++k) g[k + m] = 1.0 - std::abs(k) / double(m + 1);
    auto convolve = [](const std::vector<double>& a, const std::vector<double>& b) {
        std::vector<double> out(a.size() + b.size() - 1, 0.0);
        for (std::size_t i = 0; i < a.size(); ++i)
            for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
        return out;
    };
    std::vector<double> c = convolve(convolve(g, g), g);
    double total = 0.0;
    for (double v : c) total += v;
    Eigen::VectorXcd coeffs(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) coeffs(i) = c[i] / total;
    return TrigPoly(3 * m, coeffs);
}

inline void check_nodes(const FourierOperator& op, const std::vector<TorusPoint>& nodes,
                        const CertificateConfig& cfg) {
    const double sep = cfg.resolved_separation(op);
    for (std::size_t i = 0; i < nodes.size(); ++i)
        for (std::size_t j = i + 1; j < nodes.size(); ++j)
            if (torus_distance(nodes[i], nodes[j]) < sep)
                throw std::invalid_argument("certificate nodes closer than the minimum separation");
}

/// Solve the 2s x 2s kernel system for q = sum_j alpha_j K(.-t_j) +
/// beta_j K'(.-t_j) under value/derivative conditions, and assemble the
/// coefficient vector. value_targets = (q(t_i)), deriv_targets = (q'(t_i)).
inline TrigPoly kernel_interpolant(const FourierOperator& op, const std::vector<TorusPoint>& nodes,
                                   const Eigen::VectorXcd& value_targets,
                                   const Eigen::VectorXcd& deriv_targets) {
    const int s = int(nodes.size());
    const TrigPoly K = fejer_cubed_kernel(op.fc);
    const TrigPoly K1 = K.derivative();
    const TrigPoly K2 = K1.derivative();

    Eigen::MatrixXd A(2 * s, 2 * s);
    for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j) {
            const double d = nodes[i].t - nodes[j].t;
            A(i, j) = K.eval(d).real();
            A(i, s + j) = K1.eval(d).real();
            A(s + i, j) = K1.eval(d).real();
            A(s + i, s + j) = K2.eval(d).real();
        }
    Eigen::VectorXcd rhs(2 * s);
    rhs.head(s) = value_targets;
    rhs.tail(s) = deriv_targets;

    Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
    Eigen::VectorXcd sol(2 * s);
    sol.real() = lu.solve(rhs.real());
    sol.imag() = lu.solve(rhs.imag());
    if (!sol.allFinite()) throw std::runtime_error("singular certificate interpolation system");

    const int d = K.degree();
    Eigen::VectorXcd coeffs = Eigen::VectorXcd::Zero(2 * d + 1);
    for (int j = 0; j < s; ++j) {
        const Complex alpha = sol(j), beta = sol(s + j);
        for (int k = -d; k <= d; ++k) {
            const Complex phase = std::polar(1.0, -kTwoPi * k * nodes[j].t);
            coeffs(k + d) += (alpha + Complex(0.0, kTwoPi * k) * beta) * K.coeff(k) * phase;
        }
    }
    TrigPoly q(d, std::move(coeffs));

    // reject ill-conditioned builds: interpolation must hold to 1e-8
    double resid = 0.0;
    for (int i = 0; i < s; ++i) {
        resid = std::max(resid, std::abs(q.eval(nodes[i].t) - value_targets(i)));
        resid = std::max(resid, std::abs(q.derivative().eval(nodes[i].t) - deriv_targets(i)) /
                                    double(op.n()));
    }
    if (resid > 1e-8) throw std::runtime_error("certificate interpolation system too ill-conditioned");
    return q;
}

}  // namespace detail

/// Interpolating certificate: q(t_j) = v_j, q'(t_j) = 0. Covers q1 (all
/// |v_j| = 1) and q01 (one v_j = 1, the rest 0).
inline Certificate build_interpolant(const FourierOperator& op, const std::vector<TorusPoint>& nodes,
                                     const Eigen::VectorXcd& targets,
                                     const CertificateConfig& cfg = {}) {
    if (nodes.empty() || long(nodes.size()) != targets.size())
        throw std::invalid_argument("build_interpolant: nodes/targets mismatch");
    for (long i = 0; i < targets.size(); ++i)
        if (std::abs(targets(i)) > 1.0 + 1e-12)
            throw std::invalid_argument("build_interpolant: |v_j| must be <= 1");
    detail::check_nodes(op, nodes, cfg);
    Certificate cert;
    cert.poly = detail::kernel_interpolant(op, nodes, targets,
                                           Eigen::VectorXcd::Zero(long(nodes.size())));
    bool all_unit = true, one_hot = true;
    for (long i = 0; i < targets.size(); ++i) {
        if (std::abs(std::abs(targets(i)) - 1.0) > 1e-9) all_unit = false;
        if (std::abs(targets(i)) > 1e-9 && std::abs(targets(i) - Complex(1.0, 0.0)) > 1e-9)
            one_hot = false;
    }
    cert.kind = all_unit ? CertKind::q1 : (one_hot ? CertKind::q01 : CertKind::q1);
    cert.nodes = nodes;
    cert.targets = targets;
    cert.fc = op.fc;
    return cert;
}

/// Derivative-interpolating certificate: q0(t_j) = 0, q0'(t_j) = v_j.
inline Certificate build_derivative_interpolant(const FourierOperator& op,
                                                const std::vector<TorusPoint>& nodes,
                                                const Eigen::VectorXcd& targets,
                                                const CertificateConfig& cfg = {}) {
    if (nodes.empty() || long(nodes.size()) != targets.size())
        throw std::invalid_argument("build_derivative_interpolant: nodes/targets mismatch");
    detail::check_nodes(op, nodes, cfg);
    Certificate cert;
    cert.poly = detail::kernel_interpolant(op, nodes,
                                           Eigen::VectorXcd::Zero(long(nodes.size())), targets);
    cert.kind = CertKind::q0;
    cert.nodes = nodes;
    cert.targets = targets;
    cert.fc = op.fc;
    return cert;
}

struct CertReport {
    double interp_residual = 0.0;  // max deviation from the interpolation conditions
    double sup_modulus = 0.0;      // grid sup of |q|
    double far_sup = 0.0;          // sup of |q| over the far set
    double far_margin = 0.0;       // 1 - far_sup (q1/q01); n * far_sup reported for q0
    double near_kappa = 0.0;       // fitted near-region constant
    double l1 = 0.0;
    bool pass_interp = false;
    bool pass_far = false;
    bool pass_near = false;
};

/// Dense-grid verification: interpolation residuals, far-set supremum,
/// fitted near-region quadratic constants, L1 norm.
inline CertReport verify_certificate(const Certificate& cert, std::size_t grid = 16384) {
    const FourierOperator op(cert.fc);
    const double n = double(op.n());
    const double near_radius = 0.5 / double(cert.fc);
    const TrigPoly& q = cert.poly;
    const TrigPoly dq = q.derivative();
    const std::size_t m = detail::next_pow2(std::max<std::size_t>(grid, 4 * (2 * q.degree() + 1)));
    const auto vals = eval_grid(q, m);

    CertReport rep;
    const int s = int(cert.nodes.size());
    for (int i = 0; i < s; ++i) {
        const double t = cert.nodes[i].t;
        if (cert.kind == CertKind::q0) {
            rep.interp_residual = std::max(rep.interp_residual, std::abs(q.eval(t)));
            rep.interp_residual =
                std::max(rep.interp_residual, std::abs(dq.eval(t) - cert.targets(i)) / n);
        } else {
            rep.interp_residual = std::max(rep.interp_residual, std::abs(q.eval(t) - cert.targets(i)));
        }
    }
    rep.pass_interp = rep.interp_residual <= 1e-8;

    double near_kappa = 1e300;   // q1/q01: min of 2(1-|q|)/(n d)^2... fitted below
    double q0_cn = 0.0;          // q0: max of 2|q0 - v_j (t - t_j)| / (n d^2)
    for (std::size_t j = 0; j < m; ++j) {
        const double t = double(j) / double(m);
        const double av = std::abs(vals[j]);
        rep.sup_modulus = std::max(rep.sup_modulus, av);
        int nearest = -1;
        double dmin = 1e300;
        for (int i = 0; i < s; ++i) {
            const double d = torus_distance(TorusPoint(t), cert.nodes[i]);
            if (d < dmin) {
                dmin = d;
                nearest = i;
            }
        }
        if (dmin > near_radius) {
            rep.far_sup = std::max(rep.far_sup, av);
        } else if (cert.kind == CertKind::q0) {
            const double tau = torus_diff(t, cert.nodes[nearest].t);
            const double dev = std::abs(vals[j] - cert.targets(nearest) * tau);
            if (dmin > 1e-12) q0_cn = std::max(q0_cn, 2.0 * dev / (n * dmin * dmin));
        } else if (std::abs(cert.targets(nearest)) > 0.5) {
            // quadratic dip around a unit-target node
            if (dmin > 0.1 / n)
                near_kappa = std::min(near_kappa, 2.0 * (1.0 - av) / (n * n * dmin * dmin));
        }
    }
    if (cert.kind == CertKind::q0) {
        rep.near_kappa = q0_cn;
        rep.far_margin = n * rep.far_sup;  // fitted C_{F,0}
        rep.pass_far = std::isfinite(rep.far_margin);
        rep.pass_near = std::isfinite(q0_cn);
    } else {
        rep.near_kappa = (near_kappa == 1e300) ? 0.0 : near_kappa;
        rep.far_margin = 1.0 - rep.far_sup;
        rep.pass_far = rep.far_margin > 0.0;
        rep.pass_near = rep.near_kappa > 0.0;
    }
    rep.l1 = l1_norm(q);
    return rep;
}

/// Bregman divergence of the TV norm between mu_hat and mu0 for a
/// phase-interpolating certificate q:
///   ||mu_hat||_TV - ||mu0||_TV - Re int conj(q) d(mu_hat - mu0).
inline double bregman_divergence(const FourierOperator& op, const AtomicMeasure& mu_hat,
                                 const AtomicMeasure& mu0, const Certificate& q) {
    (void)op;
    for (const auto& atom : mu0.atoms()) {
        const Complex phase = atom.amplitude / std::abs(atom.amplitude);
        if (std::abs(q.poly.eval(atom.position.t) - phase) > 1e-6)
            throw std::invalid_argument("bregman_divergence: certificate not phase-matched to mu0");
    }
    auto pairing = [&q](const AtomicMeasure& mu) {
        double s = 0.0;
        for (const auto& atom : mu.atoms())
            s += (std::conj(q.poly.eval(atom.position.t)) * atom.amplitude).real();
        return s;
    };
    return tv_norm(mu_hat) - tv_norm(mu0) - (pairing(mu_hat) - pairing(mu0));
}

}  // namespace cblasso
