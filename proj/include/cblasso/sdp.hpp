#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <stdexcept>

#ifdef CBLASSO_USE_LAPACK
#define LAPACK_COMPLEX_CUSTOM
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>
#endif

#include "cblasso/torus.hpp"

namespace cblasso {

namespace detail {

/// Hermitian eigendecomposition, eigenvalues ascending. Writes the
/// eigenvectors over A.
inline void herm_eig(Eigen::MatrixXcd& A, Eigen::VectorXd& ev) {
    const long n = A.rows();
    ev.resize(n);
#ifdef CBLASSO_USE_LAPACK
    const lapack_int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'L', lapack_int(n), A.data(),
                                           lapack_int(n), ev.data());
    if (info == 0) return;
    // fall through to Eigen on the rare zheevd failure
#endif
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(A);
    if (es.info() != Eigen::Success) throw std::runtime_error("herm_eig: eigendecomposition failed");
    ev = es.eigenvalues();
    A = es.eigenvectors();
}

}  // namespace detail

/// Nearest (Frobenius) positive semidefinite matrix: eigendecompose,
/// clamp negative eigenvalues to zero, reconstruct. Rebuilds from the
/// smaller spectral side.
inline Eigen::MatrixXcd psd_project(const Eigen::MatrixXcd& M) {
    Eigen::MatrixXcd U = M;
    Eigen::VectorXd ev;
    detail::herm_eig(U, ev);
    const long n = M.rows();
    long nneg = 0;
    while (nneg < n && ev(nneg) < 0.0) ++nneg;
    if (nneg == 0) return M;
    if (nneg <= n - nneg) {
        // subtract the negative part
        Eigen::MatrixXcd Un = U.leftCols(nneg);
        return M - Un * ev.head(nneg).asDiagonal() * Un.adjoint();
    }
    Eigen::MatrixXcd Up = U.rightCols(n - nneg);
    return Up * ev.tail(n - nneg).asDiagonal() * Up.adjoint();
}

/// Conic program of the dual CBLasso:
///   maximize Re<b, c>  over c in C^n, Lambda in C^{n x n} Hermitian,
///   s.t. [[Lambda, c], [c*, 1]] >= 0,
///        sum_i Lambda_{i, i+j-1} = delta_{j,1} for j in [n],
///        ||c||_2 <= radius  (radius = +inf allowed).
struct ConicProblem {
    Eigen::VectorXcd b;
    double radius = std::numeric_limits<double>::infinity();
};

struct ConicConfig {
    double tol = 1e-8;       // scaled by (1 + ||b||_2)
    int max_iters = 200000;
    double rho = 1.0;
    double over_relax = 1.6;
    double tol_psd = 1e-6;
    double tol_aff = 1e-6;
};

enum class ConicStatus { converged, max_iters, infeasible_detected };

struct ConicSolution {
    Eigen::VectorXcd c;
    Eigen::MatrixXcd gram;  // Lambda
    double objective = 0.0;
    double primal_residual = 0.0;
    double dual_residual = 0.0;
    int iterations = 0;
    ConicStatus status = ConicStatus::max_iters;
    // feasibility diagnostics on the returned point
    double min_eig = 0.0;
    double max_trace_violation = 0.0;
    double ball_violation = 0.0;
};

namespace detail {

/// Project the Lambda block of W onto the trace constraints
/// (closed form per diagonal), keep Hermitian structure.
inline void project_traces(Eigen::MatrixXcd& W, int n) {
    // main diagonal: real, sums to 1
    double dsum = 0.0;
    for (int i = 0; i < n; ++i) dsum += W(i, i).real();
    const double dshift = (dsum - 1.0) / double(n);
    for (int i = 0; i < n; ++i) W(i, i) = Complex(W(i, i).real() - dshift, 0.0);
    // superdiagonals sum to 0; mirror to subdiagonals by conjugation
    for (int off = 1; off < n; ++off) {
        const int len = n - off;
        Complex s(0.0, 0.0);
        for (int i = 0; i < len; ++i) s += W(i, i + off);
        const Complex shift = s / double(len);
        for (int i = 0; i < len; ++i) {
            W(i, i + off) -= shift;
            W(i + off, i) = std::conj(W(i, i + off));
        }
    }
}

}  // namespace detail

/// Operator-splitting (ADMM) solve of the conic program. Deterministic:
/// fixed iteration order, no randomization.
inline ConicSolution solve_conic(const ConicProblem& prob, const ConicConfig& cfg = {}) {
    const int n = int(prob.b.size());
    const int N = n + 1;
    const double bnorm = prob.b.norm();
    const double tol = cfg.tol * (1.0 + bnorm);
    double rho = cfg.rho;
    const double alpha = cfg.over_relax;

    Eigen::MatrixXcd z = Eigen::MatrixXcd::Zero(N, N);
    z(n, n) = 1.0;
    for (int i = 0; i < n; ++i) z(i, i) = 1.0 / double(n);
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(N, N);
    Eigen::MatrixXcd x = z, zr = z, zold = z;

    ConicSolution sol;
    double pres = 0.0, dres = 0.0;
    int it = 0;
    for (it = 1; it <= cfg.max_iters; ++it) {
        // x-update: affine + objective + ball projection on z - u
        x = z - u;
        detail::project_traces(x, n);
        Eigen::VectorXcd c = 0.5 * (x.col(n).head(n) + x.row(n).head(n).adjoint());
        c += prob.b / (2.0 * rho);
        if (std::isfinite(prob.radius)) {
            const double cn = c.norm();
            if (cn > prob.radius) c *= (prob.radius > 0.0 ? prob.radius / cn : 0.0);
        }
        x.col(n).head(n) = c;
        x.row(n).head(n) = c.adjoint();
        x(n, n) = 1.0;

        // z-update with over-relaxation
        zold = z;
        zr = alpha * x + (1.0 - alpha) * zold;
        z = psd_project(zr + u);
        u += zr - z;

        if (it % 10 == 0 || it == cfg.max_iters) {
            pres = (x - z).norm();
            dres = rho * (z - zold).norm();
            if (!std::isfinite(pres) || !std::isfinite(dres))
                throw std::runtime_error("solve_conic: NaN detected in iterates");
            if (std::max(pres, dres) <= tol) {
                sol.status = ConicStatus::converged;
                break;
            }
            // residual balancing, factor 2, rho in [1e-4, 1e4]
            if (it % 50 == 0) {
                if (pres > 10.0 * dres && rho < 1e4) {
                    rho *= 2.0;
                    u *= 0.5;
                } else if (dres > 10.0 * pres && rho > 1e-4) {
                    rho *= 0.5;
                    u *= 2.0;
                }
            }
        }
    }

    sol.iterations = std::min(it, cfg.max_iters);
    sol.primal_residual = pres;
    sol.dual_residual = dres;
    sol.c = 0.5 * (z.col(n).head(n) + z.row(n).head(n).adjoint());
    sol.gram = z.topLeftCorner(n, n);
    sol.objective = (prob.b.adjoint() * sol.c).real()(0);

    // feasibility diagnostics on the PSD iterate
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(z, Eigen::EigenvaluesOnly);
    sol.min_eig = es.eigenvalues()(0);
    double tv = std::abs(sol.gram.real().trace() - 1.0);
    for (int off = 1; off < n; ++off) {
        Complex s(0.0, 0.0);
        for (int i = 0; i < n - off; ++i) s += sol.gram(i, i + off);
        tv = std::max(tv, std::abs(s));
    }
    sol.max_trace_violation = tv;
    sol.ball_violation =
        std::isfinite(prob.radius) ? std::max(0.0, sol.c.norm() - prob.radius) : 0.0;
    return sol;
}

}  // namespace cblasso
