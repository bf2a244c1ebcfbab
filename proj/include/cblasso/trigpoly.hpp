#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "cblasso/fft.hpp"
#include "cblasso/torus.hpp"

namespace cblasso {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Trigonometric polynomial t -> sum_{|k|<=d} c_k exp(2 pi i k t).
/// Coefficients are stored in ascending k order, c_k at index k + d.
class TrigPoly {
  public:
    TrigPoly() : degree_(0), coeffs_(Eigen::VectorXcd::Zero(1)) {}

    TrigPoly(int degree, Eigen::VectorXcd coeffs) : degree_(degree), coeffs_(std::move(coeffs)) {
        if (degree_ < 0 || coeffs_.size() != 2 * degree_ + 1)
            throw std::invalid_argument("TrigPoly: coefficient length must be 2d+1");
    }

    static TrigPoly constant(Complex c) {
        Eigen::VectorXcd v(1);
        v(0) = c;
        return TrigPoly(0, v);
    }

    int degree() const { return degree_; }
    const Eigen::VectorXcd& coeffs() const { return coeffs_; }
    Complex coeff(int k) const { return coeffs_(k + degree_); }

    Complex eval(double t) const {
        // Horner in e^{2 pi i t} over the shifted coefficient list.
        const Complex w = std::polar(1.0, kTwoPi * t);
        Complex acc(0.0, 0.0);
        for (int i = int(coeffs_.size()) - 1; i >= 0; --i) acc = acc * w + coeffs_(i);
        return acc * std::polar(1.0, -kTwoPi * degree_ * t);
    }

    TrigPoly derivative() const {
        Eigen::VectorXcd d(coeffs_.size());
        for (int k = -degree_; k <= degree_; ++k)
            d(k + degree_) = Complex(0.0, kTwoPi * k) * coeffs_(k + degree_);
        return TrigPoly(degree_, std::move(d));
    }

  private:
    int degree_;
    Eigen::VectorXcd coeffs_;
};

/// Values p(j/m) for j = 0..m-1. Uses a radix-2 transform of the folded
/// coefficient array when m is a power of two, direct summation otherwise.
inline std::vector<Complex> eval_grid(const TrigPoly& p, std::size_t m) {
    const int d = p.degree();
    if (m < std::size_t(2 * d + 1)) throw std::invalid_argument("eval_grid: grid too small");
    std::vector<Complex> a(m, Complex(0.0, 0.0));
    for (int k = -d; k <= d; ++k) {
        std::size_t q = std::size_t(((k % int(m)) + int(m)) % int(m));
        a[q] += p.coeff(k);
    }
    if (detail::is_pow2(m)) {
        detail::ifft_pow2(a);
        return a;
    }
    std::vector<Complex> out(m);
    for (std::size_t j = 0; j < m; ++j) out[j] = p.eval(double(j) / double(m));
    return out;
}

/// |p|^2 as a Hermitian-symmetric TrigPoly of degree 2d (coefficient
/// autocorrelation).
inline TrigPoly modulus_squared(const TrigPoly& p) {
    const int d = p.degree();
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(4 * d + 1);
    for (int j = -2 * d; j <= 2 * d; ++j) {
        Complex s(0.0, 0.0);
        for (int k = std::max(-d, j - d); k <= std::min(d, j + d); ++k)
            s += p.coeff(k) * std::conj(p.coeff(k - j));
        out(j + 2 * d) = s;
    }
    return TrigPoly(2 * d, std::move(out));
}

namespace detail {

/// Newton refinement of a stationary point of the real polynomial q
/// (Hermitian-symmetric TrigPoly) starting from t0. Returns true on
/// convergence (|step| < 1e-13 within max_iters).
inline bool newton_stationary(const TrigPoly& dq, const TrigPoly& ddq, double& t,
                              double max_step, int max_iters = 50) {
    for (int it = 0; it < max_iters; ++it) {
        const double g = dq.eval(t).real();
        const double h = ddq.eval(t).real();
        if (h == 0.0) return false;
        double step = -g / h;
        if (std::abs(step) > max_step) step = step > 0 ? max_step : -max_step;
        t = wrap_unit(t + step);
        if (std::abs(step) < 1e-13) return true;
    }
    return false;
}

}  // namespace detail

struct SupResult {
    double value = 0.0;
    TorusPoint argmax;
};

/// Global maximum of |p(t)| by dense-grid seeding plus Newton refinement
/// on the derivative of |p|^2. Only grid local maxima within a small
/// margin of the grid maximum are refined: a bandlimited |p|^2 cannot
/// gain more than ||(|p|^2)''||_inf / (8 m^2) between grid points.
inline SupResult sup_modulus(const TrigPoly& p) {
    const int d = p.degree();
    const std::size_t m = detail::next_pow2(std::max<std::size_t>(4096, 16 * (2 * d + 1)));
    const TrigPoly q = modulus_squared(p);
    const TrigPoly dq = q.derivative();
    const TrigPoly ddq = dq.derivative();

    const auto vals = eval_grid(q, m);
    double grid_max = 0.0;
    for (const auto& v : vals) grid_max = std::max(grid_max, v.real());

    const double slack = std::pow(kTwoPi * 2 * d, 2) * grid_max / (8.0 * double(m) * double(m));
    const double thresh = grid_max - slack - 1e-15 * grid_max;

    SupResult best;
    best.value = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        const double v = vals[j].real();
        const double prev = vals[(j + m - 1) % m].real();
        const double next = vals[(j + 1) % m].real();
        if (v < prev || v < next) continue;
        double t = double(j) / double(m);
        double vt = v;
        if (v >= thresh) {
            double tr = t;
            if (detail::newton_stationary(dq, ddq, tr, 1.0 / double(m))) {
                const double vr = q.eval(tr).real();
                if (vr > vt) {
                    vt = vr;
                    t = tr;
                }
            }
        }
        if (vt > best.value) {
            best.value = vt;
            best.argmax = TorusPoint(t);
        }
    }
    best.value = std::sqrt(std::max(0.0, best.value));
    return best;
}

struct RootSet {
    std::vector<TorusPoint> points;
    std::vector<double> residuals;  // 1 - |p(t*)|^2 at each located root
    bool constant_modulus = false;
    int dropped_seeds = 0;
};

/// Locate the unit-modulus set of p: points where 1 - |p|^2 <= eps_support
/// and (|p|^2)' vanishes. Seeds are grid local maxima of |p|^2, refined by
/// Newton, clustered within radius 1/(16 m).
inline RootSet unit_modulus_roots(const TrigPoly& p, double eps_support) {
    const int d = p.degree();
    const std::size_t m = detail::next_pow2(std::max<std::size_t>(4096, 16 * (2 * d + 1)));
    const TrigPoly q = modulus_squared(p);
    const TrigPoly dq = q.derivative();
    const TrigPoly ddq = dq.derivative();

    const auto vals = eval_grid(q, m);
    double vmax = -1e300, vmin = 1e300;
    for (const auto& v : vals) {
        vmax = std::max(vmax, v.real());
        vmin = std::min(vmin, v.real());
    }

    RootSet out;
    if (vmax - vmin < eps_support) {
        out.constant_modulus = true;
        return out;
    }

    const double cluster_radius = 1.0 / (16.0 * double(m));
    std::vector<std::pair<double, double>> found;  // (t, residual)
    for (std::size_t j = 0; j < m; ++j) {
        const double v = vals[j].real();
        const double prev = vals[(j + m - 1) % m].real();
        const double next = vals[(j + 1) % m].real();
        if (v < prev || v < next) continue;
        if (1.0 - v > eps_support + 0.25) continue;  // far from unit modulus, skip seed
        double t = double(j) / double(m);
        if (!detail::newton_stationary(dq, ddq, t, 1.0 / double(m))) {
            ++out.dropped_seeds;
            continue;
        }
        const double res = 1.0 - q.eval(t).real();
        if (res > eps_support) continue;
        bool merged = false;
        for (auto& f : found) {
            if (torus_distance(TorusPoint(f.first), TorusPoint(t)) <= cluster_radius) {
                if (res < f.second) f = {t, res};
                merged = true;
                break;
            }
        }
        if (!merged) found.emplace_back(t, res);
    }
    std::sort(found.begin(), found.end());
    for (const auto& f : found) {
        out.points.emplace_back(f.first);
        out.residuals.push_back(f.second);
    }
    return out;
}

/// L1 norm of p over one period by equispaced quadrature on at least
/// max(4096, 32(2d+1)) points.
inline double l1_norm(const TrigPoly& p) {
    const int d = p.degree();
    const std::size_t m = detail::next_pow2(std::max<std::size_t>(4096, 32 * (2 * d + 1)));
    const auto vals = eval_grid(p, m);
    double s = 0.0;
    for (const auto& v : vals) s += std::abs(v);
    return s / double(m);
}

}  // namespace cblasso
