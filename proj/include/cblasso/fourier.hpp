#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "cblasso/torus.hpp"
#include "cblasso/trigpoly.hpp"

namespace cblasso {

/// The sampling operator mapping a measure to its Fourier coefficients
/// c_k for |k| <= f_c. Coefficient vectors are indexed k = -f_c..f_c
/// ascending, length n = 2 f_c + 1.
struct FourierOperator {
    int fc = 0;

    explicit FourierOperator(int cutoff) : fc(cutoff) {
        if (fc < 0) throw std::invalid_argument("FourierOperator: fc must be >= 0");
    }

    int n() const { return 2 * fc + 1; }
};

/// c_k(mu) = sum_j a_j exp(-2 pi i k t_j), k = -f_c..f_c.
inline Eigen::VectorXcd fourier_coefficients(const FourierOperator& op, const AtomicMeasure& mu) {
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(op.n());
    for (const auto& atom : mu.atoms()) {
        const Complex w = std::polar(1.0, -kTwoPi * atom.position.t);
        Complex wk = std::polar(1.0, kTwoPi * op.fc * atom.position.t);  // k = -fc
        for (int i = 0; i < op.n(); ++i) {
            c(i) += atom.amplitude * wk;
            wk *= w;
        }
    }
    return c;
}

/// F_n^*(c): the trig polynomial t -> sum_k c_k exp(2 pi i k t).
inline TrigPoly adjoint_polynomial(const FourierOperator& op, const Eigen::VectorXcd& c) {
    if (c.size() != op.n()) throw std::invalid_argument("adjoint_polynomial: length mismatch");
    return TrigPoly(op.fc, c);
}

/// Dirichlet kernel D_fc(t) = 1 + 2 sum_{k=1..fc} cos(2 pi k t); D_fc(0) = n.
inline double dirichlet_value(const FourierOperator& op, TorusPoint t) {
    double s = 1.0;
    for (int k = 1; k <= op.fc; ++k) s += 2.0 * std::cos(kTwoPi * k * t.t);
    return s;
}

}  // namespace cblasso
