#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace cblasso {

using Complex = std::complex<double>;

/// Reduce any real position to the canonical representative in [0, 1).
inline double wrap_unit(double t) {
    double r = t - std::floor(t);
    if (r >= 1.0) r = 0.0;  // floor rounding at exact integers
    return r;
}

/// A point on the torus T = R/Z, stored canonically in [0, 1).
struct TorusPoint {
    double t = 0.0;
    TorusPoint() = default;
    explicit TorusPoint(double pos) : t(wrap_unit(pos)) {}
};

/// Canonical torus distance, min(|a-b|, 1-|a-b|) in [0, 1/2].
inline double torus_distance(TorusPoint a, TorusPoint b) {
    double d = std::abs(a.t - b.t);
    return std::min(d, 1.0 - d);
}

/// Signed difference a - b mapped to [-1/2, 1/2).
inline double torus_diff(double a, double b) {
    double d = wrap_unit(a - b);
    return d < 0.5 ? d : d - 1.0;
}

struct Atom {
    TorusPoint position;
    Complex amplitude;
};

/// Finitely supported complex measure on the torus. Positions are
/// canonicalized at construction; atoms closer than the merge radius
/// are combined by amplitude summation.
class AtomicMeasure {
  public:
    static constexpr double kMergeRadius = 1e-12;

    AtomicMeasure() = default;

    AtomicMeasure(std::vector<double> positions, std::vector<Complex> amplitudes) {
        if (positions.size() != amplitudes.size())
            throw std::invalid_argument("AtomicMeasure: size mismatch");
        for (std::size_t i = 0; i < positions.size(); ++i)
            add(TorusPoint(positions[i]), amplitudes[i]);
    }

    void add(TorusPoint p, Complex a) {
        for (auto& atom : atoms_) {
            if (torus_distance(atom.position, p) < kMergeRadius) {
                atom.amplitude += a;
                return;
            }
        }
        atoms_.push_back({p, a});
    }

    const std::vector<Atom>& atoms() const { return atoms_; }
    std::size_t size() const { return atoms_.size(); }
    bool empty() const { return atoms_.empty(); }

  private:
    std::vector<Atom> atoms_;
};

/// Sum of amplitude moduli.
inline double tv_norm(const AtomicMeasure& mu) {
    double s = 0.0;
    for (const auto& atom : mu.atoms()) s += std::abs(atom.amplitude);
    return s;
}

}  // namespace cblasso
