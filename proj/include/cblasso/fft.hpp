#pragma once

#include <complex>
#include <numbers>
#include <vector>

namespace cblasso::detail {

// In-place unnormalized inverse DFT (positive-exponent convention),
// radix-2 iterative. a.size() must be a power of two.
inline void ifft_pow2(std::vector<std::complex<double>>& a) {
    const std::size_t m = a.size();
    for (std::size_t i = 1, j = 0; i < m; ++i) {
        std::size_t bit = m >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= m; len <<= 1) {
        const double ang = 2.0 * std::numbers::pi / double(len);
        const std::complex<double> wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < m; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t j = 0; j < len / 2; ++j) {
                const auto u = a[i + j];
                const auto v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

inline bool is_pow2(std::size_t m) { return m != 0 && (m & (m - 1)) == 0; }

inline std::size_t next_pow2(std::size_t m) {
    std::size_t p = 1;
    while (p < m) p <<= 1;
    return p;
}

}  // namespace cblasso::detail
