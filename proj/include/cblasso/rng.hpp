#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace cblasso {

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}
}  // namespace detail

/// Small counter-based generator (xoshiro256** seeded by splitmix64).
/// substream(seed, id) yields independent, reproducible streams, so
/// parallel replicas stay deterministic regardless of scheduling.
class Rng {
  public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) {
        std::uint64_t sm = seed ^ (0x6a09e667f3bcc909ULL + stream * 0x2545f4914f6cdd1dULL);
        for (auto& w : s_) w = detail::splitmix64(sm);
    }

    static Rng substream(std::uint64_t seed, std::uint64_t stream) { return Rng(seed, stream + 1); }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform in (0, 1), never exactly 0.
    double uniform() { return (double(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

    /// Standard normal via Box-Muller; draws come in deterministic order.
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::uint64_t s_[4]{};
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace cblasso
