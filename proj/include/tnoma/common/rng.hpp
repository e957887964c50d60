#ifndef TNOMA_COMMON_RNG_HPP
#define TNOMA_COMMON_RNG_HPP

#include <cmath>
#include <complex>
#include <cstdint>

namespace tnoma::common {

// Counter-derivable generator built on splitmix64. Every (seed, stream, index)
// triple yields an independent deterministic sequence, so per-frame draws do
// not depend on processing order. Gaussians come from Box-Muller to keep the
// bit stream identical across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    static Rng derive(std::uint64_t seed, std::uint64_t stream, std::uint64_t index = 0) {
        std::uint64_t s = mix(seed ^ 0x9e3779b97f4a7c15ULL, stream + 1);
        return Rng(mix(s, index + 1));
    }

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // (0, 1]
    double uniform() {
        return 1.0 - static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    // Circularly symmetric complex Gaussian with E|z|^2 = var.
    std::complex<double> cgaussian(double var = 1.0) {
        double s = std::sqrt(var / 2.0);
        double re = gaussian();
        double im = gaussian();
        return {s * re, s * im};
    }

private:
    static std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
        std::uint64_t z = a ^ (b * 0xff51afd7ed558ccdULL);
        z ^= z >> 33;
        z *= 0xc4ceb9fe1a85ec53ULL;
        z ^= z >> 33;
        return z + b;
    }

    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace tnoma::common

#endif
