#include "tnoma/analysis/ber_theory.hpp"

#include <cmath>
#include <stdexcept>

#include "tnoma/analysis/special.hpp"
#include "tnoma/common/rng.hpp"

namespace tnoma::analysis {

namespace {
double exp_draw(double mean, common::Rng& rng) { return -mean * std::log(rng.uniform()); }

McStat mc_reduce(double sum, double sum_sq, int draws) {
    const double mean = sum / draws;
    const double var = std::max(sum_sq / draws - mean * mean, 0.0);
    return {mean, std::sqrt(var / draws)};
}
} // namespace

double ber_strong_closed(double abar1, double abar2, double a, double b, double p_s) {
    if (!(abar1 > 0.0 && abar2 > 0.0 && b > 0.0 && p_s > 0.0))
        throw std::invalid_argument("ber_strong_closed: positive inputs required");
    const double a1 = p_s * abar1;
    const double a2 = p_s * abar2;
    const double t1 = 1.0 / std::sqrt(0.5 + 1.0 / (b * a1));
    const double t2 = 1.0 / std::sqrt(0.5 + 1.0 / (b * a2));
    const double t3 = 1.0 / std::sqrt(0.5 + (a1 + a2) / (b * a1 * a2));
    return a / 2.0 - (a / (2.0 * std::sqrt(2.0))) * (t1 + t2 - t3);
}

double ber_weak_numeric(double abar1, double abar2, double a, double b, double p_s, double p_w,
                        double g21) {
    if (!(abar1 > 0.0 && abar2 > 0.0 && b > 0.0)) throw std::invalid_argument("ber_weak_numeric: positive inputs required");
    if (p_w < 0.0 || p_s < 0.0 || g21 < 0.0) throw std::invalid_argument("ber_weak_numeric: negative inputs");
    const double lam = 1.0 / abar1 + 1.0 / abar2;  // min of two exponentials is exponential
    auto integrand = [&](double y) {
        const double snr = b * p_w * y / (1.0 + g21 * p_s * y);
        return a * q_func(std::sqrt(snr)) * lam * std::exp(-lam * y);
    };
    const double cap = 40.0 / lam;
    return integrate(integrand, 0.0, cap, 1e-8);
}

double ber_weak_floor(double a, double b, double p_s, double p_w, double g21) {
    if (g21 * p_s <= 0.0) return 0.0;
    return a * q_func(std::sqrt(b * p_w / (g21 * p_s)));
}

double single_user_ber_rayleigh(double gbar) {
    if (!(gbar > 0.0)) throw std::invalid_argument("single_user_ber_rayleigh: gbar must be > 0");
    return 0.5 * (1.0 - std::sqrt(gbar / (1.0 + gbar)));
}

McStat mc_ber_strong(double abar1, double abar2, double a, double b, double p_s, int draws,
                     std::uint64_t seed) {
    common::Rng rng(seed);
    double s = 0.0, s2 = 0.0;
    for (int i = 0; i < draws; ++i) {
        const double g = std::max(exp_draw(abar1, rng), exp_draw(abar2, rng));
        const double v = a * q_func(std::sqrt(b * p_s * g));
        s += v;
        s2 += v * v;
    }
    return mc_reduce(s, s2, draws);
}

McStat mc_ber_weak(double abar1, double abar2, double a, double b, double p_s, double p_w,
                   double g21, int draws, std::uint64_t seed) {
    common::Rng rng(seed);
    double s = 0.0, s2 = 0.0;
    for (int i = 0; i < draws; ++i) {
        const double g = std::min(exp_draw(abar1, rng), exp_draw(abar2, rng));
        const double v = a * q_func(std::sqrt(b * p_w * g / (1.0 + g21 * p_s * g)));
        s += v;
        s2 += v * v;
    }
    return mc_reduce(s, s2, draws);
}

McStat mc_ber_single(double gbar, int draws, std::uint64_t seed) {
    common::Rng rng(seed);
    double s = 0.0, s2 = 0.0;
    for (int i = 0; i < draws; ++i) {
        const double v = q_func(std::sqrt(2.0 * exp_draw(gbar, rng)));
        s += v;
        s2 += v * v;
    }
    return mc_reduce(s, s2, draws);
}

} // namespace tnoma::analysis
