#include "tnoma/analysis/rates.hpp"

#include <cmath>
#include <stdexcept>

#include "tnoma/analysis/special.hpp"
#include "tnoma/common/rng.hpp"

namespace tnoma::analysis {

namespace {
constexpr double kLog2E = 1.4426950408889634073599246810019;

double exp_draw(double mean, common::Rng& rng) { return -mean * std::log(rng.uniform()); }

McStat mc_reduce(double sum, double sum_sq, int draws) {
    const double mean = sum / draws;
    const double var = std::max(sum_sq / draws - mean * mean, 0.0);
    return {mean, std::sqrt(var / draws)};
}
} // namespace

double rate_svd(std::span<const double> lambdas, std::span<const double> powers,
                std::span<const std::complex<double>> h_per_user,
                std::span<const double> noise_var_per_user, double bandwidth, int n_symbols,
                int k_users) {
    if (lambdas.size() != powers.size()) throw std::invalid_argument("rate_svd: lambdas/powers mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        const int u = static_cast<int>(i) % k_users;
        const double h2 = std::norm(h_per_user[static_cast<std::size_t>(u)]);
        const double snr = powers[i] * lambdas[i] * lambdas[i] * h2 /
                           (bandwidth * noise_var_per_user[static_cast<std::size_t>(u)]);
        acc += std::log2(1.0 + snr);
    }
    return bandwidth * acc / (static_cast<double>(k_users) * n_symbols);
}

double rate_strong_closed(double abar1, double abar2, double p_s, double bandwidth) {
    if (!(abar1 > 0.0 && abar2 > 0.0 && p_s > 0.0)) throw std::invalid_argument("rate_strong_closed: positive inputs required");
    const double c1 = 1.0 / (p_s * abar1);
    const double c2 = 1.0 / (p_s * abar2);
    const double c3 = (abar1 + abar2) / (p_s * abar1 * abar2);
    return bandwidth * kLog2E * (exp_scaled_E1(c1) + exp_scaled_E1(c2) - exp_scaled_E1(c3));
}

double rate_weak_closed(double abar1, double abar2, double p_s, double p_w, double g21,
                        double bandwidth) {
    if (!(abar1 > 0.0 && abar2 > 0.0)) throw std::invalid_argument("rate_weak_closed: positive mean SNRs required");
    if (g21 < 0.0 || p_w < 0.0 || p_s < 0.0) throw std::invalid_argument("rate_weak_closed: negative inputs");
    const double denom_total = g21 * p_s + p_w;
    if (denom_total <= 0.0) return 0.0;
    const double lam = (abar1 + abar2) / (abar1 * abar2);
    const double c_total = lam / denom_total;
    double r = exp_scaled_E1(c_total);
    if (g21 * p_s > 0.0) r -= exp_scaled_E1(lam / (g21 * p_s));
    return bandwidth * kLog2E * r;
}

double rate_single_user_closed(double abar, double p1, double bandwidth) {
    if (!(abar > 0.0 && p1 > 0.0)) throw std::invalid_argument("rate_single_user_closed: positive inputs required");
    const double c = 1.0 / (p1 * abar);
    return bandwidth * kLog2E * exp_scaled_E1(c);
}

McStat mc_rate_strong(double abar1, double abar2, double p_s, double bandwidth, int draws,
                      std::uint64_t seed) {
    common::Rng rng(seed);
    double s = 0.0, s2 = 0.0;
    for (int i = 0; i < draws; ++i) {
        const double a = std::max(exp_draw(abar1, rng), exp_draw(abar2, rng));
        const double r = bandwidth * std::log2(1.0 + p_s * a);
        s += r;
        s2 += r * r;
    }
    return mc_reduce(s, s2, draws);
}

McStat mc_rate_weak(double abar1, double abar2, double p_s, double p_w, double g21,
                    double bandwidth, int draws, std::uint64_t seed) {
    common::Rng rng(seed);
    double s = 0.0, s2 = 0.0;
    for (int i = 0; i < draws; ++i) {
        const double a = std::min(exp_draw(abar1, rng), exp_draw(abar2, rng));
        const double r = bandwidth * std::log2(1.0 + p_w * a / (g21 * p_s * a + 1.0));
        s += r;
        s2 += r * r;
    }
    return mc_reduce(s, s2, draws);
}

McStat mc_rate_single(double abar, double p1, double bandwidth, int draws, std::uint64_t seed) {
    common::Rng rng(seed);
    double s = 0.0, s2 = 0.0;
    for (int i = 0; i < draws; ++i) {
        const double r = bandwidth * std::log2(1.0 + p1 * exp_draw(abar, rng));
        s += r;
        s2 += r * r;
    }
    return mc_reduce(s, s2, draws);
}

} // namespace tnoma::analysis
