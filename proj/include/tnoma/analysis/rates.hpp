#ifndef TNOMA_ANALYSIS_RATES_HPP
#define TNOMA_ANALYSIS_RATES_HPP

#include <complex>
#include <cstdint>
#include <span>

namespace tnoma::analysis {

struct McStat {
    double mean = 0.0;
    double std_err = 0.0;
};

// Average rate per user of the decoupled transceiver:
//   (W / (K N)) * sum_i log2(1 + P_i lambda_i^2 |h_u(i)|^2 / (W sigma_u(i)^2)),
// slot i belonging to user i mod K.
double rate_svd(std::span<const double> lambdas, std::span<const double> powers,
                std::span<const std::complex<double>> h_per_user,
                std::span<const double> noise_var_per_user, double bandwidth, int n_symbols,
                int k_users);

// Ergodic rates for stronger/weaker user selection over Rayleigh fading.
// abar1, abar2 are the mean unsorted SNRs (already carrying any bandwidth
// scaling); closed forms are sums of exponentially scaled E1 terms.
double rate_strong_closed(double abar1, double abar2, double p_s, double bandwidth);
double rate_weak_closed(double abar1, double abar2, double p_s, double p_w, double g21,
                        double bandwidth);
double rate_single_user_closed(double abar, double p1, double bandwidth);

// Monte Carlo counterparts over exponential SNR draws; independent of the
// closed forms above.
McStat mc_rate_strong(double abar1, double abar2, double p_s, double bandwidth, int draws,
                      std::uint64_t seed);
McStat mc_rate_weak(double abar1, double abar2, double p_s, double p_w, double g21,
                    double bandwidth, int draws, std::uint64_t seed);
McStat mc_rate_single(double abar, double p1, double bandwidth, int draws, std::uint64_t seed);

} // namespace tnoma::analysis

#endif
