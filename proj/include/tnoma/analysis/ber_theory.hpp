#ifndef TNOMA_ANALYSIS_BER_THEORY_HPP
#define TNOMA_ANALYSIS_BER_THEORY_HPP

#include <cstdint>

#include "tnoma/analysis/rates.hpp"

namespace tnoma::analysis {

// Average BER of the stronger selected user over Rayleigh fading with
// instantaneous BER a*Q(sqrt(b*gamma)); the power enters by scaling the mean
// SNRs. BPSK: a = 1, b = 2.
double ber_strong_closed(double abar1, double abar2, double a, double b, double p_s);

// Average BER of the weaker user with interference gain g21, evaluated by
// adaptive quadrature of the conditional BER against the min-exponential
// density (absolute tolerance 1e-8).
double ber_weak_numeric(double abar1, double abar2, double a, double b, double p_s, double p_w,
                        double g21);

// High-SNR limit of the weak-user BER: a * Q(sqrt(b p_w / (g21 p_s))).
double ber_weak_floor(double a, double b, double p_s, double p_w, double g21);

// Exact BPSK average BER over a one-user Rayleigh channel.
double single_user_ber_rayleigh(double gbar);

// Monte Carlo references, independent of the closed forms.
McStat mc_ber_strong(double abar1, double abar2, double a, double b, double p_s, int draws,
                     std::uint64_t seed);
McStat mc_ber_weak(double abar1, double abar2, double a, double b, double p_s, double p_w,
                   double g21, int draws, std::uint64_t seed);
McStat mc_ber_single(double gbar, int draws, std::uint64_t seed);

} // namespace tnoma::analysis

#endif
