#ifndef TNOMA_CHANNEL_MATCHED_FILTER_HPP
#define TNOMA_CHANNEL_MATCHED_FILTER_HPP

#include <span>
#include <vector>

#include "tnoma/channel/pulse.hpp"

namespace tnoma::channel {

// Quadrature reference for the discrete channel: builds the oversampled
// continuous-time superposition of root-raised-cosine pulse trains and
// correlates it with the shifted pulse at every receive grid, returning the
// stacked valid sufficient statistics (same layout as banded_apply with raw
// taps, noise-free, h = 1, unit powers).
//
// This routine exists as an independent test oracle; it never feeds the
// simulators. oversample >= 16 keeps the trapezoid sums effectively exact for
// the band-limited pulse; support (symbols, each side) bounds the truncation
// of the analytic pulse tails.
std::vector<double> matched_filter_oracle(std::span<const double> x_interleaved,
                                          const PulseSpec& pulse,
                                          std::span<const double> offsets, int n_symbols,
                                          int oversample, double support = 32.0);

// Two-user convenience wrapper (offsets tau_1, tau_2 for x1, x2).
std::vector<double> matched_filter_oracle2(std::span<const double> x1, std::span<const double> x2,
                                           const PulseSpec& pulse, double tau1, double tau2,
                                           int oversample, double support = 32.0);

} // namespace tnoma::channel

#endif
