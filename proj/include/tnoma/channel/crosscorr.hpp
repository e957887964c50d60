#ifndef TNOMA_CHANNEL_CROSSCORR_HPP
#define TNOMA_CHANNEL_CROSSCORR_HPP

#include <span>
#include <vector>

#include "tnoma/channel/pulse.hpp"

namespace tnoma::channel {

// Sampled pulse cross-correlation sequences g_{l,k}[m] for every pair of a
// receive sampling grid l and a transmit offset k. Diagonal sequences carry
// the ISI taps, off-diagonal ones the inter-user interference taps.
//
// Each sequence is normalized to unit energy using its zero-timing-error
// normalizer, so a timing error genuinely perturbs tap energies. The raw
// (pulse-energy) taps and the nominal pair energies stay accessible; the pair
// energy of an off-diagonal sequence is the interference gain of that pair.
class CrossCorrBank {
public:
    // offsets: per-user time offsets tau_k in symbol units.
    // timing_error: shifts user 1's transmit timing while every receiver
    // stays locked to its own user, so only cross-pair lags move.
    static CrossCorrBank build(const PulseSpec& pulse, std::vector<double> offsets,
                               double timing_error = 0.0);

    int users() const { return users_; }
    int half_span() const { return half_span_; }
    int taps_per_pair() const { return 2 * half_span_ + 1; }

    // m in [-half_span, +half_span]
    double tap(int l, int k, int m) const { return taps_[idx(l, k)][static_cast<std::size_t>(m + half_span_)]; }
    std::span<const double> taps(int l, int k) const { return taps_[idx(l, k)]; }
    double raw_tap(int l, int k, int m) const { return raw_[idx(l, k)][static_cast<std::size_t>(m + half_span_)]; }
    std::span<const double> raw_taps(int l, int k) const { return raw_[idx(l, k)]; }

    // Sum of squared raw taps at zero timing error (the normalizer squared).
    double pair_energy(int l, int k) const { return energy_[idx(l, k)]; }
    double interference_gain(int l, int k) const { return pair_energy(l, k); }

    const std::vector<double>& offsets() const { return offsets_; }
    double timing_error() const { return timing_error_; }
    double rolloff() const { return rolloff_; }

private:
    std::size_t idx(int l, int k) const { return static_cast<std::size_t>(l * users_ + k); }

    int users_ = 0;
    int half_span_ = 0;
    double timing_error_ = 0.0;
    double rolloff_ = 1.0;
    std::vector<double> offsets_;
    std::vector<std::vector<double>> taps_;
    std::vector<std::vector<double>> raw_;
    std::vector<double> energy_;
};

} // namespace tnoma::channel

#endif
