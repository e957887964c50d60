#ifndef TNOMA_CHANNEL_NOISE_HPP
#define TNOMA_CHANNEL_NOISE_HPP

#include <complex>
#include <span>
#include <vector>

#include "tnoma/channel/crosscorr.hpp"
#include "tnoma/common/rng.hpp"

namespace tnoma::channel {

// Colored matched-filter noise for the stacked receive grids. The covariance
// of the stacked vector has entries g_raw((m - m') + tau_l - tau_l'), i.e. the
// physical pulse correlations at the nominal grids (unit diagonal). A banded
// Cholesky factor in time-interleaved order makes coloring O(dim * bandwidth)
// per frame. Real and imaginary parts are colored independently with variance
// N0/2 each, so E|n|^2 = N0 per sample.
class NoiseColorer {
public:
    // Always built from the nominal (zero timing error) bank.
    static NoiseColorer build(const CrossCorrBank& bank, int n_symbols);

    int dim() const { return dim_; }
    int bandwidth() const { return bandwidth_; }
    double ridge() const { return ridge_; }

    // y[l * nv + m] += colored complex noise with per-sample variance n0.
    void add_noise(std::span<std::complex<double>> y, double n0, common::Rng& rng) const;

    // w <- L w (stacked order), unit-variance input -> covariance R.
    void color(std::span<double> w) const;
    // x <- L^{-1} x (stacked order).
    void whiten(std::span<double> x) const;

    // Analytic covariance entry in stacked order (unit diagonal), for tests.
    double covariance_entry(int i, int j) const;

private:
    int users_ = 0;
    int n_valid_ = 0;
    int dim_ = 0;
    int bandwidth_ = 0;
    double ridge_ = 0.0;
    std::vector<double> offsets_;
    double rolloff_ = 1.0;
    int half_span_ = 0;
    // Lower banded factor, interleaved order: band_(i, d) = L[i, i - d], d = 0..bandwidth.
    std::vector<double> band_;

    double& band(int i, int d) { return band_[static_cast<std::size_t>(i) * (bandwidth_ + 1) + d]; }
    double band(int i, int d) const { return band_[static_cast<std::size_t>(i) * (bandwidth_ + 1) + d]; }
    int interleaved(int stacked) const;  // stacked index -> interleaved index
    void factorize(double ridge);
};

} // namespace tnoma::channel

#endif
