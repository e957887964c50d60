#ifndef TNOMA_CHANNEL_IMPAIRMENTS_HPP
#define TNOMA_CHANNEL_IMPAIRMENTS_HPP

#include <complex>
#include <vector>

#include "tnoma/common/rng.hpp"

namespace tnoma::channel {

// One flat Rayleigh coefficient per user per frame, CN(0, 1).
struct FadingDraw {
    std::vector<std::complex<double>> h;
};

// Per-frame impairments: a uniform timing error on the design offset and
// complex Gaussian CSI estimation errors at transmitter and receivers.
struct ImpairmentDraw {
    double timing_error = 0.0;                          // symbol units
    std::vector<std::complex<double>> csi_error_tx;     // per user
    std::vector<std::complex<double>> csi_error_rx;     // per user
};

FadingDraw draw_fading(int users, common::Rng& rng);

// width: full width of the uniform timing error in symbol units,
// epsilon ~ U(-width/2, +width/2). csi_var is E|delta|^2.
// shared_tx_rx reuses the transmitter draws at the receivers.
ImpairmentDraw draw_impairments(int users, double width, double csi_var, common::Rng& rng,
                                bool shared_tx_rx = false);

} // namespace tnoma::channel

#endif
