#include "tnoma/channel/impairments.hpp"

#include <stdexcept>

namespace tnoma::channel {

FadingDraw draw_fading(int users, common::Rng& rng) {
    FadingDraw d;
    d.h.resize(static_cast<std::size_t>(users));
    for (auto& h : d.h) h = rng.cgaussian(1.0);
    return d;
}

ImpairmentDraw draw_impairments(int users, double width, double csi_var, common::Rng& rng,
                                bool shared_tx_rx) {
    if (width < 0.0) throw std::invalid_argument("draw_impairments: width must be >= 0");
    if (csi_var < 0.0) throw std::invalid_argument("draw_impairments: csi_var must be >= 0");
    ImpairmentDraw d;
    d.timing_error = (width > 0.0) ? rng.uniform(-width / 2.0, width / 2.0) : 0.0;
    d.csi_error_tx.resize(static_cast<std::size_t>(users));
    d.csi_error_rx.resize(static_cast<std::size_t>(users));
    for (auto& e : d.csi_error_tx) e = (csi_var > 0.0) ? rng.cgaussian(csi_var) : 0.0;
    if (shared_tx_rx) {
        d.csi_error_rx = d.csi_error_tx;
    } else {
        for (auto& e : d.csi_error_rx) e = (csi_var > 0.0) ? rng.cgaussian(csi_var) : 0.0;
    }
    return d;
}

} // namespace tnoma::channel
