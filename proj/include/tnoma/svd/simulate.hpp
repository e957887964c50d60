#ifndef TNOMA_SVD_SIMULATE_HPP
#define TNOMA_SVD_SIMULATE_HPP

#include <cstdint>
#include <vector>

#include "tnoma/channel/pulse.hpp"

namespace tnoma::svd {

struct SvdBerConfig {
    int k_users = 2;
    int n_symbols = 512;
    channel::PulseSpec pulse{};
    std::vector<double> offsets = {0.5, 0.0};
    std::vector<double> snr_db = {10.0, 20.0, 30.0};
    int frames = 1024;
    std::uint64_t seed = 1;
    double total_power = 2.0;        // average total transmit power P
    double timing_width = 0.0;       // full uniform width of epsilon, symbol units
    double csi_var = 0.0;            // E|delta|^2
    bool shared_tx_rx_csi = false;
    bool fixed_unit_fading = false;  // h_r = 1 for calibration runs
};

struct BerPoint {
    double snr_db = 0.0;
    std::vector<double> ber_user;
    std::vector<double> ci95_user;
    double ber_avg = 0.0;
    double ci95_avg = 0.0;
    std::uint64_t bits_counted = 0;
};

// Monte Carlo BER of the SVD transceiver. Coding and decoding always use the
// nominal factorization; timing errors only perturb the channel the frame
// actually passes through. Water-filling runs per frame from the transmitter
// CSI estimates. Slots whose singular value is below the rank tolerance or
// whose allocated power is zero carry no data and are excluded from the count.
std::vector<BerPoint> simulate_svd_ber(const SvdBerConfig& cfg);

} // namespace tnoma::svd

#endif
