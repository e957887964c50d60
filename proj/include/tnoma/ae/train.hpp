#ifndef TNOMA_AE_TRAIN_HPP
#define TNOMA_AE_TRAIN_HPP

#include <string>
#include <vector>

#include "tnoma/ae/system.hpp"

namespace tnoma::ae {

struct TrainConfig {
    int train_frames = 131072;
    int val_frames = 512;
    int batch = 32;
    int epochs = 20;
    double lr = 3e-3;
    double train_snr_db = 30.0;
    double timing_width_frac = 0.0;  // uniform error width as a fraction of the design offset
    double csi_var = 0.0;
    bool shared_csi = false;
    std::uint64_t seed = 1;
    std::string curve_path;      // learning-curve CSV (iteration, loss_ce, loss_q, ber_val)
    int curve_every = 64;
    std::string divergence_dump = "ae_diverged.ckpt";
};

struct TrainResult {
    double initial_ce = 0.0;  // mean total loss over the first iterations
    double final_ce = 0.0;    // mean total loss over the last iterations
    std::vector<double> val_ber_per_epoch;
    int iterations = 0;
};

double timing_width_abs(const AeConfig& cfg, double frac);

// Joint end-to-end optimization with fresh random frames, fading and
// impairment draws per mini-batch. Aborts with a state dump if the loss
// turns non-finite.
TrainResult train(AeSystem& sys, const TrainConfig& cfg);

struct EvalPoint {
    double snr_db = 0.0;
    std::vector<double> ber_user;
    std::vector<double> ci95_user;
    double ber_avg = 0.0;
    double ci95_avg = 0.0;
    std::uint64_t bits = 0;
};

// Hard-decision Monte Carlo BER with frozen normalization statistics.
std::vector<EvalPoint> evaluate(AeSystem& sys, const std::vector<double>& snr_db, int frames,
                                double timing_width_frac, double csi_var, bool shared_csi,
                                std::uint64_t seed, int batch = 64);

} // namespace tnoma::ae

#endif
