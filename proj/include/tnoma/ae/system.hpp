#ifndef TNOMA_AE_SYSTEM_HPP
#define TNOMA_AE_SYSTEM_HPP

#include <complex>
#include <memory>
#include <vector>

#include "tnoma/ae/decoder.hpp"
#include "tnoma/ae/encoder.hpp"
#include "tnoma/ae/mlp.hpp"
#include "tnoma/channel/channel_matrix.hpp"
#include "tnoma/channel/impairments.hpp"
#include "tnoma/channel/noise.hpp"
#include "tnoma/nn/checkpoint.hpp"
#include "tnoma/nn/losses.hpp"

namespace tnoma::ae {

enum class LossMode { Ce, MseIdentity, MseTanh, CeQ };

FinalAct head_for(LossMode mode);

struct AeConfig {
    AeVariant variant{};
    int k_users = 2;
    int n_symbols = 512;
    channel::PulseSpec pulse{};
    std::vector<double> offsets = {0.5, 0.0};
    double total_power = 2.0;
    LossMode loss = LossMode::Ce;
    double alpha = 0.5;   // Q-loss weight
    double kappa = 2.0;   // Q-loss sharpness
    bool use_mlp_pa = false;
    bool use_mlp_t = false;
    bool skip_a = false;
    bool skip_b = false;
    bool skip_c = false;
    int pa_h1 = 32, pa_h2 = 32, pa_h3 = 32;
    int t_h1 = 8, t_h2 = 8;
    std::uint64_t init_seed = 1;
};

// A mini-batch of frames with every random draw already materialized, so a
// forward pass is a pure function of the parameters. Noise is pre-colored at
// unit spectral density and scaled by sqrt(N0) where it is added.
struct FrameBatch {
    nn::Tensor bits;                                                 // [B, K, N], +/-1
    std::vector<std::vector<std::complex<double>>> h;                // [B][K]
    std::vector<channel::ImpairmentDraw> imp;                        // [B]
    std::vector<std::vector<std::vector<std::complex<double>>>> noise;  // [B][K][K*Nv]

    std::int64_t batch() const { return bits.dim(0); }
};

FrameBatch make_batch(int batch, const AeConfig& cfg, const channel::NoiseColorer& colorer,
                      double timing_width, double csi_var, bool shared_csi, std::uint64_t seed,
                      std::uint64_t frame_base);

// Encoder, power allocator, differentiable channel, combiners and per-user
// decoders assembled into one trainable transceiver.
class AeSystem {
public:
    explicit AeSystem(const AeConfig& cfg);

    const AeConfig& config() const { return cfg_; }
    int n_valid() const { return n_valid_; }
    const channel::CrossCorrBank& nominal_bank() const { return nominal_bank_; }

    struct StepResult {
        nn::Tensor est;  // [B, K, N]
        double loss_ce = 0.0;
        double loss_q = 0.0;
        double loss_mse = 0.0;
        double loss_total = 0.0;
        bool q_skipped = false;
    };

    // Forward pass (and optionally gradient accumulation) over one batch.
    StepResult run(const FrameBatch& batch, double snr_db, bool training, bool do_backward,
                   bool clip_qgrad = true);

    static void count_errors(const nn::Tensor& est, const nn::Tensor& bits, FinalAct head,
                             std::vector<std::uint64_t>& err, std::vector<std::uint64_t>& cnt);

    std::vector<nn::Tensor*> params();
    std::vector<nn::NamedArray> state_arrays();      // parameters + norm running stats
    void load_state(const std::vector<nn::NamedArray>& arrays);

    Encoder& encoder() { return *encoder_; }
    Decoder& decoder(int r) { return *decoders_[static_cast<std::size_t>(r)]; }
    MlpPowerAllocator* power_allocator() { return pa_.get(); }
    MlpCombiner* combiner(int r) { return combiners_.empty() ? nullptr : combiners_[static_cast<std::size_t>(r)].get(); }
    void reset_macs();

private:
    AeConfig cfg_;
    channel::CrossCorrBank nominal_bank_;
    int n_valid_ = 0;
    std::unique_ptr<Encoder> encoder_;
    std::vector<std::unique_ptr<Decoder>> decoders_;
    std::unique_ptr<MlpPowerAllocator> pa_;
    std::vector<std::unique_ptr<MlpCombiner>> combiners_;

    // forward caches for the backward pass
    std::vector<std::vector<double>> gv_;                      // [B][K*Nv]
    std::vector<nn::Tensor> y_pre_re_, y_pre_im_;              // per user, [B, K*Nv]
    std::vector<nn::Tensor> q_;                                // per user, [B, 2]
    std::vector<std::unique_ptr<channel::CrossCorrBank>> frame_bank_;  // per frame with timing error
};

} // namespace tnoma::ae

#endif
