#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>

#include "tnoma/ae/system.hpp"
#include "tnoma/ae/train.hpp"

using namespace tnoma;

namespace {

ae::AeConfig base_config(int n_symbols, std::uint64_t seed) {
    ae::AeConfig cfg;
    cfg.variant = ae::ae_variant(5);
    cfg.k_users = 2;
    cfg.n_symbols = n_symbols;
    cfg.pulse = {1.0, 7};
    cfg.offsets = {0.5, 0.0};
    cfg.total_power = 2.0;
    cfg.init_seed = seed;
    return cfg;
}

} // namespace

TEST_CASE("short training collapses the objective" * doctest::timeout(1800)) {
    // seed-averaged smoke run: 2048 frames of 64 symbols, two epochs
    double initial_sum = 0.0, final_sum = 0.0;
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        auto cfg = base_config(64, seed);
        ae::AeSystem sys(cfg);
        ae::TrainConfig tc;
        tc.train_frames = 2048;
        tc.val_frames = 128;
        tc.batch = 16;
        tc.epochs = 2;
        tc.train_snr_db = 30.0;
        tc.seed = seed;
        auto r = ae::train(sys, tc);
        initial_sum += r.initial_ce;
        final_sum += r.final_ce;
        CHECK(r.iterations == 2 * (2048 / 16));
        CHECK(!r.val_ber_per_epoch.empty());
    }
    CHECK(final_sum / 3.0 * 5.0 <= initial_sum / 3.0);
}

TEST_CASE("cross-entropy training beats squared-error training" * doctest::timeout(3600)) {
    auto eval20 = [](ae::LossMode mode) {
        auto cfg = base_config(256, 5);
        cfg.loss = mode;
        ae::AeSystem sys(cfg);
        ae::TrainConfig tc;
        tc.train_frames = 8192;
        tc.val_frames = 128;
        tc.batch = 32;
        tc.epochs = 3;
        tc.train_snr_db = 30.0;
        tc.seed = 5;
        ae::train(sys, tc);
        auto pts = ae::evaluate(sys, {20.0}, 3072, 0.0, 0.0, false, 71);
        return pts[0].ber_avg;
    };
    const double ber_ce = eval20(ae::LossMode::Ce);
    const double ber_mse = eval20(ae::LossMode::MseIdentity);
    MESSAGE("ce ", ber_ce, " mse-identity ", ber_mse);
    CHECK(ber_ce < ber_mse);
}

TEST_CASE("trained power allocator responds to CSI without collapsing" * doctest::timeout(1800)) {
    auto cfg = base_config(128, 9);
    cfg.use_mlp_pa = true;
    cfg.use_mlp_t = true;
    ae::AeSystem sys(cfg);
    ae::TrainConfig tc;
    tc.train_frames = 4096;
    tc.val_frames = 128;
    tc.batch = 32;
    tc.epochs = 2;
    tc.train_snr_db = 20.0;  // the error is injected at this level
    tc.csi_var = 0.01;
    tc.seed = 9;
    ae::train(sys, tc);

    auto colorer = channel::NoiseColorer::build(sys.nominal_bank(), cfg.n_symbols);
    auto batch = ae::make_batch(512, cfg, colorer, 0.0, 0.01, false, 1234, 0);
    auto r = sys.run(batch, 20.0, false, false);
    (void)r;
    // probe the allocator directly across CSI draws
    nn::Tensor csi = nn::Tensor::zeros({512, 4});
    common::Rng rng(77);
    for (auto& v : csi.data) v = rng.gaussian() * 0.7071067811865476;
    auto p = sys.power_allocator()->forward(csi, 2.0, false);
    int inside = 0;
    for (int b = 0; b < 512; ++b) {
        const double frac = p.data[static_cast<std::size_t>(2 * b)] / 2.0;
        CHECK(frac > 0.0);
        CHECK(frac < 1.0);
        if (frac > 0.1 && frac < 0.9) ++inside;
        CHECK(p.data[static_cast<std::size_t>(2 * b)] + p.data[static_cast<std::size_t>(2 * b + 1)] ==
              doctest::Approx(2.0).epsilon(1e-12));
    }
    CHECK(inside >= static_cast<int>(0.9 * 512));
}
