#include "tnoma/svd/simulate.hpp"

#include <cmath>
#include <stdexcept>

#include "tnoma/channel/apply.hpp"
#include "tnoma/channel/impairments.hpp"
#include "tnoma/svd/codec.hpp"

namespace tnoma::svd {

namespace {
enum Stream : std::uint64_t { kBits = 1, kFading = 2, kNoise = 3, kImpair = 4 };
}

std::vector<BerPoint> simulate_svd_ber(const SvdBerConfig& cfg) {
    if (cfg.frames <= 0) throw std::invalid_argument("simulate_svd_ber: frames must be > 0");
    const int k_users = cfg.k_users;
    const int n = cfg.n_symbols;
    if (static_cast<int>(cfg.offsets.size()) != k_users)
        throw std::invalid_argument("simulate_svd_ber: offsets must match k_users");

    auto nominal = channel::CrossCorrBank::build(cfg.pulse, cfg.offsets, 0.0);
    auto gmat = channel::ChannelMatrix::build(nominal, n);
    auto codec = SvdCodec::build(gmat);
    auto colorer = channel::NoiseColorer::build(nominal, n);
    const int nv = gmat.n_valid();
    const std::size_t slots = static_cast<std::size_t>(k_users) * n;

    std::vector<BerPoint> out;
    out.reserve(cfg.snr_db.size());
    for (std::size_t si = 0; si < cfg.snr_db.size(); ++si) {
        const double snr_db = cfg.snr_db[si];
        const double n0 = channel::n0_from_snr_db(snr_db);
        std::vector<double> noise_var(static_cast<std::size_t>(k_users), n0);

        std::vector<std::uint64_t> err(static_cast<std::size_t>(k_users), 0);
        std::vector<std::uint64_t> cnt(static_cast<std::size_t>(k_users), 0);

        for (int f = 0; f < cfg.frames; ++f) {
            const std::uint64_t fidx = static_cast<std::uint64_t>(si) * cfg.frames + f;
            auto rng_bits = common::Rng::derive(cfg.seed, kBits, fidx);
            auto rng_fade = common::Rng::derive(cfg.seed, kFading, fidx);
            auto rng_noise = common::Rng::derive(cfg.seed, kNoise, fidx);
            auto rng_imp = common::Rng::derive(cfg.seed, kImpair, fidx);

            std::vector<double> x(slots);
            for (auto& b : x) b = rng_bits.next_u64() & 1 ? 1.0 : -1.0;

            auto fading = channel::draw_fading(k_users, rng_fade);
            if (cfg.fixed_unit_fading)
                for (auto& h : fading.h) h = 1.0;
            auto imp = channel::draw_impairments(k_users, cfg.timing_width, cfg.csi_var, rng_imp,
                                                 cfg.shared_tx_rx_csi);

            std::vector<std::complex<double>> h_tx(static_cast<std::size_t>(k_users));
            for (int u = 0; u < k_users; ++u)
                h_tx[static_cast<std::size_t>(u)] = fading.h[static_cast<std::size_t>(u)] +
                                                    imp.csi_error_tx[static_cast<std::size_t>(u)];

            auto wf = waterfill(codec.lambdas(), h_tx, noise_var, cfg.total_power, n, k_users);
            auto v = codec.encode(x, wf.powers);

            // the frame passes through the perturbed channel; the codec stays nominal
            std::vector<double> gv(static_cast<std::size_t>(k_users) * nv);
            if (imp.timing_error != 0.0) {
                auto bank_eps = channel::CrossCorrBank::build(cfg.pulse, cfg.offsets, imp.timing_error);
                channel::banded_apply(bank_eps, n, v, gv);
            } else {
                gmat.apply(v, gv);
            }

            for (int r = 0; r < k_users; ++r) {
                const auto h = fading.h[static_cast<std::size_t>(r)];
                std::vector<std::complex<double>> y(gv.size());
                for (std::size_t i = 0; i < gv.size(); ++i) y[i] = h * gv[i];
                colorer.add_noise(y, n0, rng_noise);

                const auto h_hat = h + imp.csi_error_rx[static_cast<std::size_t>(r)];
                auto dec = codec.decode(y, wf.powers, h_hat);
                for (std::size_t i = static_cast<std::size_t>(r); i < slots; i += static_cast<std::size_t>(k_users)) {
                    if (!dec.data_bearing[i]) continue;
                    ++cnt[static_cast<std::size_t>(r)];
                    if ((dec.bits[i] > 0) != (x[i] > 0)) ++err[static_cast<std::size_t>(r)];
                }
            }
        }

        BerPoint pt;
        pt.snr_db = snr_db;
        pt.ber_user.resize(static_cast<std::size_t>(k_users));
        pt.ci95_user.resize(static_cast<std::size_t>(k_users));
        std::uint64_t terr = 0, tcnt = 0;
        for (int u = 0; u < k_users; ++u) {
            const double p = cnt[static_cast<std::size_t>(u)] ? static_cast<double>(err[static_cast<std::size_t>(u)]) /
                                                                     static_cast<double>(cnt[static_cast<std::size_t>(u)])
                                                               : 0.0;
            pt.ber_user[static_cast<std::size_t>(u)] = p;
            pt.ci95_user[static_cast<std::size_t>(u)] =
                cnt[static_cast<std::size_t>(u)]
                    ? 1.96 * std::sqrt(std::max(p * (1.0 - p), 1e-300) / static_cast<double>(cnt[static_cast<std::size_t>(u)]))
                    : 0.0;
            terr += err[static_cast<std::size_t>(u)];
            tcnt += cnt[static_cast<std::size_t>(u)];
        }
        const double pa = tcnt ? static_cast<double>(terr) / static_cast<double>(tcnt) : 0.0;
        pt.ber_avg = pa;
        pt.ci95_avg = tcnt ? 1.96 * std::sqrt(std::max(pa * (1.0 - pa), 1e-300) / static_cast<double>(tcnt)) : 0.0;
        pt.bits_counted = tcnt;
        out.push_back(std::move(pt));
    }
    return out;
}

} // namespace tnoma::svd
