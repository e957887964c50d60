#include "tnoma/ae/train.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "tnoma/nn/adam.hpp"

namespace tnoma::ae {

double timing_width_abs(const AeConfig& cfg, double frac) {
    if (frac <= 0.0) return 0.0;
    const double design = cfg.offsets.front() - cfg.offsets.back();
    return frac * std::fabs(design);
}

TrainResult train(AeSystem& sys, const TrainConfig& cfg) {
    if (cfg.train_frames < cfg.batch) throw std::invalid_argument("train: need at least one full batch");
    const AeConfig& sc = sys.config();
    auto colorer = channel::NoiseColorer::build(sys.nominal_bank(), sc.n_symbols);
    const double width = timing_width_abs(sc, cfg.timing_width_frac);
    const int batches = cfg.train_frames / cfg.batch;

    nn::Adam opt(sys.params(), {.lr = cfg.lr});

    std::FILE* curve = nullptr;
    if (!cfg.curve_path.empty()) {
        curve = std::fopen(cfg.curve_path.c_str(), "w");
        if (!curve) throw std::runtime_error("train: cannot open " + cfg.curve_path);
        std::fprintf(curve, "iteration,loss_ce,loss_q,ber_val\n");
    }

    TrainResult res;
    const int head_n = std::min(10, batches);
    double head_sum = 0.0, tail_sum = 0.0;
    int tail_count = 0;
    std::uint64_t frame_counter = 0;
    int iter = 0;

    const std::uint64_t val_seed = cfg.seed ^ 0x76616c6964ULL;
    auto validate = [&]() -> double {
        std::vector<std::uint64_t> err, cnt;
        std::uint64_t terr = 0, tcnt = 0;
        const int vb = 64;
        std::uint64_t vbase = 0;
        for (int done = 0; done < cfg.val_frames; done += vb) {
            const int take = std::min(vb, cfg.val_frames - done);
            auto batch = make_batch(take, sc, colorer, width, cfg.csi_var, cfg.shared_csi, val_seed, vbase);
            vbase += static_cast<std::uint64_t>(take);
            auto r = sys.run(batch, cfg.train_snr_db, false, false);
            AeSystem::count_errors(r.est, batch.bits, head_for(sc.loss), err, cnt);
            for (std::size_t u = 0; u < err.size(); ++u) {
                terr += err[u];
                tcnt += cnt[u];
            }
        }
        return tcnt ? static_cast<double>(terr) / static_cast<double>(tcnt) : 0.0;
    };

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        for (int bi = 0; bi < batches; ++bi) {
            auto batch = make_batch(cfg.batch, sc, colorer, width, cfg.csi_var, cfg.shared_csi,
                                    cfg.seed, frame_counter);
            frame_counter += static_cast<std::uint64_t>(cfg.batch);
            opt.zero_grad();
            AeSystem::StepResult r;
            try {
                r = sys.run(batch, cfg.train_snr_db, true, true);
            } catch (const std::runtime_error&) {
                if (!cfg.divergence_dump.empty()) nn::save_checkpoint(cfg.divergence_dump, sys.state_arrays());
                throw;
            }
            opt.step();
            ++iter;
            if (iter <= head_n) head_sum += r.loss_total;
            if (epoch == cfg.epochs - 1 && bi >= batches - head_n) {
                tail_sum += r.loss_total;
                ++tail_count;
            }
            if (curve && (iter % cfg.curve_every == 0))
                std::fprintf(curve, "%d,%.10g,%.10g,\n", iter, r.loss_ce, r.loss_q);
        }
        const double vber = validate();
        res.val_ber_per_epoch.push_back(vber);
        if (curve) std::fprintf(curve, "%d,,,%.10g\n", iter, vber);
    }
    if (curve) std::fclose(curve);

    res.initial_ce = head_sum / static_cast<double>(head_n);
    res.final_ce = tail_count ? tail_sum / static_cast<double>(tail_count) : res.initial_ce;
    res.iterations = iter;
    return res;
}

std::vector<EvalPoint> evaluate(AeSystem& sys, const std::vector<double>& snr_db, int frames,
                                double timing_width_frac, double csi_var, bool shared_csi,
                                std::uint64_t seed, int batch) {
    const AeConfig& sc = sys.config();
    auto colorer = channel::NoiseColorer::build(sys.nominal_bank(), sc.n_symbols);
    const double width = timing_width_abs(sc, timing_width_frac);

    std::vector<EvalPoint> out;
    for (std::size_t si = 0; si < snr_db.size(); ++si) {
        std::vector<std::uint64_t> err_total(static_cast<std::size_t>(sc.k_users), 0);
        std::vector<std::uint64_t> cnt_total(static_cast<std::size_t>(sc.k_users), 0);
        std::uint64_t base = static_cast<std::uint64_t>(si) * static_cast<std::uint64_t>(frames);
        for (int done = 0; done < frames; done += batch) {
            const int take = std::min(batch, frames - done);
            auto fb = make_batch(take, sc, colorer, width, csi_var, shared_csi, seed, base);
            base += static_cast<std::uint64_t>(take);
            auto r = sys.run(fb, snr_db[si], false, false);
            std::vector<std::uint64_t> err, cnt;
            AeSystem::count_errors(r.est, fb.bits, head_for(sc.loss), err, cnt);
            for (std::size_t u = 0; u < err.size(); ++u) {
                err_total[u] += err[u];
                cnt_total[u] += cnt[u];
            }
        }
        EvalPoint pt;
        pt.snr_db = snr_db[si];
        pt.ber_user.resize(err_total.size());
        pt.ci95_user.resize(err_total.size());
        std::uint64_t terr = 0, tcnt = 0;
        for (std::size_t u = 0; u < err_total.size(); ++u) {
            const double p = cnt_total[u] ? static_cast<double>(err_total[u]) / static_cast<double>(cnt_total[u]) : 0.0;
            pt.ber_user[u] = p;
            pt.ci95_user[u] = cnt_total[u]
                                  ? 1.96 * std::sqrt(std::max(p * (1.0 - p), 1e-300) / static_cast<double>(cnt_total[u]))
                                  : 0.0;
            terr += err_total[u];
            tcnt += cnt_total[u];
        }
        const double pa = tcnt ? static_cast<double>(terr) / static_cast<double>(tcnt) : 0.0;
        pt.ber_avg = pa;
        pt.ci95_avg = tcnt ? 1.96 * std::sqrt(std::max(pa * (1.0 - pa), 1e-300) / static_cast<double>(tcnt)) : 0.0;
        pt.bits = tcnt;
        out.push_back(std::move(pt));
    }
    return out;
}

} // namespace tnoma::ae
