#include "tnoma/ae/system.hpp"

#include <cmath>
#include <stdexcept>

#include "tnoma/channel/apply.hpp"

namespace tnoma::ae {

using nn::Tensor;

FinalAct head_for(LossMode mode) {
    switch (mode) {
        case LossMode::Ce:
        case LossMode::CeQ: return FinalAct::Sigmoid;
        case LossMode::MseIdentity: return FinalAct::Identity;
        case LossMode::MseTanh: return FinalAct::Tanh;
    }
    return FinalAct::Sigmoid;
}

namespace {
enum Stream : std::uint64_t { kBits = 11, kFading = 12, kNoise = 13, kImpair = 14 };
}

FrameBatch make_batch(int batch, const AeConfig& cfg, const channel::NoiseColorer& colorer,
                      double timing_width, double csi_var, bool shared_csi, std::uint64_t seed,
                      std::uint64_t frame_base) {
    const int k = cfg.k_users;
    const int n = cfg.n_symbols;
    FrameBatch fb;
    fb.bits = Tensor::zeros({batch, k, n});
    fb.h.resize(static_cast<std::size_t>(batch));
    fb.imp.resize(static_cast<std::size_t>(batch));
    fb.noise.resize(static_cast<std::size_t>(batch));
    for (int b = 0; b < batch; ++b) {
        const std::uint64_t fidx = frame_base + static_cast<std::uint64_t>(b);
        auto rng_bits = common::Rng::derive(seed, kBits, fidx);
        auto rng_fade = common::Rng::derive(seed, kFading, fidx);
        auto rng_noise = common::Rng::derive(seed, kNoise, fidx);
        auto rng_imp = common::Rng::derive(seed, kImpair, fidx);
        double* row = fb.bits.data.data() + static_cast<std::int64_t>(b) * k * n;
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(k) * n; ++i)
            row[i] = rng_bits.next_u64() & 1 ? 1.0 : -1.0;
        fb.h[static_cast<std::size_t>(b)] = channel::draw_fading(k, rng_fade).h;
        fb.imp[static_cast<std::size_t>(b)] =
            channel::draw_impairments(k, timing_width, csi_var, rng_imp, shared_csi);
        auto& nz = fb.noise[static_cast<std::size_t>(b)];
        nz.resize(static_cast<std::size_t>(k));
        for (int r = 0; r < k; ++r) {
            nz[static_cast<std::size_t>(r)].assign(static_cast<std::size_t>(colorer.dim()), {0.0, 0.0});
            colorer.add_noise(nz[static_cast<std::size_t>(r)], 1.0, rng_noise);
        }
    }
    return fb;
}

AeSystem::AeSystem(const AeConfig& cfg)
    : cfg_(cfg),
      nominal_bank_(channel::CrossCorrBank::build(cfg.pulse, cfg.offsets, 0.0)),
      n_valid_(cfg.n_symbols - 2 * cfg.pulse.half_span()) {
    if (static_cast<int>(cfg.offsets.size()) != cfg.k_users)
        throw std::invalid_argument("AeSystem: offsets must match k_users");
    if (n_valid_ <= 0) throw std::invalid_argument("AeSystem: frame shorter than the ISI span");
    {
        auto rng = common::Rng::derive(cfg.init_seed, 100);
        encoder_ = std::make_unique<Encoder>(cfg.variant, cfg.k_users, cfg.skip_a, rng);
    }
    const FinalAct head = head_for(cfg.loss);
    for (int r = 0; r < cfg.k_users; ++r) {
        auto rng = common::Rng::derive(cfg.init_seed, 200 + static_cast<std::uint64_t>(r));
        decoders_.push_back(std::make_unique<Decoder>(cfg.variant, cfg.k_users, r, head, cfg.skip_b,
                                                      cfg.skip_c, rng));
    }
    if (cfg.use_mlp_pa) {
        auto rng = common::Rng::derive(cfg.init_seed, 300);
        pa_ = std::make_unique<MlpPowerAllocator>(cfg.k_users, cfg.pa_h1, cfg.pa_h2, cfg.pa_h3, rng);
    }
    if (cfg.use_mlp_t) {
        for (int r = 0; r < cfg.k_users; ++r) {
            auto rng = common::Rng::derive(cfg.init_seed, 400 + static_cast<std::uint64_t>(r));
            combiners_.push_back(std::make_unique<MlpCombiner>(cfg.t_h1, cfg.t_h2, rng));
        }
    }
}

AeSystem::StepResult AeSystem::run(const FrameBatch& batch, double snr_db, bool training,
                                   bool do_backward, bool clip_qgrad) {
    const std::int64_t b_n = batch.batch();
    const int k = cfg_.k_users;
    const int n = cfg_.n_symbols;
    const int nv = n_valid_;
    const std::int64_t knv = static_cast<std::int64_t>(k) * nv;
    const double n0 = channel::n0_from_snr_db(snr_db);
    const double noise_scale = std::sqrt(n0);

    // transmit powers
    Tensor powers;
    Tensor csi_tx;
    if (pa_) {
        csi_tx = Tensor::zeros({b_n, 2 * k});
        for (std::int64_t b = 0; b < b_n; ++b)
            for (int u = 0; u < k; ++u) {
                const auto hh = batch.h[static_cast<std::size_t>(b)][static_cast<std::size_t>(u)] +
                                batch.imp[static_cast<std::size_t>(b)].csi_error_tx[static_cast<std::size_t>(u)];
                csi_tx.data[static_cast<std::size_t>(b * 2 * k + 2 * u)] = hh.real();
                csi_tx.data[static_cast<std::size_t>(b * 2 * k + 2 * u + 1)] = hh.imag();
            }
        powers = pa_->forward(csi_tx, cfg_.total_power, training);
    } else {
        powers = Tensor::zeros({b_n, k});
        for (auto& v : powers.data) v = cfg_.total_power / static_cast<double>(k);
    }

    Tensor v = encoder_->forward(batch.bits, powers, training);

    // channel: shared transmit waveform, per-user fading, combining
    gv_.assign(static_cast<std::size_t>(b_n), std::vector<double>(static_cast<std::size_t>(knv)));
    frame_bank_.clear();
    frame_bank_.resize(static_cast<std::size_t>(b_n));
    y_pre_re_.assign(static_cast<std::size_t>(k), Tensor::zeros({b_n, knv}));
    y_pre_im_.assign(static_cast<std::size_t>(k), Tensor::zeros({b_n, knv}));

    std::vector<double> x_int(static_cast<std::size_t>(k) * n);
    for (std::int64_t b = 0; b < b_n; ++b) {
        const double* vb = v.data.data() + b * k * n;
        for (int nn2 = 0; nn2 < n; ++nn2)
            for (int u = 0; u < k; ++u)
                x_int[static_cast<std::size_t>(nn2 * k + u)] = vb[static_cast<std::int64_t>(u) * n + nn2];
        const double eps = batch.imp[static_cast<std::size_t>(b)].timing_error;
        if (eps != 0.0)
            frame_bank_[static_cast<std::size_t>(b)] = std::make_unique<channel::CrossCorrBank>(
                channel::CrossCorrBank::build(cfg_.pulse, cfg_.offsets, eps));
        const auto& bank = frame_bank_[static_cast<std::size_t>(b)] ? *frame_bank_[static_cast<std::size_t>(b)]
                                                                    : nominal_bank_;
        channel::banded_apply(bank, n, x_int, gv_[static_cast<std::size_t>(b)]);
        for (int r = 0; r < k; ++r) {
            const auto h = batch.h[static_cast<std::size_t>(b)][static_cast<std::size_t>(r)];
            const auto& nz = batch.noise[static_cast<std::size_t>(b)][static_cast<std::size_t>(r)];
            double* yr = y_pre_re_[static_cast<std::size_t>(r)].data.data() + b * knv;
            double* yi = y_pre_im_[static_cast<std::size_t>(r)].data.data() + b * knv;
            const double* g = gv_[static_cast<std::size_t>(b)].data();
            for (std::int64_t i = 0; i < knv; ++i) {
                yr[i] = h.real() * g[i] + noise_scale * nz[static_cast<std::size_t>(i)].real();
                yi[i] = h.imag() * g[i] + noise_scale * nz[static_cast<std::size_t>(i)].imag();
            }
        }
    }

    // combining factors
    q_.assign(static_cast<std::size_t>(k), Tensor());
    std::vector<Tensor> csi_rx(static_cast<std::size_t>(k));
    for (int r = 0; r < k; ++r) {
        if (!combiners_.empty()) {
            csi_rx[static_cast<std::size_t>(r)] = Tensor::zeros({b_n, 2});
            for (std::int64_t b = 0; b < b_n; ++b) {
                const auto hh = batch.h[static_cast<std::size_t>(b)][static_cast<std::size_t>(r)] +
                                batch.imp[static_cast<std::size_t>(b)].csi_error_rx[static_cast<std::size_t>(r)];
                csi_rx[static_cast<std::size_t>(r)].data[static_cast<std::size_t>(2 * b)] = hh.real();
                csi_rx[static_cast<std::size_t>(r)].data[static_cast<std::size_t>(2 * b + 1)] = hh.imag();
            }
            q_[static_cast<std::size_t>(r)] = combiners_[static_cast<std::size_t>(r)]->forward(csi_rx[static_cast<std::size_t>(r)]);
        } else {
            q_[static_cast<std::size_t>(r)] = Tensor::zeros({b_n, 2});
            for (std::int64_t b = 0; b < b_n; ++b) {
                const auto hh = batch.h[static_cast<std::size_t>(b)][static_cast<std::size_t>(r)] +
                                batch.imp[static_cast<std::size_t>(b)].csi_error_rx[static_cast<std::size_t>(r)];
                const double h2 = std::norm(hh);
                if (h2 <= 0.0) throw std::invalid_argument("AeSystem: zero CSI estimate with the default combiner");
                q_[static_cast<std::size_t>(r)].data[static_cast<std::size_t>(2 * b)] = hh.real() / h2;
                q_[static_cast<std::size_t>(r)].data[static_cast<std::size_t>(2 * b + 1)] = -hh.imag() / h2;
            }
        }
    }

    // per-user decode
    StepResult out;
    out.est = Tensor::zeros({b_n, k, n});
    std::vector<Tensor> est_user(static_cast<std::size_t>(k));
    for (int r = 0; r < k; ++r) {
        Tensor yre = Tensor::zeros({b_n, knv});
        Tensor yim = Tensor::zeros({b_n, knv});
        for (std::int64_t b = 0; b < b_n; ++b) {
            const double qr = q_[static_cast<std::size_t>(r)].data[static_cast<std::size_t>(2 * b)];
            const double qi = q_[static_cast<std::size_t>(r)].data[static_cast<std::size_t>(2 * b + 1)];
            const double* pr = y_pre_re_[static_cast<std::size_t>(r)].data.data() + b * knv;
            const double* pi = y_pre_im_[static_cast<std::size_t>(r)].data.data() + b * knv;
            double* tr = yre.data.data() + b * knv;
            double* ti = yim.data.data() + b * knv;
            for (std::int64_t i = 0; i < knv; ++i) {
                tr[i] = qr * pr[i] - qi * pi[i];
                ti[i] = qr * pi[i] + qi * pr[i];
            }
        }
        est_user[static_cast<std::size_t>(r)] = decoders_[static_cast<std::size_t>(r)]->forward(yre, yim, n, training);
        const double* src = est_user[static_cast<std::size_t>(r)].data.data();
        for (std::int64_t b = 0; b < b_n; ++b)
            for (int i = 0; i < n; ++i)
                out.est.data[static_cast<std::size_t>((b * k + r) * n + i)] = src[b * n + i];
    }

    // losses
    Tensor d_est;
    switch (cfg_.loss) {
        case LossMode::Ce: {
            auto ce = nn::ce_loss(out.est, batch.bits);
            out.loss_ce = ce.value;
            out.loss_total = ce.value;
            d_est = std::move(ce.grad);
            break;
        }
        case LossMode::CeQ: {
            auto ce = nn::ce_loss(out.est, batch.bits);
            auto q = nn::q_loss(out.est, batch.bits, cfg_.kappa, clip_qgrad);
            out.loss_ce = ce.value;
            out.loss_q = q.value;
            out.q_skipped = q.skipped;
            out.loss_total = nn::combined_loss(ce.value, q.value, cfg_.alpha);
            d_est = std::move(ce.grad);
            if (!q.skipped)
                for (std::size_t i = 0; i < d_est.data.size(); ++i) d_est.data[i] += cfg_.alpha * q.grad.data[i];
            break;
        }
        case LossMode::MseIdentity:
        case LossMode::MseTanh: {
            auto mse = nn::mse_loss(out.est, batch.bits);
            out.loss_mse = mse.value;
            out.loss_total = mse.value;
            d_est = std::move(mse.grad);
            break;
        }
    }
    if (!std::isfinite(out.loss_total)) throw std::runtime_error("AeSystem: loss diverged (non-finite)");
    if (!do_backward) return out;

    // backward through decoders, combiners, channel, encoder, allocator
    std::vector<double> dgv(static_cast<std::size_t>(knv));
    Tensor dv = Tensor::zeros({b_n, k, n});
    std::vector<Tensor> dq(static_cast<std::size_t>(k));
    std::vector<std::vector<double>> dgv_all(static_cast<std::size_t>(b_n),
                                             std::vector<double>(static_cast<std::size_t>(knv), 0.0));
    for (int r = 0; r < k; ++r) {
        Tensor d_user = Tensor::zeros({b_n, n});
        for (std::int64_t b = 0; b < b_n; ++b)
            for (int i = 0; i < n; ++i)
                d_user.data[static_cast<std::size_t>(b * n + i)] =
                    d_est.data[static_cast<std::size_t>((b * k + r) * n + i)];
        decoders_[static_cast<std::size_t>(r)]->backward(d_user);
        const Tensor& dyre = decoders_[static_cast<std::size_t>(r)]->y_re_grad();
        const Tensor& dyim = decoders_[static_cast<std::size_t>(r)]->y_im_grad();

        dq[static_cast<std::size_t>(r)] = Tensor::zeros({b_n, 2});
        for (std::int64_t b = 0; b < b_n; ++b) {
            const double qr = q_[static_cast<std::size_t>(r)].data[static_cast<std::size_t>(2 * b)];
            const double qi = q_[static_cast<std::size_t>(r)].data[static_cast<std::size_t>(2 * b + 1)];
            const double* pr = y_pre_re_[static_cast<std::size_t>(r)].data.data() + b * knv;
            const double* pi = y_pre_im_[static_cast<std::size_t>(r)].data.data() + b * knv;
            const double* gr = dyre.data.data() + b * knv;
            const double* gi = dyim.data.data() + b * knv;
            const auto h = batch.h[static_cast<std::size_t>(b)][static_cast<std::size_t>(r)];
            double acc_qr = 0.0, acc_qi = 0.0;
            double* dg = dgv_all[static_cast<std::size_t>(b)].data();
            for (std::int64_t i = 0; i < knv; ++i) {
                // y' = q * y: back through the complex product
                const double dyr = qr * gr[i] + qi * gi[i];
                const double dyi = -qi * gr[i] + qr * gi[i];
                acc_qr += pr[i] * gr[i] + pi[i] * gi[i];
                acc_qi += -pi[i] * gr[i] + pr[i] * gi[i];
                dg[i] += h.real() * dyr + h.imag() * dyi;
            }
            dq[static_cast<std::size_t>(r)].data[static_cast<std::size_t>(2 * b)] = acc_qr;
            dq[static_cast<std::size_t>(r)].data[static_cast<std::size_t>(2 * b + 1)] = acc_qi;
        }
        if (!combiners_.empty()) combiners_[static_cast<std::size_t>(r)]->backward(dq[static_cast<std::size_t>(r)]);
    }

    std::vector<double> dx_int(static_cast<std::size_t>(k) * n);
    for (std::int64_t b = 0; b < b_n; ++b) {
        const auto& bank = frame_bank_[static_cast<std::size_t>(b)] ? *frame_bank_[static_cast<std::size_t>(b)]
                                                                    : nominal_bank_;
        channel::banded_apply_adjoint(bank, n, dgv_all[static_cast<std::size_t>(b)], dx_int);
        double* dvb = dv.data.data() + b * k * n;
        for (int nn2 = 0; nn2 < n; ++nn2)
            for (int u = 0; u < k; ++u)
                dvb[static_cast<std::int64_t>(u) * n + nn2] = dx_int[static_cast<std::size_t>(nn2 * k + u)];
    }

    encoder_->backward(dv);
    if (pa_) pa_->backward(encoder_->powers_grad());
    return out;
}

void AeSystem::count_errors(const Tensor& est, const Tensor& bits, FinalAct head,
                            std::vector<std::uint64_t>& err, std::vector<std::uint64_t>& cnt) {
    const std::int64_t b_n = est.dim(0), k = est.dim(1), n = est.dim(2);
    err.assign(static_cast<std::size_t>(k), 0);
    cnt.assign(static_cast<std::size_t>(k), 0);
    const double thr = head == FinalAct::Sigmoid ? 0.5 : 0.0;
    for (std::int64_t b = 0; b < b_n; ++b)
        for (std::int64_t u = 0; u < k; ++u)
            for (std::int64_t i = 0; i < n; ++i) {
                const bool dec = est.data[static_cast<std::size_t>((b * k + u) * n + i)] > thr;
                const bool tx = bits.data[static_cast<std::size_t>((b * k + u) * n + i)] > 0.0;
                ++cnt[static_cast<std::size_t>(u)];
                if (dec != tx) ++err[static_cast<std::size_t>(u)];
            }
}

std::vector<nn::Tensor*> AeSystem::params() {
    std::vector<Tensor*> p = encoder_->params();
    for (auto& d : decoders_) {
        auto dp = d->params();
        p.insert(p.end(), dp.begin(), dp.end());
    }
    if (pa_) {
        auto pp = pa_->params();
        p.insert(p.end(), pp.begin(), pp.end());
    }
    for (auto& c : combiners_) {
        auto cp = c->params();
        p.insert(p.end(), cp.begin(), cp.end());
    }
    return p;
}

std::vector<nn::NamedArray> AeSystem::state_arrays() {
    std::vector<nn::NamedArray> arrays;
    auto add_params = [&](const std::string& prefix, std::vector<Tensor*> ps) {
        int i = 0;
        for (auto* t : ps) {
            nn::NamedArray a;
            a.name = prefix + ".p" + std::to_string(i++);
            a.shape = t->shape;
            a.data = t->data;
            arrays.push_back(std::move(a));
        }
    };
    auto add_state = [&](const std::string& prefix,
                         std::vector<std::pair<std::string, std::vector<double>*>> st) {
        for (auto& [name, vec] : st) {
            nn::NamedArray a;
            a.name = prefix + "." + name;
            a.shape = {static_cast<std::int64_t>(vec->size())};
            a.data = *vec;
            arrays.push_back(std::move(a));
        }
    };
    nn::NamedArray meta;
    meta.name = "meta";
    meta.shape = {6};
    meta.data = {static_cast<double>(cfg_.variant.id), static_cast<double>(cfg_.k_users),
                 static_cast<double>(cfg_.n_symbols), static_cast<double>(static_cast<int>(cfg_.loss)),
                 cfg_.use_mlp_pa ? 1.0 : 0.0, cfg_.use_mlp_t ? 1.0 : 0.0};
    arrays.push_back(std::move(meta));
    add_params("enc", encoder_->params());
    add_state("enc", encoder_->norm_state());
    for (std::size_t r = 0; r < decoders_.size(); ++r) {
        add_params("dec" + std::to_string(r), decoders_[r]->params());
        add_state("dec" + std::to_string(r), decoders_[r]->norm_state());
    }
    if (pa_) {
        add_params("pa", pa_->params());
        add_state("pa", pa_->norm_state());
    }
    for (std::size_t r = 0; r < combiners_.size(); ++r) add_params("t" + std::to_string(r), combiners_[r]->params());
    return arrays;
}

void AeSystem::load_state(const std::vector<nn::NamedArray>& arrays) {
    auto find = [&](const std::string& name) -> const nn::NamedArray* {
        for (const auto& a : arrays)
            if (a.name == name) return &a;
        return nullptr;
    };
    const auto* meta = find("meta");
    if (meta && meta->data.size() >= 3) {
        if (static_cast<int>(meta->data[0]) != cfg_.variant.id ||
            static_cast<int>(meta->data[1]) != cfg_.k_users ||
            static_cast<int>(meta->data[2]) != cfg_.n_symbols)
            throw std::runtime_error("AeSystem: checkpoint metadata does not match the configuration");
    }

    // rebuild target pointer maps in the same order state_arrays() emits
    std::vector<std::pair<std::string, Tensor*>> param_targets;
    auto map_params = [&](const std::string& prefix, std::vector<Tensor*> ps) {
        int i = 0;
        for (auto* t : ps) param_targets.emplace_back(prefix + ".p" + std::to_string(i++), t);
    };
    std::vector<std::pair<std::string, std::vector<double>*>> state_targets;
    auto map_state = [&](const std::string& prefix,
                         std::vector<std::pair<std::string, std::vector<double>*>> st) {
        for (auto& [name, vec] : st) state_targets.emplace_back(prefix + "." + name, vec);
    };
    map_params("enc", encoder_->params());
    map_state("enc", encoder_->norm_state());
    for (std::size_t r = 0; r < decoders_.size(); ++r) {
        map_params("dec" + std::to_string(r), decoders_[r]->params());
        map_state("dec" + std::to_string(r), decoders_[r]->norm_state());
    }
    if (pa_) {
        map_params("pa", pa_->params());
        map_state("pa", pa_->norm_state());
    }
    for (std::size_t r = 0; r < combiners_.size(); ++r) map_params("t" + std::to_string(r), combiners_[r]->params());

    for (auto& [name, t] : param_targets) {
        const auto* a = find(name);
        if (!a) throw std::runtime_error("AeSystem: checkpoint missing array " + name);
        if (a->data.size() != t->data.size()) throw std::runtime_error("AeSystem: shape mismatch for " + name);
        t->data = a->data;
    }
    for (auto& [name, vec] : state_targets) {
        const auto* a = find(name);
        if (!a) throw std::runtime_error("AeSystem: checkpoint missing array " + name);
        if (a->data.size() != vec->size()) throw std::runtime_error("AeSystem: shape mismatch for " + name);
        *vec = a->data;
    }
}

void AeSystem::reset_macs() {
    encoder_->reset_macs();
    for (auto& d : decoders_) d->reset_macs();
    if (pa_) pa_->reset_macs();
    for (auto& c : combiners_) c->reset_macs();
}

} // namespace tnoma::ae
