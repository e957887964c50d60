#include "tnoma/harness/run.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "tnoma/ae/train.hpp"
#include "tnoma/analysis/ber_theory.hpp"
#include "tnoma/analysis/complexity.hpp"
#include "tnoma/analysis/rates.hpp"
#include "tnoma/channel/apply.hpp"
#include "tnoma/harness/csv.hpp"
#include "tnoma/svd/codec.hpp"
#include "tnoma/svd/simulate.hpp"

namespace tnoma::harness {

namespace {

std::vector<double> make_offsets(int k_users, double tau) {
    std::vector<double> offs(static_cast<std::size_t>(k_users));
    for (int u = 0; u < k_users; ++u) offs[static_cast<std::size_t>(u)] = tau * (k_users - 1 - u);
    return offs;
}

channel::PulseSpec pulse_from(const ExperimentConfig& c) { return {c.beta, c.pulse_span}; }

ae::AeConfig ae_config_from(const ExperimentConfig& c) {
    ae::AeConfig a;
    a.variant = ae::ae_variant(c.variant);
    a.k_users = c.k_users;
    a.n_symbols = c.n_symbols;
    a.pulse = pulse_from(c);
    a.offsets = make_offsets(c.k_users, c.tau_design);
    a.total_power = c.total_power;
    if (c.loss == "ce") a.loss = ae::LossMode::Ce;
    else if (c.loss == "mse-identity") a.loss = ae::LossMode::MseIdentity;
    else if (c.loss == "mse-tanh") a.loss = ae::LossMode::MseTanh;
    else a.loss = ae::LossMode::CeQ;
    a.alpha = c.alpha;
    a.kappa = c.kappa;
    a.use_mlp_pa = c.mlp_pa;
    a.use_mlp_t = c.mlp_t;
    a.skip_a = c.skip_a;
    a.skip_b = c.skip_b;
    a.skip_c = c.skip_c;
    a.pa_h1 = c.pa_h1;
    a.pa_h2 = c.pa_h2;
    a.pa_h3 = c.pa_h3;
    a.t_h1 = c.t_h1;
    a.t_h2 = c.t_h2;
    a.init_seed = c.seed;
    return a;
}

void eval_rows(CsvWriter& csv, const ExperimentConfig& cfg, const std::string& hash,
               const std::vector<ae::EvalPoint>& points) {
    for (const auto& pt : points) {
        for (std::size_t u = 0; u < pt.ber_user.size(); ++u)
            csv.write({to_string(cfg.scenario), pt.snr_db, std::to_string(u + 1), "ber",
                       pt.ber_user[u], pt.ci95_user[u], static_cast<std::uint64_t>(cfg.frames),
                       cfg.seed, hash});
        csv.write({to_string(cfg.scenario), pt.snr_db, "avg", "ber", pt.ber_avg, pt.ci95_avg,
                   static_cast<std::uint64_t>(cfg.frames), cfg.seed, hash});
    }
}

void run_svd_ber(const ExperimentConfig& cfg, CsvWriter& csv, const std::string& hash) {
    svd::SvdBerConfig sc;
    sc.k_users = cfg.k_users;
    sc.n_symbols = cfg.n_symbols;
    sc.pulse = pulse_from(cfg);
    sc.offsets = make_offsets(cfg.k_users, cfg.tau_design);
    sc.snr_db = cfg.snr_db;
    sc.frames = cfg.frames;
    sc.seed = cfg.seed;
    sc.total_power = cfg.total_power;
    sc.timing_width = cfg.timing_width * std::fabs(cfg.tau_design);
    sc.csi_var = cfg.csi_var;
    sc.shared_tx_rx_csi = cfg.shared_csi;
    sc.fixed_unit_fading = cfg.fixed_fading;
    auto points = svd::simulate_svd_ber(sc);
    for (const auto& pt : points) {
        for (std::size_t u = 0; u < pt.ber_user.size(); ++u)
            csv.write({to_string(cfg.scenario), pt.snr_db, std::to_string(u + 1), "ber",
                       pt.ber_user[u], pt.ci95_user[u], pt.bits_counted, cfg.seed, hash});
        csv.write({to_string(cfg.scenario), pt.snr_db, "avg", "ber", pt.ber_avg, pt.ci95_avg,
                   pt.bits_counted, cfg.seed, hash});
    }
}

void run_user_selection(const ExperimentConfig& cfg, CsvWriter& csv, const std::string& hash) {
    auto bank = channel::CrossCorrBank::build(pulse_from(cfg), make_offsets(cfg.k_users, cfg.tau_design), 0.0);
    const double g21 = bank.interference_gain(1, 0);
    for (double snr : cfg.snr_db) {
        const double abar = std::pow(10.0, snr / 10.0);
        auto s = analysis::mc_ber_strong(abar, abar, 1.0, 2.0, cfg.power_strong, cfg.mc_draws, cfg.seed);
        auto w = analysis::mc_ber_weak(abar, abar, 1.0, 2.0, cfg.power_strong, cfg.power_weak, g21,
                                       cfg.mc_draws, cfg.seed + 1);
        auto one = analysis::mc_ber_single(abar, cfg.mc_draws, cfg.seed + 2);
        csv.write({to_string(cfg.scenario), snr, "strong", "ber", s.mean, 1.96 * s.std_err,
                   static_cast<std::uint64_t>(cfg.mc_draws), cfg.seed, hash});
        csv.write({to_string(cfg.scenario), snr, "weak", "ber", w.mean, 1.96 * w.std_err,
                   static_cast<std::uint64_t>(cfg.mc_draws), cfg.seed, hash});
        csv.write({to_string(cfg.scenario), snr, "single", "ber", one.mean, 1.96 * one.std_err,
                   static_cast<std::uint64_t>(cfg.mc_draws), cfg.seed, hash});
    }
}

void run_ber_theory(const ExperimentConfig& cfg, CsvWriter& csv, const std::string& hash) {
    auto bank = channel::CrossCorrBank::build(pulse_from(cfg), make_offsets(cfg.k_users, cfg.tau_design), 0.0);
    const double g21 = bank.interference_gain(1, 0);
    for (double snr : cfg.snr_db) {
        const double abar = std::pow(10.0, snr / 10.0);
        const double s = analysis::ber_strong_closed(abar, abar, 1.0, 2.0, cfg.power_strong);
        const double w = analysis::ber_weak_numeric(abar, abar, 1.0, 2.0, cfg.power_strong,
                                                    cfg.power_weak, g21);
        const double one = analysis::single_user_ber_rayleigh(abar);
        csv.write({to_string(cfg.scenario), snr, "strong", "ber", s, 0.0, 0, cfg.seed, hash});
        csv.write({to_string(cfg.scenario), snr, "weak", "ber", w, 0.0, 0, cfg.seed, hash});
        csv.write({to_string(cfg.scenario), snr, "single", "ber", one, 0.0, 0, cfg.seed, hash});
    }
}

void run_rates(const ExperimentConfig& cfg, CsvWriter& csv, const std::string& hash) {
    const double bw = 0.5;  // 1 / (2T)
    auto offsets = make_offsets(cfg.k_users, cfg.tau_design);
    auto bank = channel::CrossCorrBank::build(pulse_from(cfg), offsets, 0.0);
    const double g21 = bank.interference_gain(1, 0);
    auto gmat = channel::ChannelMatrix::build(bank, cfg.n_symbols);
    auto codec = svd::SvdCodec::build(gmat);

    for (double snr : cfg.snr_db) {
        // per-user average SNR P/(2 N0) on the x axis
        const double n0 = cfg.total_power / (2.0 * std::pow(10.0, snr / 10.0));
        const double abar = 1.0 / (bw * n0);  // mean of |h|^2/(W sigma^2)
        const double rs = analysis::rate_strong_closed(abar, abar, cfg.power_strong, bw);
        const double rw = analysis::rate_weak_closed(abar, abar, cfg.power_strong, cfg.power_weak, g21, bw);
        const double r1 = analysis::rate_single_user_closed(abar, cfg.power_strong, bw);
        auto rs_mc = analysis::mc_rate_strong(abar, abar, cfg.power_strong, bw, cfg.mc_draws, cfg.seed);
        auto rw_mc = analysis::mc_rate_weak(abar, abar, cfg.power_strong, cfg.power_weak, g21, bw,
                                            cfg.mc_draws, cfg.seed + 1);

        // fading-averaged rate of the decoupled baseline with its power allocation;
        // the allocator sees the bandwidth-scaled noise so it maximizes the same rate
        double svd_sum = 0.0;
        std::vector<double> nv_rate(static_cast<std::size_t>(cfg.k_users), n0);
        std::vector<double> nv_alloc(static_cast<std::size_t>(cfg.k_users), bw * n0);
        const int draws = std::max(100, cfg.frames / 8);
        for (int d = 0; d < draws; ++d) {
            auto rng = common::Rng::derive(cfg.seed, 21, static_cast<std::uint64_t>(d));
            auto fading = channel::draw_fading(cfg.k_users, rng);
            auto wf = cfg.waterfill == "strict"
                          ? svd::waterfill(codec.lambdas(), fading.h, nv_alloc, cfg.total_power,
                                           cfg.n_symbols, cfg.k_users)
                          : svd::waterfill_clip_rescale(codec.lambdas(), fading.h, nv_alloc,
                                                        cfg.total_power, cfg.n_symbols, cfg.k_users);
            svd_sum += analysis::rate_svd(codec.lambdas(), wf.powers, fading.h, nv_rate, bw,
                                          cfg.n_symbols, cfg.k_users);
        }
        const double svd_rate = svd_sum / draws;

        csv.write({to_string(cfg.scenario), snr, "strong", "rate_bits_s_hz", rs, 0.0, 0, cfg.seed, hash});
        csv.write({to_string(cfg.scenario), snr, "weak", "rate_bits_s_hz", rw, 0.0, 0, cfg.seed, hash});
        csv.write({to_string(cfg.scenario), snr, "single", "rate_bits_s_hz", r1, 0.0, 0, cfg.seed, hash});
        csv.write({to_string(cfg.scenario), snr, "strong-mc", "rate_bits_s_hz", rs_mc.mean,
                   1.96 * rs_mc.std_err, static_cast<std::uint64_t>(cfg.mc_draws), cfg.seed, hash});
        csv.write({to_string(cfg.scenario), snr, "weak-mc", "rate_bits_s_hz", rw_mc.mean,
                   1.96 * rw_mc.std_err, static_cast<std::uint64_t>(cfg.mc_draws), cfg.seed, hash});
        csv.write({to_string(cfg.scenario), snr, "svd", "rate_bits_s_hz", svd_rate, 0.0,
                   static_cast<std::uint64_t>(draws), cfg.seed, hash});
    }
}

void run_complexity(const ExperimentConfig& cfg, CsvWriter& csv, const std::string& hash,
                    const std::string& notes_path, std::vector<std::string>& extra) {
    analysis::ComplexitySpec spec;
    spec.variant = ae::ae_variant(cfg.variant);
    spec.k_users = cfg.k_users;
    spec.n_symbols = cfg.n_symbols;
    spec.pa_h1 = cfg.pa_h1;
    spec.pa_h2 = cfg.pa_h2;
    spec.pa_h3 = cfg.pa_h3;
    spec.t_h1 = cfg.t_h1;
    spec.t_h2 = cfg.t_h2;
    auto rows = analysis::complexity_report(spec);
    std::ofstream notes(notes_path);
    for (const auto& r : rows) {
        csv.write({to_string(cfg.scenario), 0.0, r.method, "flops", r.flops, 0.0, 0, cfg.seed, hash});
        csv.write({to_string(cfg.scenario), 0.0, r.method, "flops_reference", r.flops_reference, 0.0, 0, cfg.seed, hash});
        csv.write({to_string(cfg.scenario), 0.0, r.method, "storage", r.storage, 0.0, 0, cfg.seed, hash});
        csv.write({to_string(cfg.scenario), 0.0, r.method, "storage_reference", r.storage_reference, 0.0, 0, cfg.seed, hash});
        if (!r.note.empty()) notes << r.method << ": " << r.note << "\n";
    }
    auto m = analysis::measure_counts(spec);
    csv.write({to_string(cfg.scenario), 0.0, "cnn-encoder", "flops_measured", static_cast<double>(m.encoder_macs),
               0.0, static_cast<std::uint64_t>(cfg.n_symbols), cfg.seed, hash});
    csv.write({to_string(cfg.scenario), 0.0, "cnn-decoder", "flops_measured", static_cast<double>(m.decoder_macs),
               0.0, static_cast<std::uint64_t>(cfg.n_symbols), cfg.seed, hash});
    csv.write({to_string(cfg.scenario), 0.0, "mlp-pa", "flops_measured", static_cast<double>(m.pa_macs), 0.0, 0,
               cfg.seed, hash});
    csv.write({to_string(cfg.scenario), 0.0, "mlp-t", "flops_measured", static_cast<double>(m.t_macs), 0.0, 0,
               cfg.seed, hash});
    csv.write({to_string(cfg.scenario), 0.0, "svd-encoder", "flops_measured", static_cast<double>(m.svd_encode_macs),
               0.0, static_cast<std::uint64_t>(spec.svd_measure_symbols), cfg.seed, hash});
    csv.write({to_string(cfg.scenario), 0.0, "cnn-encoder", "params_measured", static_cast<double>(m.encoder_params),
               0.0, 0, cfg.seed, hash});
    csv.write({to_string(cfg.scenario), 0.0, "cnn-decoder", "params_measured", static_cast<double>(m.decoder_params),
               0.0, 0, cfg.seed, hash});
    extra.push_back(notes_path);
}

void run_ae_train(const ExperimentConfig& cfg, CsvWriter& csv, const std::string& hash,
                  const std::string& out_dir, std::vector<std::string>& extra) {
    ae::AeSystem sys(ae_config_from(cfg));
    ae::TrainConfig tc;
    tc.train_frames = cfg.train_frames;
    tc.val_frames = cfg.val_frames;
    tc.batch = cfg.batch;
    tc.epochs = cfg.epochs;
    tc.lr = cfg.lr;
    tc.train_snr_db = cfg.train_snr_db;
    tc.timing_width_frac = cfg.timing_width;
    tc.csi_var = cfg.csi_var;
    tc.shared_csi = cfg.shared_csi;
    tc.seed = cfg.seed;
    tc.curve_path = out_dir + "/curve.csv";
    tc.divergence_dump = out_dir + "/diverged.ckpt";
    auto tr = ae::train(sys, tc);
    extra.push_back(tc.curve_path);

    const std::string ckpt = cfg.checkpoint_out.empty() ? out_dir + "/model.ckpt" : cfg.checkpoint_out;
    nn::save_checkpoint(ckpt, sys.state_arrays());
    extra.push_back(ckpt);

    csv.write({to_string(cfg.scenario), cfg.train_snr_db, "avg", "loss_initial", tr.initial_ce, 0.0,
               static_cast<std::uint64_t>(cfg.train_frames), cfg.seed, hash});
    csv.write({to_string(cfg.scenario), cfg.train_snr_db, "avg", "loss_final", tr.final_ce, 0.0,
               static_cast<std::uint64_t>(cfg.train_frames), cfg.seed, hash});

    auto points = ae::evaluate(sys, cfg.snr_db, cfg.frames, cfg.timing_width, cfg.csi_var,
                               cfg.shared_csi, cfg.seed + 17);
    eval_rows(csv, cfg, hash, points);
}

void run_ae_eval(const ExperimentConfig& cfg, CsvWriter& csv, const std::string& hash) {
    ae::AeSystem sys(ae_config_from(cfg));
    sys.load_state(nn::load_checkpoint(cfg.checkpoint_in));
    auto points = ae::evaluate(sys, cfg.snr_db, cfg.frames, cfg.timing_width, cfg.csi_var,
                               cfg.shared_csi, cfg.seed + 17);
    eval_rows(csv, cfg, hash, points);
}

} // namespace

RunOutput run(const ExperimentConfig& cfg) {
    validate(cfg);
    if (cfg.fixed_fading && cfg.scenario != Scenario::SvdBer)
        throw ConfigError("fixed_fading", "only supported by the svd-ber scenario");

    std::filesystem::create_directories(cfg.out_dir);
    RunOutput out;
    out.csv_path = cfg.out_dir + "/results.csv";
    out.manifest_path = cfg.out_dir + "/manifest.cfg";

    {
        std::ofstream manifest(out.manifest_path);
        if (!manifest) throw std::runtime_error("run: cannot write " + out.manifest_path);
        manifest << serialize(cfg);
    }

    const std::string hash = config_hash(cfg);
    CsvWriter csv(out.csv_path);
    switch (cfg.scenario) {
        case Scenario::SvdBer: run_svd_ber(cfg, csv, hash); break;
        case Scenario::UserSelectionBer: run_user_selection(cfg, csv, hash); break;
        case Scenario::BerTheory: run_ber_theory(cfg, csv, hash); break;
        case Scenario::Rates: run_rates(cfg, csv, hash); break;
        case Scenario::Complexity: run_complexity(cfg, csv, hash, cfg.out_dir + "/complexity_notes.txt", out.extra_files); break;
        case Scenario::AeTrain: run_ae_train(cfg, csv, hash, cfg.out_dir, out.extra_files); break;
        case Scenario::AeEval: run_ae_eval(cfg, csv, hash); break;
    }
    csv.close();
    return out;
}

} // namespace tnoma::harness
