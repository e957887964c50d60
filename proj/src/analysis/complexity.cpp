#include "tnoma/analysis/complexity.hpp"

#include "tnoma/ae/system.hpp"
#include "tnoma/ae/train.hpp"
#include "tnoma/channel/channel_matrix.hpp"
#include "tnoma/svd/codec.hpp"

namespace tnoma::analysis {

std::vector<ComplexityRow> complexity_report(const ComplexitySpec& spec) {
    const double k = spec.k_users;
    const double n = spec.n_symbols;
    const double s = spec.variant.kernel_len;
    const auto& le = spec.variant.encoder_filters;
    const auto& ld = spec.variant.decoder_filters;

    std::vector<ComplexityRow> rows;

    const double svd = (k * n) * (k * n);
    rows.push_back({"svd-encoder", svd, svd, svd, svd, ""});
    rows.push_back({"svd-decoder", svd, svd, svd, svd, ""});

    const double enc_ls = (le[0] + le[1] + le[2]) * s;
    const double enc_flops = k * n * enc_ls;
    const double enc_storage = k * enc_ls;
    rows.push_back({"cnn-encoder", enc_flops, 2.0 * enc_flops, enc_storage, 2.0 * enc_storage,
                    "reference example counts are twice the formula (multiply and add tallied separately)"});

    const double dec_inner = 2.0 * k * ld[0] * s + (ld[1] + ld[2] + ld[3]) * s;
    rows.push_back({"cnn-decoder", k * k * n * dec_inner, k * k * n * dec_inner, k * dec_inner,
                    k * dec_inner, ""});

    const double pa_formula = spec.pa_h1 * (2.0 * k + spec.pa_h2) + spec.pa_h2 * spec.pa_h3 + spec.pa_h3;
    const double pa_reference = 2.0 * k * spec.pa_h1 + spec.pa_h2 * spec.pa_h3_reference + spec.pa_h3_reference;
    rows.push_back({"mlp-pa", pa_formula, pa_reference, pa_formula, pa_reference,
                    "reference example omits the first hidden product and uses a 16-wide last hidden layer"});

    const double t_val = 2.0 * spec.t_h1 + spec.t_h1 * spec.t_h2 + 2.0 * spec.t_h2;
    rows.push_back({"mlp-t", t_val, t_val, t_val, t_val, ""});

    return rows;
}

MeasuredCounts measure_counts(const ComplexitySpec& spec) {
    ae::AeConfig cfg;
    cfg.variant = spec.variant;
    cfg.k_users = spec.k_users;
    cfg.n_symbols = spec.n_symbols;
    cfg.offsets.assign(static_cast<std::size_t>(spec.k_users), 0.0);
    for (int u = 0; u < spec.k_users; ++u)
        cfg.offsets[static_cast<std::size_t>(u)] = (spec.k_users - 1 - u) * 0.5;
    cfg.use_mlp_pa = true;
    cfg.use_mlp_t = true;
    cfg.pa_h1 = spec.pa_h1;
    cfg.pa_h2 = spec.pa_h2;
    cfg.pa_h3 = spec.pa_h3;
    cfg.t_h1 = spec.t_h1;
    cfg.t_h2 = spec.t_h2;

    ae::AeSystem sys(cfg);
    auto colorer = channel::NoiseColorer::build(sys.nominal_bank(), cfg.n_symbols);
    auto batch = ae::make_batch(1, cfg, colorer, 0.0, 0.0, false, 7, 0);
    sys.reset_macs();
    sys.run(batch, 30.0, false, false);

    MeasuredCounts m;
    m.encoder_macs = sys.encoder().macs();
    for (int r = 0; r < cfg.k_users; ++r) m.decoder_macs += sys.decoder(r).macs();
    if (sys.power_allocator()) m.pa_macs = sys.power_allocator()->macs();
    if (sys.combiner(0)) m.t_macs = sys.combiner(0)->macs();
    for (auto* p : sys.encoder().params()) m.encoder_params += static_cast<std::uint64_t>(p->numel());
    for (int r = 0; r < cfg.k_users; ++r)
        for (auto* p : sys.decoder(r).params()) m.decoder_params += static_cast<std::uint64_t>(p->numel());

    // dense transform count of the baseline, on a frame small enough to factor quickly
    auto bank = channel::CrossCorrBank::build(cfg.pulse, cfg.offsets, 0.0);
    auto gmat = channel::ChannelMatrix::build(bank, spec.svd_measure_symbols);
    auto codec = svd::SvdCodec::build(gmat);
    std::vector<double> x(static_cast<std::size_t>(cfg.k_users) * spec.svd_measure_symbols, 1.0);
    std::vector<double> p(x.size(), 1.0);
    codec.reset_counters();
    codec.encode(x, p);
    m.svd_encode_macs = codec.encode_macs();
    return m;
}

} // namespace tnoma::analysis
