#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

#include "tnoma/harness/compare.hpp"
#include "tnoma/harness/config.hpp"
#include "tnoma/harness/run.hpp"

namespace {

int do_run(const std::string& config_path, const std::string& preset_name, const std::string& scale,
           const std::vector<std::string>& sets, const std::string& out_dir) {
    using namespace tnoma::harness;
    ExperimentConfig cfg;
    if (!config_path.empty())
        cfg = load_config_file(config_path);
    else if (!preset_name.empty())
        cfg = preset(preset_name, scale);
    else
        throw ConfigError("config", "pass --config FILE or --preset NAME");
    for (const auto& kv : sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw ConfigError("set", "expected key=value, got '" + kv + "'");
        apply_override(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    validate(cfg);
    auto out = run(cfg);
    std::printf("wrote %s\n", out.csv_path.c_str());
    std::printf("wrote %s\n", out.manifest_path.c_str());
    for (const auto& f : out.extra_files) std::printf("wrote %s\n", f.c_str());
    return 0;
}

int do_preset(const std::string& name, const std::string& scale, const std::string& out_file) {
    using namespace tnoma::harness;
    auto cfg = preset(name, scale);
    const std::string text = serialize(cfg);
    if (out_file.empty()) {
        std::fputs(text.c_str(), stdout);
    } else {
        std::ofstream f(out_file);
        if (!f) throw std::runtime_error("cannot write " + out_file);
        f << text;
        std::printf("wrote %s\n", out_file.c_str());
    }
    return 0;
}

int do_compare(const std::string& a, const std::string& b, const std::string& metric,
               const std::string& user, double at_value, const std::string& plot) {
    using namespace tnoma::harness;
    CompareOptions opts;
    opts.metric = metric;
    opts.user = user;
    opts.at_value = at_value;
    opts.plot_path = plot;
    auto res = compare_files(a, b, opts);
    std::fputs(res.summary.c_str(), stdout);
    if (!plot.empty()) std::printf("wrote %s\n", plot.c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"T-NOMA experiment runner: simulation, training and theory curves"};
    app.require_subcommand(1);

    auto* runc = app.add_subcommand("run", "execute an experiment from a config file or preset");
    std::string config_path, preset_name, scale = "desk", out_dir;
    std::vector<std::string> sets;
    runc->add_option("--config", config_path, "config file (flat key=value lines)");
    runc->add_option("--preset", preset_name, "preset name (fig4, fig6, fig7, fig8, fig9, fig11, fig12, fig14)");
    runc->add_option("--scale", scale, "preset scale: desk or full")->capture_default_str();
    runc->add_option("--set", sets, "override any config field, key=value (repeatable)");
    runc->add_option("--out", out_dir, "output directory (overrides out_dir)");

    auto* presetc = app.add_subcommand("preset", "print or write a preset configuration");
    std::string p_name, p_scale = "desk", p_out;
    presetc->add_option("--name", p_name, "preset name")->required();
    presetc->add_option("--scale", p_scale, "desk or full")->capture_default_str();
    presetc->add_option("--out", p_out, "write to this file instead of stdout");

    auto* cmp = app.add_subcommand("compare", "align two result files and report SNR gains");
    std::string cmp_a, cmp_b, cmp_metric = "ber", cmp_user = "avg", cmp_plot;
    double cmp_at = 2e-3;
    cmp->add_option("a", cmp_a, "first results.csv (curve A)")->required();
    cmp->add_option("b", cmp_b, "second results.csv (curve B)")->required();
    cmp->add_option("--metric", cmp_metric, "metric column to align")->capture_default_str();
    cmp->add_option("--user", cmp_user, "user column to align")->capture_default_str();
    cmp->add_option("--at", cmp_at, "metric level for the headline gain")->capture_default_str();
    cmp->add_option("--plot", cmp_plot, "write an SVG plot of both curves");

    try {
        app.parse(argc, argv);
        if (runc->parsed()) return do_run(config_path, preset_name, scale, sets, out_dir);
        if (presetc->parsed()) return do_preset(p_name, p_scale, p_out);
        if (cmp->parsed()) return do_compare(cmp_a, cmp_b, cmp_metric, cmp_user, cmp_at, cmp_plot);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? 1 : 0;
    } catch (const tnoma::harness::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
