#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "tnoma/analysis/ber_theory.hpp"
#include "tnoma/harness/compare.hpp"
#include "tnoma/harness/config.hpp"
#include "tnoma/harness/run.hpp"

using namespace tnoma;
using harness::ExperimentConfig;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    REQUIRE(f);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

struct TempDir {
    std::filesystem::path p;
    explicit TempDir(const std::string& name) : p(std::filesystem::temp_directory_path() / name) {
        std::filesystem::remove_all(p);
        std::filesystem::create_directories(p);
    }
    ~TempDir() { std::filesystem::remove_all(p); }
    std::string sub(const std::string& s) const { return (p / s).string(); }
};

} // namespace

TEST_CASE("config: parse, serialize, hash, field-naming errors") {
    ExperimentConfig c;
    c.snr_db = {0, 10, 20};
    c.seed = 42;
    const std::string text = harness::serialize(c);
    auto back = harness::parse_config_text(text);
    CHECK(harness::serialize(back) == text);
    CHECK(harness::config_hash(back) == harness::config_hash(c));

    auto changed = c;
    changed.seed = 43;
    CHECK(harness::config_hash(changed) != harness::config_hash(c));

    CHECK_THROWS_WITH_AS(harness::parse_config_text("does_not_exist=1\n"),
                         doctest::Contains("does_not_exist"), harness::ConfigError);
    CHECK_THROWS_WITH_AS(harness::parse_config_text("beta=1.5\n"), doctest::Contains("beta"),
                         harness::ConfigError);
    CHECK_THROWS_WITH_AS(harness::parse_config_text("frames=abc\n"), doctest::Contains("frames"),
                         harness::ConfigError);

    // overrides and comments
    auto cfg = harness::parse_config_text("# comment\nscenario=ber-theory\nsnr_db=0,30 # trailing\n");
    CHECK(cfg.scenario == harness::Scenario::BerTheory);
    harness::apply_override(cfg, "kappa", "4");
    CHECK(cfg.kappa == 4.0);
}

TEST_CASE("presets pin the study settings") {
    auto fig12 = harness::preset("fig12", "full");
    CHECK(fig12.timing_width == 0.16);
    CHECK(fig12.csi_var == 0.01);
    CHECK(fig12.mlp_pa);
    CHECK(fig12.mlp_t);
    CHECK(fig12.train_frames == 131072);
    CHECK(fig12.epochs == 20);

    auto fig4 = harness::preset("fig4", "desk");
    CHECK(fig4.n_symbols == 512);
    CHECK(fig4.tau_design == 0.5);
    CHECK(fig4.scenario == harness::Scenario::SvdBer);
    CHECK(fig4.frames < harness::preset("fig4", "full").frames);

    auto fig14 = harness::preset("fig14", "full");
    CHECK(fig14.total_power == 2.0);
    CHECK(fig14.k_users == 2);
    CHECK(fig14.n_symbols == 512);
    CHECK(fig14.scenario == harness::Scenario::Rates);

    CHECK_THROWS(harness::preset("fig99", "desk"));
    for (const auto& name : harness::preset_names()) CHECK_NOTHROW(harness::preset(name, "desk"));
}

TEST_CASE("ber-theory scenario emits the weak-user plateau") {
    TempDir dir("tnoma_theory");
    ExperimentConfig cfg;
    cfg.scenario = harness::Scenario::BerTheory;
    cfg.snr_db = {10, 20, 30};
    cfg.out_dir = dir.sub("run");
    auto out = harness::run(cfg);
    auto rows = harness::read_csv(out.csv_path);
    double weak30 = -1.0;
    for (const auto& r : rows)
        if (r.user == "weak" && r.snr_db == 30.0) weak30 = r.value;
    CHECK(weak30 == doctest::Approx(0.0228).epsilon(0.05));

    // manifest reconstructs the config and its hash
    auto back = harness::load_config_file(out.manifest_path);
    CHECK(harness::config_hash(back) == harness::config_hash(cfg));
    CHECK(rows[0].config_hash == harness::config_hash(cfg));
}

TEST_CASE("identical seeds give byte-identical outputs") {
    TempDir dir("tnoma_det");
    ExperimentConfig cfg;
    cfg.scenario = harness::Scenario::UserSelectionBer;
    cfg.snr_db = {0, 10, 20};
    cfg.mc_draws = 20000;
    cfg.out_dir = dir.sub("a");
    auto a = harness::run(cfg);
    cfg.out_dir = dir.sub("b");
    auto b = harness::run(cfg);
    // same bytes apart from the differing out_dir line in the manifest
    CHECK(slurp(a.csv_path) == slurp(b.csv_path));

    cfg.out_dir = dir.sub("a");
    auto a2 = harness::run(cfg);
    CHECK(slurp(a.csv_path) == slurp(a2.csv_path));
    CHECK(slurp(a.manifest_path) == slurp(a2.manifest_path));
}

TEST_CASE("theory and simulation of user selection agree within confidence") {
    TempDir dir("tnoma_pair");
    ExperimentConfig mc;
    mc.scenario = harness::Scenario::UserSelectionBer;
    mc.snr_db = {5, 15, 25};
    mc.mc_draws = 200000;
    mc.out_dir = dir.sub("mc");
    auto mcr = harness::run(mc);

    ExperimentConfig th = mc;
    th.scenario = harness::Scenario::BerTheory;
    th.out_dir = dir.sub("th");
    auto thr = harness::run(th);

    auto rows_mc = harness::read_csv(mcr.csv_path);
    auto rows_th = harness::read_csv(thr.csv_path);
    for (const auto& rm : rows_mc) {
        for (const auto& rt : rows_th)
            if (rt.user == rm.user && rt.snr_db == rm.snr_db)
                CHECK(std::fabs(rm.value - rt.value) <= 3.0 * (rm.ci95 / 1.96) + 1e-9);
    }
}

TEST_CASE("complexity scenario writes the reference rows") {
    TempDir dir("tnoma_cx");
    ExperimentConfig cfg;
    cfg.scenario = harness::Scenario::Complexity;
    cfg.out_dir = dir.sub("run");
    auto out = harness::run(cfg);
    auto rows = harness::read_csv(out.csv_path);
    auto value_of = [&](const std::string& user, const std::string& metric) {
        for (const auto& r : rows)
            if (r.user == user && r.metric == metric) return r.value;
        FAIL("missing ", user, "/", metric);
        return 0.0;
    };
    CHECK(value_of("svd-encoder", "flops") == 1048576.0);
    CHECK(value_of("cnn-encoder", "flops_reference") == 180224.0);
    CHECK(value_of("cnn-decoder", "flops") == 405504.0);
    CHECK(value_of("mlp-pa", "flops_reference") == 656.0);
    CHECK(value_of("mlp-t", "flops") == 96.0);
    CHECK(value_of("cnn-encoder", "flops_measured") == 90112.0);
    CHECK(value_of("cnn-decoder", "flops_measured") == 405504.0);
}

TEST_CASE("compare: identical curves give zero gain; plot file appears") {
    TempDir dir("tnoma_cmp");
    ExperimentConfig cfg;
    cfg.scenario = harness::Scenario::BerTheory;
    cfg.snr_db = {0, 5, 10, 15, 20, 25, 30};
    cfg.out_dir = dir.sub("a");
    auto a = harness::run(cfg);

    harness::CompareOptions opts;
    opts.user = "strong";
    opts.at_value = 1e-2;
    opts.plot_path = dir.sub("plot.svg");
    auto res = harness::compare_files(a.csv_path, a.csv_path, opts);
    for (double g : res.gain_db) CHECK(std::fabs(g) < 1e-9);
    CHECK(std::fabs(res.gain_at_target) < 1e-9);
    CHECK(res.grids_aligned);
    CHECK(std::filesystem::exists(opts.plot_path));
    CHECK(res.summary.find("gain") != std::string::npos);
}

#ifdef TNOMA_BIN
TEST_CASE("command line: exit codes and the preset/run/compare flow") {
    TempDir dir("tnoma_cli");
    const std::string bin = TNOMA_BIN;
    auto sh = [&](const std::string& args) {
        return std::system((bin + " " + args + " > /dev/null 2>&1").c_str());
    };
    CHECK(WEXITSTATUS(sh("preset --name fig4 --scale desk --out " + dir.sub("p.cfg"))) == 0);
    CHECK(WEXITSTATUS(sh("preset --name nope")) != 0);
    // config error paths exit with 1
    CHECK(WEXITSTATUS(sh("run --set beta=2 --preset fig4 --out " + dir.sub("x"))) == 1);
    // runtime error (missing file) exits with 2
    CHECK(WEXITSTATUS(sh("compare missing_a.csv missing_b.csv")) == 2);
    // a small theory run through the CLI
    const int rc = sh("run --preset fig4 --set scenario=ber-theory --set snr_db=10,20 --out " + dir.sub("r"));
    CHECK(WEXITSTATUS(rc) == 0);
    CHECK(std::filesystem::exists(dir.sub("r") + "/results.csv"));
}
#endif
