#ifndef TNOMA_HARNESS_CONFIG_HPP
#define TNOMA_HARNESS_CONFIG_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace tnoma::harness {

enum class Scenario { SvdBer, AeTrain, AeEval, UserSelectionBer, Rates, BerTheory, Complexity };

std::string to_string(Scenario s);
Scenario scenario_from_string(const std::string& s);

// Every experiment knob. Defaults follow the standard two-user study:
// 512 symbols per user, unity roll-off, span-7 kernel, design offset T/2,
// batches of 32 trained for 20 epochs at 30 dB with Adam at 3e-3.
struct ExperimentConfig {
    Scenario scenario = Scenario::SvdBer;
    std::string preset;  // label only
    std::string scale = "desk";

    int k_users = 2;
    int n_symbols = 512;
    double beta = 1.0;
    int pulse_span = 7;
    double tau_design = 0.5;
    double total_power = 2.0;

    int variant = 5;
    bool skip_a = false, skip_b = false, skip_c = false;
    std::string loss = "ce";  // ce | mse-identity | mse-tanh | ce+q
    double alpha = 0.5;
    double kappa = 2.0;
    bool mlp_pa = false, mlp_t = false;
    int pa_h1 = 32, pa_h2 = 32, pa_h3 = 32;
    int t_h1 = 8, t_h2 = 8;

    std::vector<double> snr_db = {0, 5, 10, 15, 20, 25, 30};
    double train_snr_db = 30.0;
    int frames = 4096;  // test/simulation frames per SNR point
    int train_frames = 131072;
    int val_frames = 512;
    int batch = 32;
    int epochs = 20;
    double lr = 3e-3;

    double timing_width = 0.0;  // uniform error width as a fraction of tau_design
    double csi_var = 0.0;
    bool shared_csi = false;
    bool fixed_fading = false;

    int mc_draws = 100000;
    double power_strong = 1.0, power_weak = 1.0;
    std::string waterfill = "strict";  // strict | clip-rescale

    std::uint64_t seed = 1;
    std::string out_dir = "results";
    std::string checkpoint_in, checkpoint_out;
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& field, const std::string& message)
        : std::runtime_error("config field '" + field + "': " + message), field(field) {}
    std::string field;
};

// Flat key=value text ('#' comments). Unknown keys and malformed values
// raise ConfigError naming the offending field.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config_file(const std::string& path);
void apply_override(ExperimentConfig& cfg, const std::string& key, const std::string& value);
std::string serialize(const ExperimentConfig& cfg);
std::string config_hash(const ExperimentConfig& cfg);  // 64-bit FNV-1a of the serialized form, hex
void validate(const ExperimentConfig& cfg);

// Experiment presets covering the standard figure-class studies; scale is
// "full" (complete budgets) or "desk" (reduced frames/epochs, same physics).
ExperimentConfig preset(const std::string& name, const std::string& scale);
std::vector<std::string> preset_names();

} // namespace tnoma::harness

#endif
