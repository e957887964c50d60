#include "tnoma/harness/config.hpp"

namespace tnoma::harness {

namespace {

// Desk scale divides the training budget by 8 and the per-SNR testing budget
// by 16 while keeping every physical parameter; full scale runs the complete
// study budgets.
void apply_scale(ExperimentConfig& c, const std::string& scale) {
    c.scale = scale;
    if (scale == "full") {
        c.train_frames = 131072;
        c.epochs = 20;
        c.frames = 131072;
        c.mc_draws = 1000000;
    } else {
        c.train_frames = 16384;
        c.epochs = 5;
        c.frames = 8192;
        c.mc_draws = 200000;
    }
}

} // namespace

std::vector<std::string> preset_names() {
    return {"fig4", "fig6", "fig7", "fig8", "fig9", "fig11", "fig12", "fig14"};
}

ExperimentConfig preset(const std::string& name, const std::string& scale) {
    if (scale != "desk" && scale != "full") throw ConfigError("scale", "must be desk or full");
    ExperimentConfig c;
    c.preset = name;
    apply_scale(c, scale);

    if (name == "fig4") {
        // benchmark transceiver sweep, no impairments
        c.scenario = Scenario::SvdBer;
        c.snr_db = {0, 5, 10, 15, 20, 25, 30};
    } else if (name == "fig6") {
        // training-mode comparison; override loss= for the other modes
        c.scenario = Scenario::AeTrain;
        c.loss = "ce";
        c.variant = 5;
    } else if (name == "fig7") {
        // variant sweep; override variant= per run
        c.scenario = Scenario::AeTrain;
        c.variant = 5;
    } else if (name == "fig8") {
        c.scenario = Scenario::AeTrain;
        c.loss = "ce+q";
        c.alpha = 0.5;
        c.kappa = 2.0;
    } else if (name == "fig9") {
        c.scenario = Scenario::AeTrain;
        c.csi_var = 0.01;
        c.mlp_pa = true;
        c.mlp_t = true;
    } else if (name == "fig11") {
        c.scenario = Scenario::AeTrain;
        c.timing_width = 0.16;
        c.mlp_pa = true;
    } else if (name == "fig12") {
        c.scenario = Scenario::AeTrain;
        c.timing_width = 0.16;
        c.csi_var = 0.01;
        c.mlp_pa = true;
        c.mlp_t = true;
        c.snr_db = {0, 5, 10, 15, 20, 25, 30, 35, 40};
    } else if (name == "fig14") {
        c.scenario = Scenario::Rates;
        c.total_power = 2.0;
        c.snr_db = {-10, -5, 0, 5, 10, 15, 20, 25, 30};
        c.waterfill = "clip-rescale";
    } else {
        throw ConfigError("preset", "unknown preset '" + name + "'");
    }
    validate(c);
    return c;
}

} // namespace tnoma::harness
