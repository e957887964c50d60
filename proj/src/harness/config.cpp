#include "tnoma/harness/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace tnoma::harness {

std::string to_string(Scenario s) {
    switch (s) {
        case Scenario::SvdBer: return "svd-ber";
        case Scenario::AeTrain: return "ae-train";
        case Scenario::AeEval: return "ae-eval";
        case Scenario::UserSelectionBer: return "user-selection-ber";
        case Scenario::Rates: return "rates";
        case Scenario::BerTheory: return "ber-theory";
        case Scenario::Complexity: return "complexity";
    }
    return "svd-ber";
}

Scenario scenario_from_string(const std::string& s) {
    if (s == "svd-ber") return Scenario::SvdBer;
    if (s == "ae-train") return Scenario::AeTrain;
    if (s == "ae-eval") return Scenario::AeEval;
    if (s == "user-selection-ber") return Scenario::UserSelectionBer;
    if (s == "rates") return Scenario::Rates;
    if (s == "ber-theory") return Scenario::BerTheory;
    if (s == "complexity") return Scenario::Complexity;
    throw ConfigError("scenario", "unknown scenario '" + s + "'");
}

namespace {

double parse_double(const std::string& field, const std::string& v) {
    try {
        std::size_t pos = 0;
        double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return d;
    } catch (const std::exception&) {
        throw ConfigError(field, "expected a number, got '" + v + "'");
    }
}

std::int64_t parse_int(const std::string& field, const std::string& v) {
    try {
        std::size_t pos = 0;
        long long i = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return i;
    } catch (const std::exception&) {
        throw ConfigError(field, "expected an integer, got '" + v + "'");
    }
}

bool parse_bool(const std::string& field, const std::string& v) {
    if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
    if (v == "0" || v == "false" || v == "no" || v == "off") return false;
    throw ConfigError(field, "expected a boolean, got '" + v + "'");
}

std::vector<double> parse_list(const std::string& field, const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(parse_double(field, item));
    if (out.empty()) throw ConfigError(field, "expected a comma-separated list of numbers");
    return out;
}

std::string join_list(const std::vector<double>& v) {
    std::string s;
    char buf[64];
    for (std::size_t i = 0; i < v.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.10g", v[i]);
        if (i) s += ",";
        s += buf;
    }
    return s;
}

} // namespace

void apply_override(ExperimentConfig& c, const std::string& key, const std::string& v) {
    if (key == "scenario") c.scenario = scenario_from_string(v);
    else if (key == "preset") c.preset = v;
    else if (key == "scale") c.scale = v;
    else if (key == "k_users") c.k_users = static_cast<int>(parse_int(key, v));
    else if (key == "n_symbols") c.n_symbols = static_cast<int>(parse_int(key, v));
    else if (key == "beta") c.beta = parse_double(key, v);
    else if (key == "pulse_span") c.pulse_span = static_cast<int>(parse_int(key, v));
    else if (key == "tau_design") c.tau_design = parse_double(key, v);
    else if (key == "total_power") c.total_power = parse_double(key, v);
    else if (key == "variant") c.variant = static_cast<int>(parse_int(key, v));
    else if (key == "skip_a") c.skip_a = parse_bool(key, v);
    else if (key == "skip_b") c.skip_b = parse_bool(key, v);
    else if (key == "skip_c") c.skip_c = parse_bool(key, v);
    else if (key == "loss") c.loss = v;
    else if (key == "alpha") c.alpha = parse_double(key, v);
    else if (key == "kappa") c.kappa = parse_double(key, v);
    else if (key == "mlp_pa") c.mlp_pa = parse_bool(key, v);
    else if (key == "mlp_t") c.mlp_t = parse_bool(key, v);
    else if (key == "pa_h1") c.pa_h1 = static_cast<int>(parse_int(key, v));
    else if (key == "pa_h2") c.pa_h2 = static_cast<int>(parse_int(key, v));
    else if (key == "pa_h3") c.pa_h3 = static_cast<int>(parse_int(key, v));
    else if (key == "t_h1") c.t_h1 = static_cast<int>(parse_int(key, v));
    else if (key == "t_h2") c.t_h2 = static_cast<int>(parse_int(key, v));
    else if (key == "snr_db") c.snr_db = parse_list(key, v);
    else if (key == "train_snr_db") c.train_snr_db = parse_double(key, v);
    else if (key == "frames") c.frames = static_cast<int>(parse_int(key, v));
    else if (key == "train_frames") c.train_frames = static_cast<int>(parse_int(key, v));
    else if (key == "val_frames") c.val_frames = static_cast<int>(parse_int(key, v));
    else if (key == "batch") c.batch = static_cast<int>(parse_int(key, v));
    else if (key == "epochs") c.epochs = static_cast<int>(parse_int(key, v));
    else if (key == "lr") c.lr = parse_double(key, v);
    else if (key == "timing_width") c.timing_width = parse_double(key, v);
    else if (key == "csi_var") c.csi_var = parse_double(key, v);
    else if (key == "shared_csi") c.shared_csi = parse_bool(key, v);
    else if (key == "fixed_fading") c.fixed_fading = parse_bool(key, v);
    else if (key == "mc_draws") c.mc_draws = static_cast<int>(parse_int(key, v));
    else if (key == "power_strong") c.power_strong = parse_double(key, v);
    else if (key == "power_weak") c.power_weak = parse_double(key, v);
    else if (key == "waterfill") c.waterfill = v;
    else if (key == "seed") c.seed = static_cast<std::uint64_t>(parse_int(key, v));
    else if (key == "out_dir") c.out_dir = v;
    else if (key == "checkpoint_in") c.checkpoint_in = v;
    else if (key == "checkpoint_out") c.checkpoint_out = v;
    else throw ConfigError(key, "unknown configuration key");
}

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig c;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        // trim
        const auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        const auto e = line.find_last_not_of(" \t\r");
        line = line.substr(b, e - b + 1);
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno), "expected key=value, got '" + line + "'");
        std::string key = line.substr(0, eq);
        std::string val = line.substr(eq + 1);
        const auto ke = key.find_last_not_of(" \t");
        key = key.substr(0, ke + 1);
        const auto vb = val.find_first_not_of(" \t");
        val = vb == std::string::npos ? "" : val.substr(vb);
        apply_override(c, key, val);
    }
    validate(c);
    return c;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("config", "cannot open file '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config_text(ss.str());
}

namespace {
std::string serialize_impl(const ExperimentConfig& c, bool with_paths);
}

std::string serialize(const ExperimentConfig& c) { return serialize_impl(c, true); }

namespace {
std::string serialize_impl(const ExperimentConfig& c, bool with_paths) {
    std::string s;
    char buf[256];
    auto add = [&](const char* k, const std::string& v) {
        s += k;
        s += "=";
        s += v;
        s += "\n";
    };
    auto addf = [&](const char* k, double v) {
        std::snprintf(buf, sizeof(buf), "%.10g", v);
        add(k, buf);
    };
    auto addi = [&](const char* k, long long v) { add(k, std::to_string(v)); };
    add("scenario", to_string(c.scenario));
    if (!c.preset.empty()) add("preset", c.preset);
    add("scale", c.scale);
    addi("k_users", c.k_users);
    addi("n_symbols", c.n_symbols);
    addf("beta", c.beta);
    addi("pulse_span", c.pulse_span);
    addf("tau_design", c.tau_design);
    addf("total_power", c.total_power);
    addi("variant", c.variant);
    addi("skip_a", c.skip_a);
    addi("skip_b", c.skip_b);
    addi("skip_c", c.skip_c);
    add("loss", c.loss);
    addf("alpha", c.alpha);
    addf("kappa", c.kappa);
    addi("mlp_pa", c.mlp_pa);
    addi("mlp_t", c.mlp_t);
    addi("pa_h1", c.pa_h1);
    addi("pa_h2", c.pa_h2);
    addi("pa_h3", c.pa_h3);
    addi("t_h1", c.t_h1);
    addi("t_h2", c.t_h2);
    add("snr_db", join_list(c.snr_db));
    addf("train_snr_db", c.train_snr_db);
    addi("frames", c.frames);
    addi("train_frames", c.train_frames);
    addi("val_frames", c.val_frames);
    addi("batch", c.batch);
    addi("epochs", c.epochs);
    addf("lr", c.lr);
    addf("timing_width", c.timing_width);
    addf("csi_var", c.csi_var);
    addi("shared_csi", c.shared_csi);
    addi("fixed_fading", c.fixed_fading);
    addi("mc_draws", c.mc_draws);
    addf("power_strong", c.power_strong);
    addf("power_weak", c.power_weak);
    add("waterfill", c.waterfill);
    addi("seed", static_cast<long long>(c.seed));
    if (with_paths) {
        add("out_dir", c.out_dir);
        if (!c.checkpoint_in.empty()) add("checkpoint_in", c.checkpoint_in);
        if (!c.checkpoint_out.empty()) add("checkpoint_out", c.checkpoint_out);
    }
    return s;
}
} // namespace

// The hash identifies the experiment itself, so output locations stay out.
std::string config_hash(const ExperimentConfig& c) {
    const std::string s = serialize_impl(c, false);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void validate(const ExperimentConfig& c) {
    if (c.k_users < 1 || c.k_users > 8) throw ConfigError("k_users", "must lie in [1, 8]");
    if (c.n_symbols < c.pulse_span || c.n_symbols > 65536) throw ConfigError("n_symbols", "must lie in [pulse_span, 65536]");
    if (!(c.beta >= 0.0 && c.beta <= 1.0)) throw ConfigError("beta", "must lie in [0, 1]");
    if (c.pulse_span < 1 || c.pulse_span % 2 == 0) throw ConfigError("pulse_span", "must be an odd positive integer");
    if (!(c.tau_design >= 0.0 && c.tau_design < 1.0)) throw ConfigError("tau_design", "must lie in [0, 1)");
    if (!(c.total_power > 0.0)) throw ConfigError("total_power", "must be > 0");
    if (c.variant < 1 || c.variant > 9) throw ConfigError("variant", "must lie in [1, 9]");
    if (c.loss != "ce" && c.loss != "mse-identity" && c.loss != "mse-tanh" && c.loss != "ce+q")
        throw ConfigError("loss", "must be one of ce, mse-identity, mse-tanh, ce+q");
    if (!(c.alpha >= 0.0)) throw ConfigError("alpha", "must be >= 0");
    if (!(c.kappa > 0.0)) throw ConfigError("kappa", "must be > 0");
    if (c.snr_db.empty()) throw ConfigError("snr_db", "must contain at least one point");
    if (c.frames < 1) throw ConfigError("frames", "must be >= 1");
    if (c.train_frames < 1) throw ConfigError("train_frames", "must be >= 1");
    if (c.val_frames < 0) throw ConfigError("val_frames", "must be >= 0");
    if (c.batch < 2) throw ConfigError("batch", "must be >= 2");
    if (c.epochs < 1) throw ConfigError("epochs", "must be >= 1");
    if (!(c.lr > 0.0)) throw ConfigError("lr", "must be > 0");
    if (!(c.timing_width >= 0.0 && c.timing_width < 2.0)) throw ConfigError("timing_width", "must lie in [0, 2)");
    if (!(c.csi_var >= 0.0)) throw ConfigError("csi_var", "must be >= 0");
    if (c.mc_draws < 100) throw ConfigError("mc_draws", "must be >= 100");
    if (!(c.power_strong >= 0.0) || !(c.power_weak >= 0.0))
        throw ConfigError("power_strong", "powers must be >= 0");
    if (c.waterfill != "strict" && c.waterfill != "clip-rescale")
        throw ConfigError("waterfill", "must be strict or clip-rescale");
    if (c.scale != "desk" && c.scale != "full") throw ConfigError("scale", "must be desk or full");
    if (c.scenario == Scenario::AeEval && c.checkpoint_in.empty())
        throw ConfigError("checkpoint_in", "ae-eval needs a checkpoint path");
}

} // namespace tnoma::harness
