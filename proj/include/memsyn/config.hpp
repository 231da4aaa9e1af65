/**
 * (C) Copyright 2026 the memsyn authors.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#pragma once

#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "memsyn/csv.hpp"
#include "memsyn/tasks.hpp"
#include "memsyn/units.hpp"
#include "memsyn/variability.hpp"

namespace memsyn {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Everything a run can be configured with. Field defaults are the built-in
/// parameter tables; a config file layers on top, command-line flags on top
/// of that.
struct AppConfig {
    // [run]
    std::uint64_t seed = 1;
    std::string out_dir = ".";
    int threads = 1;

    // [circuit]
    CircuitParams circuit;

    // [device] two named settings; floor shared
    DeviceParams device_high_cv = DeviceParams::conservative();
    DeviceParams device_low_cv = DeviceParams::typical();

    // [neuron]
    NeuronParams neuron;

    // [synapse]
    double tau_syn = 8e-3;

    // [network]
    double dt = 1e-4;
    double snapshot_interval = 0.0;
    bool record_events = false;

    // [variability]
    std::size_t variability_n = 10000;
    std::string variability_setting = "high";  // which device setting the study uses
    std::vector<double> sweep_ratios = {1.5, 2.0, 3.0, 5.0, 7.0, 10.0};
    std::vector<double> sweep_state_cvs = {0.2, 0.3, 0.4};
    std::size_t sweep_n = 10000;
    std::size_t sweep_seeds = 5;

    // [circuit_sweep]
    double sweep_r_min = 1e3;
    double sweep_r_max = 20e3;
    std::size_t sweep_points = 20;
    std::vector<double> sweep_v_s = {0.8, 1.1, 1.4};
    std::size_t branch_points = 50;

    // [single_pattern]
    std::size_t sp_n_in = 40;
    std::size_t sp_n_trials = 250;
    double sp_present = 0.1;
    double sp_eval_present = 0.25;
    std::size_t sp_grid = 6;
    double sp_strong_contrast = 0.5;
    double sp_rate_scale = 50e3;
    double sp_rate_base = 5e3;
    double sp_teacher_rate = 50e3;
    std::size_t sp_teacher_units = 40;
    double sp_i_w_total = 1e-9;
    double sp_s0 = 0.0;
    double sp_alpha = 500e-12;
    double sp_p_bernoulli = 0.001;
    std::string sp_mode = "binary";
    std::size_t sp_seeds = 5;

    // [mnist]
    std::size_t mn_n_c = 8;
    std::size_t mn_n_train = 1000;
    double mn_train_dwell = 0.1;
    std::size_t mn_n_test = 200;
    double mn_test_dwell = 0.1;
    std::string mn_cv = "low";
    std::string mn_mode = "binary";
    std::size_t mn_seeds = 3;
    double mn_pixel_rate = 100.0;
    double mn_teacher_rate = 100.0;
    std::size_t mn_teacher_units = 40;
    double mn_i_w = 16e-12;
    double mn_s0 = -500e-12;
    double mn_alpha = 300e-12;
    double mn_p_bernoulli = 0.01;
    std::string mn_images = "data/train-images-idx3-ubyte";
    std::string mn_labels = "data/train-labels-idx1-ubyte";
    std::string mn_test_images = "data/test-images-idx3-ubyte";
    std::string mn_test_labels = "data/test-labels-idx1-ubyte";

    SinglePatternConfig single_pattern_config() const {
        SinglePatternConfig c;
        c.n_in = sp_n_in;
        c.n_trials = sp_n_trials;
        c.present_s = sp_present;
        c.eval_present_s = sp_eval_present;
        c.grid = sp_grid;
        c.strong_contrast = sp_strong_contrast;
        c.rate_scale_hz = sp_rate_scale;
        c.rate_base_hz = sp_rate_base;
        c.teacher_rate_hz = sp_teacher_rate;
        c.teacher_units = sp_teacher_units;
        c.i_w_total = sp_i_w_total;
        c.dt = dt;
        c.tau_syn = tau_syn;
        c.snapshot_interval = snapshot_interval;
        c.record_events = record_events;
        c.learning = LearningParams::single_pattern_defaults();
        c.learning.s0 = sp_s0;
        c.learning.alpha = sp_alpha;
        c.learning.p_bernoulli = sp_p_bernoulli;
        c.learning.mode = sp_mode == "high_res" ? SynapseMode::high_res : SynapseMode::binary;
        c.device = device_high_cv;
        c.circuit = circuit;
        c.neuron = neuron;
        return c;
    }

    MnistConfig mnist_config() const {
        MnistConfig c;
        c.n_c = mn_n_c;
        c.n_train = mn_n_train;
        c.train_dwell = mn_train_dwell;
        c.n_test = mn_n_test;
        c.test_dwell = mn_test_dwell;
        c.cv_setting = mn_cv == "high" ? DeviceCvSetting::high : DeviceCvSetting::low;
        c.pixel_rate_hz = mn_pixel_rate;
        c.teacher_rate_hz = mn_teacher_rate;
        c.teacher_units = mn_teacher_units;
        c.i_w = mn_i_w;
        c.dt = dt;
        c.tau_syn = tau_syn;
        c.record_events = record_events;
        c.learning = LearningParams::mnist_defaults();
        c.learning.s0 = mn_s0;
        c.learning.alpha = mn_alpha;
        c.learning.p_bernoulli = mn_p_bernoulli;
        c.learning.mode = mn_mode == "high_res" ? SynapseMode::high_res : SynapseMode::binary;
        c.device_high_cv = device_high_cv;
        c.device_low_cv = device_low_cv;
        c.circuit = circuit;
        c.neuron = neuron;
        return c;
    }

    const DeviceParams& variability_device() const {
        return variability_setting == "low" ? device_low_cv : device_high_cv;
    }
};

namespace detail {

struct ConfigEntry {
    std::string key;  // "section.name"
    std::function<void(AppConfig&, const std::string&)> set;
    std::function<std::string(const AppConfig&)> get;
};

inline std::string format_list(const std::vector<double>& xs, const char* unit) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ",";
        out += format_si(xs[i], unit);
    }
    return out;
}

inline std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::string item;
    std::stringstream ss(text);
    while (std::getline(ss, item, ',')) out.push_back(parse_si(item));
    if (out.empty()) throw ConfigError("empty list value");
    return out;
}

inline std::uint64_t parse_u64(const std::string& text) {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(text, &pos);
    if (pos != text.size()) throw ConfigError("bad integer '" + text + "'");
    return v;
}

inline bool parse_bool(const std::string& text) {
    if (text == "true" || text == "1") return true;
    if (text == "false" || text == "0") return false;
    throw ConfigError("bad boolean '" + text + "'");
}

inline const std::vector<ConfigEntry>& config_schema() {
    static const std::vector<ConfigEntry> schema = [] {
        std::vector<ConfigEntry> s;
        auto si = [&s](const char* key, double AppConfig::* field, const char* unit) {
            s.push_back({key,
                         [field](AppConfig& c, const std::string& v) { c.*field = parse_si(v); },
                         [field, unit](const AppConfig& c) { return format_si(c.*field, unit); }});
        };
        auto num = [&s](const char* key, double AppConfig::* field) {
            s.push_back({key,
                         [field](AppConfig& c, const std::string& v) { c.*field = parse_si(v); },
                         [field](const AppConfig& c) { return format_si(c.*field, ""); }});
        };
        auto count = [&s](const char* key, std::size_t AppConfig::* field) {
            s.push_back({key,
                         [field](AppConfig& c, const std::string& v) {
                             c.*field = static_cast<std::size_t>(parse_u64(v));
                         },
                         [field](const AppConfig& c) { return std::to_string(c.*field); }});
        };
        auto str = [&s](const char* key, std::string AppConfig::* field) {
            s.push_back({key, [field](AppConfig& c, const std::string& v) { c.*field = v; },
                         [field](const AppConfig& c) { return c.*field; }});
        };
        auto list = [&s](const char* key, std::vector<double> AppConfig::* field,
                         const char* unit) {
            s.push_back({key,
                         [field](AppConfig& c, const std::string& v) { c.*field = parse_list(v); },
                         [field, unit](const AppConfig& c) { return format_list(c.*field, unit); }});
        };

        s.push_back({"run.seed",
                     [](AppConfig& c, const std::string& v) { c.seed = parse_u64(v); },
                     [](const AppConfig& c) { return std::to_string(c.seed); }});
        str("run.out_dir", &AppConfig::out_dir);
        s.push_back({"run.threads",
                     [](AppConfig& c, const std::string& v) {
                         c.threads = static_cast<int>(parse_u64(v));
                     },
                     [](const AppConfig& c) { return std::to_string(c.threads); }});

        // circuit
        auto circ = [&s](const char* key, double CircuitParams::* field, const char* unit) {
            s.push_back({key,
                         [field](AppConfig& c, const std::string& v) {
                             c.circuit.*field = parse_si(v);
                         },
                         [field, unit](const AppConfig& c) {
                             return format_si(c.circuit.*field, unit);
                         }});
        };
        circ("circuit.v_rd", &CircuitParams::v_rd, "V");
        circ("circuit.v_s", &CircuitParams::v_s, "V");
        circ("circuit.i_b", &CircuitParams::i_b, "A");
        circ("circuit.kappa", &CircuitParams::kappa, "");
        circ("circuit.u_t", &CircuitParams::u_t, "V");
        circ("circuit.i0_fet", &CircuitParams::i0_fet, "A");

        // device settings
        auto dev = [&s](const char* key, DeviceParams AppConfig::* setting,
                        StateDistribution DeviceParams::* state, double StateDistribution::* field) {
            s.push_back({key,
                         [setting, state, field](AppConfig& c, const std::string& v) {
                             c.*setting.*state.*field = parse_si(v);
                         },
                         [setting, state, field](const AppConfig& c) {
                             return format_si(c.*setting.*state.*field, "ohm");
                         }});
        };
        dev("device.high_cv_high_mean", &AppConfig::device_high_cv, &DeviceParams::high_state,
            &StateDistribution::mean_ohm);
        dev("device.high_cv_high_std", &AppConfig::device_high_cv, &DeviceParams::high_state,
            &StateDistribution::std_ohm);
        dev("device.high_cv_low_mean", &AppConfig::device_high_cv, &DeviceParams::low_state,
            &StateDistribution::mean_ohm);
        dev("device.high_cv_low_std", &AppConfig::device_high_cv, &DeviceParams::low_state,
            &StateDistribution::std_ohm);
        dev("device.low_cv_high_mean", &AppConfig::device_low_cv, &DeviceParams::high_state,
            &StateDistribution::mean_ohm);
        dev("device.low_cv_high_std", &AppConfig::device_low_cv, &DeviceParams::high_state,
            &StateDistribution::std_ohm);
        dev("device.low_cv_low_mean", &AppConfig::device_low_cv, &DeviceParams::low_state,
            &StateDistribution::mean_ohm);
        dev("device.low_cv_low_std", &AppConfig::device_low_cv, &DeviceParams::low_state,
            &StateDistribution::std_ohm);
        s.push_back({"device.floor",
                     [](AppConfig& c, const std::string& v) {
                         const double f = parse_si(v);
                         c.device_high_cv.high_state.floor_ohm = f;
                         c.device_high_cv.low_state.floor_ohm = f;
                         c.device_low_cv.high_state.floor_ohm = f;
                         c.device_low_cv.low_state.floor_ohm = f;
                     },
                     [](const AppConfig& c) {
                         return format_si(c.device_high_cv.high_state.floor_ohm, "ohm");
                     }});

        // neuron
        auto neu = [&s](const char* key, double NeuronParams::* field, const char* unit) {
            s.push_back({key,
                         [field](AppConfig& c, const std::string& v) {
                             c.neuron.*field = parse_si(v);
                         },
                         [field, unit](const AppConfig& c) {
                             return format_si(c.neuron.*field, unit);
                         }});
        };
        neu("neuron.i_tau", &NeuronParams::i_tau, "A");
        neu("neuron.tau_m", &NeuronParams::tau_m, "s");
        neu("neuron.i_th", &NeuronParams::i_th, "A");
        neu("neuron.i0", &NeuronParams::i0_neuron, "A");
        neu("neuron.i_p", &NeuronParams::i_p, "A");
        neu("neuron.tau_adapt", &NeuronParams::tau_adapt, "s");
        neu("neuron.i_reset", &NeuronParams::i_reset, "A");
        neu("neuron.i_spkthr", &NeuronParams::i_spkthr, "A");
        neu("neuron.i_g", &NeuronParams::i_g, "A");
        neu("neuron.i_ath", &NeuronParams::i_ath, "A");
        neu("neuron.i_anorm", &NeuronParams::i_anorm, "A");

        si("synapse.tau_syn", &AppConfig::tau_syn, "s");

        si("network.dt", &AppConfig::dt, "s");
        si("network.snapshot_interval", &AppConfig::snapshot_interval, "s");
        s.push_back({"network.record_events",
                     [](AppConfig& c, const std::string& v) { c.record_events = parse_bool(v); },
                     [](const AppConfig& c) { return std::string(c.record_events ? "true" : "false"); }});

        count("variability.n", &AppConfig::variability_n);
        str("variability.setting", &AppConfig::variability_setting);
        list("variability.sweep_ratios", &AppConfig::sweep_ratios, "");
        list("variability.sweep_state_cvs", &AppConfig::sweep_state_cvs, "");
        count("variability.sweep_n", &AppConfig::sweep_n);
        count("variability.sweep_seeds", &AppConfig::sweep_seeds);

        si("circuit_sweep.r_min", &AppConfig::sweep_r_min, "ohm");
        si("circuit_sweep.r_max", &AppConfig::sweep_r_max, "ohm");
        count("circuit_sweep.points", &AppConfig::sweep_points);
        list("circuit_sweep.v_s", &AppConfig::sweep_v_s, "V");
        count("circuit_sweep.branch_points", &AppConfig::branch_points);

        count("single_pattern.n_in", &AppConfig::sp_n_in);
        count("single_pattern.n_trials", &AppConfig::sp_n_trials);
        si("single_pattern.present", &AppConfig::sp_present, "s");
        si("single_pattern.eval_present", &AppConfig::sp_eval_present, "s");
        count("single_pattern.grid", &AppConfig::sp_grid);
        num("single_pattern.strong_contrast", &AppConfig::sp_strong_contrast);
        si("single_pattern.rate_scale", &AppConfig::sp_rate_scale, "Hz");
        si("single_pattern.rate_base", &AppConfig::sp_rate_base, "Hz");
        si("single_pattern.teacher_rate", &AppConfig::sp_teacher_rate, "Hz");
        count("single_pattern.teacher_units", &AppConfig::sp_teacher_units);
        si("single_pattern.i_w_total", &AppConfig::sp_i_w_total, "A");
        si("single_pattern.s0", &AppConfig::sp_s0, "A");
        si("single_pattern.alpha", &AppConfig::sp_alpha, "A");
        num("single_pattern.p_bernoulli", &AppConfig::sp_p_bernoulli);
        str("single_pattern.mode", &AppConfig::sp_mode);
        count("single_pattern.seeds", &AppConfig::sp_seeds);

        count("mnist.n_c", &AppConfig::mn_n_c);
        count("mnist.n_train", &AppConfig::mn_n_train);
        si("mnist.train_dwell", &AppConfig::mn_train_dwell, "s");
        count("mnist.n_test", &AppConfig::mn_n_test);
        si("mnist.test_dwell", &AppConfig::mn_test_dwell, "s");
        str("mnist.cv", &AppConfig::mn_cv);
        str("mnist.mode", &AppConfig::mn_mode);
        count("mnist.seeds", &AppConfig::mn_seeds);
        si("mnist.pixel_rate", &AppConfig::mn_pixel_rate, "Hz");
        si("mnist.teacher_rate", &AppConfig::mn_teacher_rate, "Hz");
        count("mnist.teacher_units", &AppConfig::mn_teacher_units);
        si("mnist.i_w", &AppConfig::mn_i_w, "A");
        si("mnist.s0", &AppConfig::mn_s0, "A");
        si("mnist.alpha", &AppConfig::mn_alpha, "A");
        num("mnist.p_bernoulli", &AppConfig::mn_p_bernoulli);
        str("mnist.images", &AppConfig::mn_images);
        str("mnist.labels", &AppConfig::mn_labels);
        str("mnist.test_images", &AppConfig::mn_test_images);
        str("mnist.test_labels", &AppConfig::mn_test_labels);
        return s;
    }();
    return schema;
}

}  // namespace detail

/// Set one "section.key" to a raw string value; unknown keys are rejected by
/// name.
inline void apply_config_value(AppConfig& config, const std::string& key,
                               const std::string& value) {
    for (const auto& entry : detail::config_schema()) {
        if (entry.key == key) {
            try {
                entry.set(config, value);
            } catch (const ConfigError&) {
                throw;
            } catch (const std::exception& e) {
                throw ConfigError("config: bad value for key '" + key + "': " + e.what());
            }
            return;
        }
    }
    throw ConfigError("config: unknown key '" + key + "'");
}

/// Parse structured key-value text (INI sections, '#'/';' comments) on top
/// of the given base configuration.
inline AppConfig parse_config_text(const std::string& text, AppConfig base = AppConfig{}) {
    std::istringstream in(text);
    std::string line, section;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::size_t b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        std::size_t e = line.find_last_not_of(" \t\r");
        std::string trimmed = line.substr(b, e - b + 1);
        if (trimmed[0] == '#' || trimmed[0] == ';') continue;
        if (trimmed.front() == '[') {
            if (trimmed.back() != ']')
                throw ConfigError("config: bad section header at line " + std::to_string(line_no));
            section = trimmed.substr(1, trimmed.size() - 2);
            continue;
        }
        const std::size_t eq = trimmed.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: expected key = value at line " + std::to_string(line_no));
        auto strip = [](std::string s) {
            const std::size_t b2 = s.find_first_not_of(" \t");
            if (b2 == std::string::npos) return std::string{};
            const std::size_t e2 = s.find_last_not_of(" \t");
            return s.substr(b2, e2 - b2 + 1);
        };
        const std::string key = strip(trimmed.substr(0, eq));
        const std::string value = strip(trimmed.substr(eq + 1));
        if (key.empty()) throw ConfigError("config: empty key at line " + std::to_string(line_no));
        apply_config_value(base, section.empty() ? key : section + "." + key, value);
    }
    return base;
}

inline AppConfig load_config_file(const std::string& path, AppConfig base = AppConfig{}) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), std::move(base));
}

/// Emit the full configuration as sectioned key-value text; parsing the
/// output reproduces the configuration exactly.
inline std::string emit_config(const AppConfig& config) {
    std::string out;
    std::string section;
    for (const auto& entry : detail::config_schema()) {
        const std::size_t dot = entry.key.find('.');
        const std::string sec = entry.key.substr(0, dot);
        if (sec != section) {
            if (!out.empty()) out += "\n";
            out += "[" + sec + "]\n";
            section = sec;
        }
        out += entry.key.substr(dot + 1) + " = " + entry.get(config) + "\n";
    }
    return out;
}

}  // namespace memsyn
