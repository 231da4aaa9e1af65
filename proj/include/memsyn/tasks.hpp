/**
 * (C) Copyright 2026 the memsyn authors.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "memsyn/mnist_idx.hpp"
#include "memsyn/network.hpp"

namespace memsyn {

// ---------------------------------------------------------------------------
// Single-pattern binary classification
// ---------------------------------------------------------------------------

/**
 * Two output neurons (a, b) fed by two input populations (p1, p2) of n_in
 * units each. Training alternates the two pattern classes; the teacher
 * drives the neuron that should fire more. Evaluation sweeps a grid of
 * (x1, x2) rate factors with learning disabled and records which neuron
 * fires more.
 */
struct SinglePatternConfig {
    std::size_t n_in = 40;
    std::size_t n_trials = 250;
    double present_s = 0.1;
    double eval_present_s = 0.25;
    std::size_t grid = 6;
    double strong_contrast = 0.5;  ///< |x1 - x2| >= this counts as strongly contrasted
    bool train_enabled = true;
    bool record_events = false;    ///< keep the evaluation run's event list

    double rate_scale_hz = 50e3;  ///< per-channel aggregate scale
    double rate_base_hz = 5e3;    ///< per-channel aggregate floor
    double teacher_rate_hz = 50e3;  ///< aggregate across the teacher population
    std::size_t teacher_units = 40;
    double i_w_total = 1e-9;  ///< per-channel synaptic bias; i_w = i_w_total / n_in

    double dt = 1e-4;
    double tau_syn = 8e-3;
    double snapshot_interval = 0.0;
    LearningParams learning = LearningParams::single_pattern_defaults();
    DeviceParams device = DeviceParams::conservative();
    CircuitParams circuit;
    NeuronParams neuron;
};

struct GridPointResult {
    double x1 = 0.0;
    double x2 = 0.0;
    double rate_a_hz = 0.0;
    double rate_b_hz = 0.0;
};

struct SinglePatternReport {
    std::uint64_t seed = 0;
    std::vector<GridPointResult> grid;
    double strong_accuracy = 0.0;   ///< correct fraction over strongly contrasted points
    std::size_t strong_points = 0;
    std::vector<WeightSnapshot> weight_snapshots;
    std::vector<SpikeEvent> events;  ///< evaluation events, when requested
};

namespace detail {

inline double unit_rate(double x, const SinglePatternConfig& cfg) {
    return (x * cfg.rate_scale_hz + cfg.rate_base_hz) / static_cast<double>(cfg.n_in);
}

}  // namespace detail

inline SinglePatternReport run_single_pattern(const SinglePatternConfig& cfg,
                                              std::uint64_t seed) {
    if (cfg.n_in < 1) throw std::invalid_argument("run_single_pattern: n_in must be >= 1");
    if (cfg.grid < 2) throw std::invalid_argument("run_single_pattern: grid must be >= 2");
    const RandomStream master(seed);
    RandomStream pattern_rng = master.substream("task.single_pattern.patterns");

    SimConfig base;
    base.dt = cfg.dt;
    base.n_outputs = 2;
    base.neuron = cfg.neuron;
    base.channel = {cfg.i_w_total / static_cast<double>(cfg.n_in), cfg.tau_syn};
    base.learning = cfg.learning;
    base.device = cfg.device;
    base.circuit = cfg.circuit;
    base.inputs.assign(2, PopulationConfig{cfg.n_in, {}});
    base.teachers.assign(2, PopulationConfig{cfg.teacher_units, {}});
    base.teacher_target = {0, 1};

    std::vector<Synapse> trained;
    SinglePatternReport report;
    report.seed = seed;

    if (cfg.train_enabled && cfg.n_trials > 0) {
        SimConfig train = base;
        train.seed = master.substream("task.single_pattern.train").seed();
        train.record.output_events = false;
        train.record.weight_snapshot_interval = cfg.snapshot_interval;
        const double teacher_unit_rate =
            cfg.teacher_rate_hz / static_cast<double>(cfg.teacher_units);
        for (std::size_t k = 0; k < cfg.n_trials; ++k) {
            train.segment_ends.push_back(static_cast<double>(k + 1) * cfg.present_s);
            const bool positive = (k % 2 == 0);  // alternate classes
            const double x_hot = pattern_rng.uniform(0.5, 1.0);
            const double x_cold = pattern_rng.uniform(0.0, 0.5);
            const double r_hot = detail::unit_rate(x_hot, cfg);
            const double r_cold = detail::unit_rate(x_cold, cfg);
            train.inputs[0].segment_rates_hz.push_back(positive ? r_hot : r_cold);
            train.inputs[1].segment_rates_hz.push_back(positive ? r_cold : r_hot);
            train.teachers[0].segment_rates_hz.push_back(positive ? teacher_unit_rate : 0.0);
            train.teachers[1].segment_rates_hz.push_back(positive ? 0.0 : teacher_unit_rate);
        }
        train.learning.t_stop = train.duration();  // teaching active for the whole training
        SpikeRecord rec = run(train);
        trained = std::move(rec.final_synapses);
        report.weight_snapshots = std::move(rec.weight_snapshots);
    } else {
        // Untrained baseline: materialize the random initial weights.
        SimConfig init = base;
        init.seed = master.substream("task.single_pattern.train").seed();
        init.segment_ends = {cfg.dt};
        init.inputs[0].segment_rates_hz = {0.0};
        init.inputs[1].segment_rates_hz = {0.0};
        init.teachers[0].segment_rates_hz = {0.0};
        init.teachers[1].segment_rates_hz = {0.0};
        init.learning.t_stop = 0.0;
        trained = run(init).final_synapses;
    }

    // Evaluation grid, learning disabled.
    SimConfig eval = base;
    eval.seed = master.substream("task.single_pattern.eval").seed();
    eval.initial_synapses = trained;
    eval.record.output_events = true;
    std::vector<std::pair<double, double>> points;
    for (std::size_t i = 0; i < cfg.grid; ++i) {
        for (std::size_t j = 0; j < cfg.grid; ++j) {
            const double x1 = static_cast<double>(i) / static_cast<double>(cfg.grid - 1);
            const double x2 = static_cast<double>(j) / static_cast<double>(cfg.grid - 1);
            points.emplace_back(x1, x2);
            eval.segment_ends.push_back(static_cast<double>(points.size()) * cfg.eval_present_s);
            eval.inputs[0].segment_rates_hz.push_back(detail::unit_rate(x1, cfg));
            eval.inputs[1].segment_rates_hz.push_back(detail::unit_rate(x2, cfg));
            eval.teachers[0].segment_rates_hz.push_back(0.0);
            eval.teachers[1].segment_rates_hz.push_back(0.0);
        }
    }
    eval.learning.t_stop = 0.0;
    eval.record.input_events = cfg.record_events;
    eval.record.teacher_events = cfg.record_events;
    eval = disable_learning(eval);
    const SpikeRecord rec = run(eval);
    if (cfg.record_events) report.events = rec.events;

    std::size_t strong_correct = 0;
    for (std::size_t k = 0; k < points.size(); ++k) {
        const double t0 = static_cast<double>(k) * cfg.eval_present_s;
        const double t1 = t0 + cfg.eval_present_s;
        GridPointResult gp;
        gp.x1 = points[k].first;
        gp.x2 = points[k].second;
        gp.rate_a_hz = static_cast<double>(count_output_spikes(rec, 0, t0, t1)) / cfg.eval_present_s;
        gp.rate_b_hz = static_cast<double>(count_output_spikes(rec, 1, t0, t1)) / cfg.eval_present_s;
        report.grid.push_back(gp);
        if (std::abs(gp.x1 - gp.x2) >= cfg.strong_contrast) {
            ++report.strong_points;
            const bool correct = gp.x1 > gp.x2 ? gp.rate_a_hz > gp.rate_b_hz
                                               : gp.rate_b_hz > gp.rate_a_hz;
            if (correct) ++strong_correct;
        }
    }
    report.strong_accuracy = report.strong_points
                                 ? static_cast<double>(strong_correct) /
                                       static_cast<double>(report.strong_points)
                                 : 0.0;
    return report;
}

/// Fraction of all off-diagonal grid points classified consistently with the
/// contrast sign.
inline double grid_accuracy(const SinglePatternReport& report) {
    std::size_t n = 0, correct = 0;
    for (const auto& gp : report.grid) {
        if (gp.x1 == gp.x2) continue;
        ++n;
        const bool ok =
            gp.x1 > gp.x2 ? gp.rate_a_hz > gp.rate_b_hz : gp.rate_b_hz > gp.rate_a_hz;
        if (ok) ++correct;
    }
    return n ? static_cast<double>(correct) / static_cast<double>(n) : 0.0;
}

// ---------------------------------------------------------------------------
// Reduced MNIST (digits 0-4)
// ---------------------------------------------------------------------------

enum class DeviceCvSetting { high, low };

struct MnistConfig {
    std::size_t n_c = 8;        ///< synapses per input pixel
    std::size_t n_train = 1000;
    double train_dwell = 0.1;
    std::size_t n_test = 200;
    double test_dwell = 0.1;
    DeviceCvSetting cv_setting = DeviceCvSetting::low;
    int n_classes = 5;
    std::size_t image_side = 24;

    double pixel_rate_hz = 100.0;    ///< per input unit at full intensity
    double teacher_rate_hz = 100.0;  ///< per teacher unit
    std::size_t teacher_units = 40;
    double i_w = 16e-12;

    double dt = 1e-4;
    double tau_syn = 8e-3;
    bool record_events = false;
    InitPolicy init_policy = InitPolicy::random_state;
    LearningParams learning = LearningParams::mnist_defaults();
    DeviceParams device_high_cv = DeviceParams::conservative();
    DeviceParams device_low_cv = DeviceParams::typical();
    CircuitParams circuit;
    NeuronParams neuron;

    const DeviceParams& device() const {
        return cv_setting == DeviceCvSetting::high ? device_high_cv : device_low_cv;
    }
};

struct MnistPatternResult {
    int true_label = 0;
    int predicted = 0;
    std::vector<double> rates_hz;
};

struct MnistReport {
    std::uint64_t seed = 0;
    std::vector<MnistPatternResult> patterns;
    double error_rate = 0.0;
    std::vector<Synapse> final_synapses;
    std::size_t n_input_units = 0;
    std::vector<SpikeEvent> events;  ///< evaluation events, when requested
};

namespace detail {

/// Crop and flatten a dataset to image_side x image_side intensity vectors.
struct PreparedSet {
    std::vector<std::vector<double>> pixels;
    std::vector<int> labels;
};

inline PreparedSet prepare(const Dataset& ds, int n_classes, std::size_t side) {
    PreparedSet out;
    for (std::size_t i = 0; i < ds.images.size(); ++i) {
        if (ds.labels[i] >= n_classes) continue;
        const Image cropped = side == 24 ? scale_24(ds.images[i]) : ds.images[i];
        if (cropped.rows != side || cropped.cols != side)
            throw std::invalid_argument("mnist: unexpected image size");
        out.pixels.push_back(cropped.pixels);
        out.labels.push_back(ds.labels[i]);
    }
    if (out.pixels.empty()) throw std::invalid_argument("mnist: no usable samples");
    return out;
}

}  // namespace detail

inline MnistReport run_mnist(const MnistConfig& cfg, const Dataset& train_set,
                             const Dataset& test_set, std::uint64_t seed) {
    const std::size_t n_pix = cfg.image_side * cfg.image_side;
    const std::size_t n_out = static_cast<std::size_t>(cfg.n_classes);
    const detail::PreparedSet train = detail::prepare(train_set, cfg.n_classes, cfg.image_side);
    const detail::PreparedSet test = detail::prepare(test_set, cfg.n_classes, cfg.image_side);

    const RandomStream master(seed);
    RandomStream draw_rng = master.substream("task.mnist.draws");

    SimConfig base;
    base.dt = cfg.dt;
    base.n_outputs = n_out;
    base.neuron = cfg.neuron;
    base.channel = {cfg.i_w, cfg.tau_syn};
    base.learning = cfg.learning;
    base.device = cfg.device();
    base.circuit = cfg.circuit;
    base.inputs.assign(n_pix, PopulationConfig{cfg.n_c, {}});
    base.teachers.assign(n_out, PopulationConfig{cfg.teacher_units, {}});
    base.teacher_target.resize(n_out);
    std::iota(base.teacher_target.begin(), base.teacher_target.end(), std::size_t{0});
    base.init_policy = cfg.init_policy;
    base.record.output_events = false;

    // Training: digits drawn uniformly from the training set.
    SimConfig train_cfg = base;
    train_cfg.seed = master.substream("task.mnist.train").seed();
    for (auto& pop : train_cfg.inputs) pop.segment_rates_hz.reserve(cfg.n_train);
    for (auto& pop : train_cfg.teachers) pop.segment_rates_hz.reserve(cfg.n_train);
    for (std::size_t k = 0; k < cfg.n_train; ++k) {
        const std::size_t idx =
            static_cast<std::size_t>(draw_rng.uniform() * static_cast<double>(train.pixels.size()));
        train_cfg.segment_ends.push_back(static_cast<double>(k + 1) * cfg.train_dwell);
        const auto& z = train.pixels[idx];
        for (std::size_t p = 0; p < n_pix; ++p)
            train_cfg.inputs[p].segment_rates_hz.push_back(z[p] * cfg.pixel_rate_hz);
        const int label = train.labels[idx];
        for (std::size_t j = 0; j < n_out; ++j)
            train_cfg.teachers[j].segment_rates_hz.push_back(
                static_cast<int>(j) == label ? cfg.teacher_rate_hz : 0.0);
    }
    train_cfg.learning.t_stop = train_cfg.duration();  // teaching ends with training
    SpikeRecord train_rec = run(train_cfg);

    // Evaluation: held-out digits, learning disabled, argmax output rate.
    std::vector<std::size_t> order(test.pixels.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    const std::size_t n_test = std::min(cfg.n_test, order.size());
    for (std::size_t k = 0; k < n_test; ++k) {  // partial Fisher-Yates
        const std::size_t pick =
            k + static_cast<std::size_t>(draw_rng.uniform() *
                                         static_cast<double>(order.size() - k));
        std::swap(order[k], order[pick]);
    }

    SimConfig eval = base;
    eval.seed = master.substream("task.mnist.eval").seed();
    eval.initial_synapses = std::move(train_rec.final_synapses);
    eval.record.output_events = true;
    for (std::size_t k = 0; k < n_test; ++k) {
        eval.segment_ends.push_back(static_cast<double>(k + 1) * cfg.test_dwell);
        const auto& z = test.pixels[order[k]];
        for (std::size_t p = 0; p < n_pix; ++p)
            eval.inputs[p].segment_rates_hz.push_back(z[p] * cfg.pixel_rate_hz);
        for (std::size_t j = 0; j < n_out; ++j) eval.teachers[j].segment_rates_hz.push_back(0.0);
    }
    eval.learning.t_stop = 0.0;
    eval.record.input_events = cfg.record_events;
    eval.record.teacher_events = cfg.record_events;
    eval = disable_learning(eval);
    const SpikeRecord rec = run(eval);

    MnistReport report;
    report.seed = seed;
    report.n_input_units = n_pix * cfg.n_c;
    std::size_t wrong = 0;
    for (std::size_t k = 0; k < n_test; ++k) {
        const double t0 = static_cast<double>(k) * cfg.test_dwell;
        const double t1 = t0 + cfg.test_dwell;
        MnistPatternResult pr;
        pr.true_label = test.labels[order[k]];
        pr.rates_hz.resize(n_out);
        for (std::size_t j = 0; j < n_out; ++j)
            pr.rates_hz[j] =
                static_cast<double>(count_output_spikes(rec, static_cast<std::uint32_t>(j), t0, t1)) /
                cfg.test_dwell;
        pr.predicted = static_cast<int>(
            std::max_element(pr.rates_hz.begin(), pr.rates_hz.end()) - pr.rates_hz.begin());
        if (pr.predicted != pr.true_label) ++wrong;
        report.patterns.push_back(std::move(pr));
    }
    report.error_rate = n_test ? static_cast<double>(wrong) / static_cast<double>(n_test) : 0.0;
    report.final_synapses = rec.final_synapses;
    if (cfg.record_events) report.events = rec.events;
    return report;
}

/// Per-pixel sum of the n_c synaptic weights feeding one output neuron,
/// as a side x side row-major grid.
inline std::vector<double> export_weight_image(std::span<const Synapse> synapses,
                                               std::size_t n_input_units, std::size_t n_c,
                                               std::size_t side, std::size_t class_id) {
    if (n_input_units != side * side * n_c)
        throw std::invalid_argument("export_weight_image: unit count mismatch");
    if (synapses.size() % n_input_units != 0 ||
        class_id >= synapses.size() / n_input_units)
        throw std::invalid_argument("export_weight_image: class id out of range");
    std::vector<double> grid(side * side, 0.0);
    const std::size_t offset = class_id * n_input_units;
    for (std::size_t p = 0; p < side * side; ++p)
        for (std::size_t c = 0; c < n_c; ++c)
            grid[p] += synapses[offset + p * n_c + c].weight;
    return grid;
}

}  // namespace memsyn
