/**
 * (C) Copyright 2026 the memsyn authors.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "memsyn/circuit.hpp"
#include "memsyn/device.hpp"
#include "memsyn/random.hpp"

namespace memsyn {

/// Monte Carlo summary of device spread vs output-current spread.
struct VariabilityReport {
    double cv_resistance_diff = 0.0;
    double cv_current_diff = 0.0;
    double mean_current_diff = 0.0;  ///< [A]
    double std_current_diff = 0.0;   ///< [A]
    double mean_resistance_diff = 0.0;  ///< [ohm]
    double std_resistance_diff = 0.0;   ///< [ohm]
    std::size_t n_samples = 0;
};

inline double sample_mean(std::span<const double> xs) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

/// Sample standard deviation with the n-1 denominator.
inline double sample_std(std::span<const double> xs) {
    const double m = sample_mean(xs);
    double s = 0.0;
    for (double x : xs) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(xs.size() - 1));
}

/// Coefficient of variation: sample std (n-1) over absolute sample mean.
inline double coefficient_of_variation(std::span<const double> xs) {
    if (xs.empty()) throw std::invalid_argument("coefficient_of_variation: empty sample");
    const double m = sample_mean(xs);
    if (m == 0.0) throw std::domain_error("coefficient_of_variation: zero mean");
    return sample_std(xs) / std::abs(m);
}

/// One Monte Carlo draw of the study: a (high, low) resistance pair and the
/// differential read it produces with d_pos in the low-resistance state.
struct VariabilitySample {
    double r_high_ohm = 0.0;
    double r_low_ohm = 0.0;
    double i_pos_a = 0.0;
    double i_neg_a = 0.0;
};

inline std::vector<VariabilitySample> draw_study_samples(const DeviceParams& device,
                                                         const CircuitParams& circuit,
                                                         std::size_t n, std::uint64_t seed) {
    device.validate();
    circuit.validate();
    RandomStream rng = RandomStream(seed).substream("variability.samples");
    std::vector<VariabilitySample> samples(n);
    for (auto& s : samples) {
        s.r_high_ohm = sample_state(device.high_state, rng).resistance_ohm;
        s.r_low_ohm = sample_state(device.low_state, rng).resistance_ohm;
        // Weight "up": d_pos carries the low resistance, so delta_i > 0 in the mean.
        const SynapsePair pair{DeviceState{s.r_low_ohm}, DeviceState{s.r_high_ohm}};
        const ReadResult read = read_synapse(pair, circuit);
        s.i_pos_a = read.i_pos;
        s.i_neg_a = read.i_neg;
    }
    return samples;
}

inline VariabilityReport summarize_study(std::span<const VariabilitySample> samples) {
    std::vector<double> dr(samples.size()), di(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        dr[i] = samples[i].r_high_ohm - samples[i].r_low_ohm;
        di[i] = samples[i].i_pos_a - samples[i].i_neg_a;
    }
    VariabilityReport rep;
    rep.n_samples = samples.size();
    rep.mean_resistance_diff = sample_mean(dr);
    rep.std_resistance_diff = sample_std(dr);
    rep.mean_current_diff = sample_mean(di);
    rep.std_current_diff = sample_std(di);
    rep.cv_resistance_diff = rep.std_resistance_diff / std::abs(rep.mean_resistance_diff);
    rep.cv_current_diff = rep.std_current_diff / std::abs(rep.mean_current_diff);
    return rep;
}

/// Draw n (R_high, R_low) pairs, read each differential pair, and report the
/// coefficients of variation of the resistance difference and the output
/// current difference.
inline VariabilityReport run_study(const DeviceParams& device, const CircuitParams& circuit,
                                   std::size_t n, std::uint64_t seed) {
    if (n < 100) throw std::invalid_argument("run_study: need n >= 100");
    return summarize_study(draw_study_samples(device, circuit, n, seed));
}

struct RatioSweepRow {
    double state_cv = 0.0;
    double ratio = 0.0;
    double cv_resistance_diff = 0.0;
    double cv_current_diff = 0.0;
};

/**
 * High/low mean-ratio sweep at a fixed per-state coefficient of variation.
 * The low-state mean is held fixed and the high-state mean is
 * ratio * low_mean, with per-state std = state_cv * mean.
 */
inline std::vector<RatioSweepRow> sweep_ratio(double state_cv, std::span<const double> ratios,
                                              const CircuitParams& circuit, std::size_t n,
                                              std::uint64_t seed, double low_mean_ohm = 3000.0) {
    std::vector<RatioSweepRow> rows;
    rows.reserve(ratios.size());
    for (std::size_t k = 0; k < ratios.size(); ++k) {
        const double ratio = ratios[k];
        if (ratio <= 1.0) throw std::invalid_argument("sweep_ratio: ratios must be > 1");
        DeviceParams dev;
        dev.low_state = {low_mean_ohm, state_cv * low_mean_ohm, 100.0};
        dev.high_state = {ratio * low_mean_ohm, state_cv * ratio * low_mean_ohm, 100.0};
        const auto rep = run_study(dev, circuit, n,
                                   RandomStream(seed).substream("variability.sweep", k).seed());
        rows.push_back({state_cv, ratio, rep.cv_resistance_diff, rep.cv_current_diff});
    }
    return rows;
}

}  // namespace memsyn
