/**
 * (C) Copyright 2026 the memsyn authors.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "memsyn/circuit.hpp"
#include "memsyn/device.hpp"
#include "memsyn/random.hpp"

namespace memsyn {

enum class SynapseMode { binary, high_res };

/// Per-neuron learning-block constants. The two named constructors carry the
/// two published parameter sets.
struct LearningParams {
    double tau_learn = 8e-3;   ///< trace time constant [s]
    double g_comp = 1.0;       ///< compensation gain
    double s0 = -500e-12;      ///< output bias [A]
    double alpha = 300e-12;    ///< error slack (dead zone half-width) [A]
    double p_bernoulli = 0.01; ///< update gate probability
    double w_s = 200e-12;      ///< output spike weight [A]
    double w_t = 40e-12;       ///< teacher spike weight [A]
    double t_stop = 0.0;       ///< teaching end time [s]
    SynapseMode mode = SynapseMode::binary;
    double eta_highres = 1e-4; ///< analog update scale, per pA of error

    void validate() const {
        if (tau_learn <= 0.0) throw std::invalid_argument("LearningParams: tau_learn must be > 0");
        if (p_bernoulli < 0.0 || p_bernoulli > 1.0)
            throw std::invalid_argument("LearningParams: p_bernoulli must be in [0, 1]");
        if (alpha < 0.0) throw std::invalid_argument("LearningParams: alpha must be >= 0");
    }

    static LearningParams mnist_defaults() {
        LearningParams p;
        p.s0 = -500e-12;
        p.alpha = 300e-12;
        p.p_bernoulli = 0.01;
        return p;
    }

    static LearningParams single_pattern_defaults() {
        LearningParams p;
        p.s0 = 0.0;
        p.alpha = 500e-12;
        p.p_bernoulli = 0.001;
        return p;
    }
};

/// Teacher trace T and output trace S.
struct LearningState {
    double t_trace = 0.0;  ///< [A]
    double s_trace = 0.0;  ///< [A]
};

inline LearningState decay_traces(LearningState state, const LearningParams& p, double dt) {
    if (dt < 0.0) throw std::invalid_argument("decay_traces: dt must be >= 0");
    const double decay = std::exp(-dt / p.tau_learn);
    state.t_trace *= decay;
    state.s_trace *= decay;
    return state;
}

inline LearningState on_post_spike(LearningState state, const LearningParams& p) {
    state.s_trace += p.w_s;
    return state;
}

inline LearningState on_teacher_spike(LearningState state, const LearningParams& p) {
    state.t_trace += p.w_t;
    return state;
}

/// Compensation current injected into the neuron while teaching is active.
inline double compensation(const LearningState& state, const LearningParams& p, double t_now) {
    if (t_now >= p.t_stop) return 0.0;
    return p.g_comp * (state.t_trace - state.s_trace);
}

/// Error signal: positive when the somatic trace exceeds the dendritic
/// prediction, i.e. the synapses should potentiate.
inline double error_current(const LearningState& state, const LearningParams& p,
                            double i_syn_net) {
    return state.s_trace + p.s0 - i_syn_net;
}

/// Ternary update decision: sign of the error, gated by the dead zone and by
/// the Bernoulli draw shared across the neuron's synapses for this event.
inline int eval_update(const LearningState& state, const LearningParams& p, double i_syn_net,
                       bool bernoulli_draw) {
    const double q = error_current(state, p, i_syn_net);
    if (std::abs(q) <= p.alpha || !bernoulli_draw) return 0;
    return q > 0.0 ? +1 : -1;
}

/**
 * One plastic synapse. Binary mode stores a differential device pair plus
 * its cached normalized read; high-resolution mode stores the analog weight
 * directly. `weight` is dimensionless in [-1, 1] either way and multiplies
 * the channel bias current when the synapse is read.
 */
struct Synapse {
    SynapsePair pair;
    double weight = 0.0;
};

/**
 * Maps a programmed device pair to its normalized weight
 * (i_pos - i_neg) / i_b, rescaled so every device setting produces the same
 * deterministic mean weight as the conservative reference setting. The
 * rescale keeps runs with different device spreads comparable at equal
 * signal strength.
 */
struct WeightMapping {
    CircuitParams circuit;
    double scale = 1.0;

    double weight_of(const SynapsePair& pair) const {
        const ReadResult r = read_synapse(pair, circuit);
        return scale * (r.i_pos - r.i_neg) / circuit.i_b;
    }

    /// Deterministic weight of a setting at its distribution means.
    static double nominal_weight(const DeviceParams& device, const CircuitParams& circuit) {
        const SynapsePair at_means{DeviceState{device.low_state.mean_ohm},
                                   DeviceState{device.high_state.mean_ohm}};
        const ReadResult r = read_synapse(at_means, circuit);
        return (r.i_pos - r.i_neg) / circuit.i_b;
    }

    static WeightMapping make(const DeviceParams& run_device, const CircuitParams& circuit) {
        const double reference = nominal_weight(DeviceParams::conservative(), circuit);
        const double raw = nominal_weight(run_device, circuit);
        return WeightMapping{circuit, reference / raw};
    }
};

/**
 * Apply the per-presynaptic-event weight update. Binary mode reprograms the
 * device pair push-pull for L = +-1 and refreshes the cached weight through
 * the read path; high-resolution mode adds eta * q, with q normalized by the
 * tail bias so the step is dimensionless, clipped to [-1, 1] and independent
 * of L's gating.
 */
inline Synapse apply_presyn_update(Synapse synapse, int update_sign, double q,
                                   const LearningParams& learn, const DeviceParams& device,
                                   const WeightMapping& mapping, RandomStream& rng) {
    if (learn.mode == SynapseMode::high_res) {
        synapse.weight += learn.eta_highres * (q / mapping.circuit.i_b);
        synapse.weight = std::clamp(synapse.weight, -1.0, 1.0);
        return synapse;
    }
    if (update_sign == 0) return synapse;
    const ProgramDirection dir =
        update_sign > 0 ? ProgramDirection::increase : ProgramDirection::decrease;
    synapse.pair = program_pair(synapse.pair, dir, device, rng);
    synapse.weight = mapping.weight_of(synapse.pair);
    return synapse;
}

}  // namespace memsyn
