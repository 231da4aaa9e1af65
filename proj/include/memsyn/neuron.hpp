/**
 * (C) Copyright 2026 the memsyn authors.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#pragma once

#include <cmath>
#include <span>
#include <stdexcept>

namespace memsyn {

/// Current-domain adaptive exponential integrate-and-fire constants.
struct NeuronParams {
    double i_tau = 2e-12;       ///< time-constant bias [A]
    double tau_m = 8.9e-3;      ///< membrane time constant [s]
    double i_th = 2e-12;        ///< input scaling factor [A]
    double i0_neuron = 0.5e-12; ///< leak current [A]
    double i_p = 0.5e-12;       ///< adaptation rest level [A]
    double tau_adapt = 17.7e-3; ///< adaptation time constant [s]
    double i_reset = 1e-12;     ///< post-spike membrane level [A]
    double i_spkthr = 60e-12;   ///< spike threshold [A]
    double i_g = 1e-9;          ///< positive-feedback gain [A]
    double i_ath = 20e-9;       ///< feedback activation midpoint [A]
    double i_anorm = 1e-9;      ///< feedback activation width [A]

    void validate() const {
        for (double v : {i_tau, tau_m, i_th, i0_neuron, i_p, tau_adapt, i_reset, i_spkthr, i_g,
                         i_ath, i_anorm})
            if (v <= 0.0) throw std::invalid_argument("NeuronParams: all parameters must be > 0");
        if (i_spkthr <= i_reset)
            throw std::invalid_argument("NeuronParams: spike threshold must exceed reset level");
    }
};

struct NeuronState {
    double i_m = 1e-12;      ///< membrane current [A]
    double i_adapt = 0.5e-12;///< adaptation current [A]
};

/// First-order synaptic dynamics element (one per exc/inh channel).
struct SynChannelParams {
    double i_w = 16e-12;   ///< synaptic bias current [A]
    double tau_syn = 8e-3; ///< channel time constant [s]

    void validate() const {
        if (i_w <= 0.0 || tau_syn <= 0.0)
            throw std::invalid_argument("SynChannelParams: parameters must be > 0");
    }
};

struct SynChannelState {
    double i_syn = 0.0;  ///< [A]
};

/// Exponential decay over dt followed by an impulse of i_w per unit of
/// summed spike weight arriving this step.
inline SynChannelState step_syn(SynChannelState state, const SynChannelParams& p, double dt,
                                double weighted_spike_sum) {
    if (dt <= 0.0) throw std::invalid_argument("step_syn: dt must be > 0");
    state.i_syn = state.i_syn * std::exp(-dt / p.tau_syn) + p.i_w * weighted_spike_sum;
    return state;
}

struct NeuronStepResult {
    NeuronState state;
    bool spiked = false;
};

/**
 * One forward-Euler step of the neuron. `i_in` is an external background
 * current, `i_comp` the compensation current from the learning block, and
 * `i_syn_net` the net (excitatory - inhibitory) synaptic channel current.
 * The membrane is clamped at zero, which keeps the slow-down denominator
 * finite for every reachable state; a spike resets it to i_reset.
 */
inline NeuronStepResult step_neuron(NeuronState state, const NeuronParams& p, double i_in,
                                    double i_comp, double i_syn_net, double dt) {
    if (dt <= 0.0) throw std::invalid_argument("step_neuron: dt must be > 0");
    const double i_a = p.i_g / (1.0 + std::exp(-(state.i_m - p.i_ath) / p.i_anorm));
    const double i_fb = i_a * (state.i_m + p.i_th) / p.i_tau;
    const double i_pos =
        i_fb + (p.i_th / p.i_tau) * (i_in + i_comp + i_syn_net - state.i_adapt - p.i_tau);

    const double dim = (i_pos - state.i_m * (1.0 + state.i_adapt / p.i_tau)) /
                       (p.tau_m * (1.0 + p.i_th / (state.i_m + p.i0_neuron)));
    const double dia = (p.i_p - state.i_adapt) / p.tau_adapt;

    state.i_m += dt * dim;
    state.i_adapt += dt * dia;
    if (state.i_m < 0.0) state.i_m = 0.0;
    if (state.i_adapt < 0.0) state.i_adapt = 0.0;

    NeuronStepResult out{state, false};
    if (out.state.i_m > p.i_spkthr) {
        out.state.i_m = p.i_reset;
        out.spiked = true;
    }
    return out;
}

/// Mean rate of the spikes falling inside [0, window).
inline double firing_rate(std::span<const double> spike_times, double window) {
    if (window <= 0.0) throw std::invalid_argument("firing_rate: window must be > 0");
    std::size_t count = 0;
    for (double t : spike_times)
        if (t >= 0.0 && t < window) ++count;
    return static_cast<double>(count) / window;
}

}  // namespace memsyn
