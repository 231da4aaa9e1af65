/**
 * (C) Copyright 2026 the memsyn authors.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "memsyn/circuit.hpp"
#include "memsyn/device.hpp"
#include "memsyn/learning.hpp"
#include "memsyn/neuron.hpp"
#include "memsyn/random.hpp"

namespace memsyn {

/// One population of Poisson units. Every unit fires at the population's
/// per-unit rate for the current schedule segment.
struct PopulationConfig {
    std::size_t size = 0;
    std::vector<double> segment_rates_hz;  ///< one per schedule segment
};

struct RecordOptions {
    bool input_events = false;
    bool teacher_events = false;
    bool output_events = true;
    double weight_snapshot_interval = 0.0;  ///< 0 disables periodic snapshots
};

/// How synapses start when no explicit initial state is supplied.
/// `increase_all` starts every pair in the potentiated state, which makes
/// the dendritic drive approach its learning equilibrium from above.
enum class InitPolicy { random_state, increase_all };

/**
 * Full experiment description. Time is divided into contiguous segments
 * (presentations); every population carries one per-unit rate per segment.
 * Input units connect all-to-all onto the output neurons through plastic
 * synapses; teacher populations act only on their target neuron's teacher
 * trace.
 */
struct SimConfig {
    double dt = 1e-4;
    std::uint64_t seed = 1;
    std::vector<double> segment_ends;  ///< ascending; last entry is the duration
    std::vector<PopulationConfig> inputs;
    std::vector<PopulationConfig> teachers;
    std::vector<std::size_t> teacher_target;  ///< teacher population -> output neuron
    std::size_t n_outputs = 1;

    NeuronParams neuron;
    SynChannelParams channel;
    LearningParams learning;
    DeviceParams device = DeviceParams::conservative();
    CircuitParams circuit;

    bool plastic = true;
    InitPolicy init_policy = InitPolicy::random_state;
    std::vector<Synapse> initial_synapses;  ///< empty = initialize per policy
    RecordOptions record;

    std::size_t n_input_units() const {
        std::size_t n = 0;
        for (const auto& p : inputs) n += p.size;
        return n;
    }

    double duration() const { return segment_ends.empty() ? 0.0 : segment_ends.back(); }

    void validate() const {
        if (dt <= 0.0) throw std::invalid_argument("SimConfig: dt must be > 0");
        if (segment_ends.empty()) throw std::invalid_argument("SimConfig: no schedule segments");
        double prev = 0.0;
        for (double e : segment_ends) {
            if (e <= prev) throw std::invalid_argument("SimConfig: segment_ends must ascend");
            prev = e;
        }
        if (n_outputs == 0) throw std::invalid_argument("SimConfig: need at least one output");
        for (const auto& pop : inputs)
            if (pop.segment_rates_hz.size() != segment_ends.size())
                throw std::invalid_argument("SimConfig: input schedule/segment mismatch");
        for (const auto& pop : teachers)
            if (pop.segment_rates_hz.size() != segment_ends.size())
                throw std::invalid_argument("SimConfig: teacher schedule/segment mismatch");
        if (teacher_target.size() != teachers.size())
            throw std::invalid_argument("SimConfig: teacher_target/teachers mismatch");
        for (std::size_t t : teacher_target)
            if (t >= n_outputs) throw std::invalid_argument("SimConfig: teacher target out of range");
        for (const auto& pop : inputs)
            for (double r : pop.segment_rates_hz)
                if (r < 0.0) throw std::invalid_argument("SimConfig: negative rate");
        for (const auto& pop : teachers)
            for (double r : pop.segment_rates_hz)
                if (r < 0.0) throw std::invalid_argument("SimConfig: negative rate");
        if (!initial_synapses.empty() &&
            initial_synapses.size() != n_input_units() * n_outputs)
            throw std::invalid_argument("SimConfig: initial_synapses size mismatch");
        neuron.validate();
        channel.validate();
        learning.validate();
        device.validate();
        circuit.validate();
    }
};

enum class SpikeKind : std::uint8_t { input, teacher, output };

struct SpikeEvent {
    double time = 0.0;
    std::uint32_t source = 0;
    SpikeKind kind = SpikeKind::input;
};

struct WeightSnapshot {
    double time = 0.0;
    std::uint32_t synapse = 0;
    double weight = 0.0;
};

struct SimStats {
    std::uint64_t input_spikes = 0;
    std::uint64_t teacher_spikes = 0;
    std::uint64_t output_spikes = 0;
    std::uint64_t reads = 0;          ///< synapse reads (one per spike per target synapse)
    std::uint64_t write_evals = 0;    ///< update evaluations (one per spike per target synapse)
    std::uint64_t writes_applied = 0; ///< evaluations that changed a synapse
};

struct SpikeRecord {
    std::vector<SpikeEvent> events;
    std::vector<WeightSnapshot> weight_snapshots;
    SimStats stats;
    std::vector<Synapse> final_synapses;
    std::vector<std::uint64_t> output_spike_counts;
};

/// Spike count for one unit in one timestep: Bernoulli for small rate * dt,
/// exact Poisson above.
inline int poisson_spikes(double rate_hz, double dt, RandomStream& rng) {
    if (rate_hz < 0.0) throw std::invalid_argument("poisson_spikes: rate must be >= 0");
    const double mean = rate_hz * dt;
    if (mean == 0.0) return 0;
    if (mean <= 0.1) return rng.bernoulli(mean) ? 1 : 0;
    return rng.poisson(mean);
}

/// Evaluation variant of a config: plasticity off, teacher compensation off.
/// Stream derivation is untouched, so input realizations match the original.
inline SimConfig disable_learning(SimConfig config) {
    config.plastic = false;
    config.learning.p_bernoulli = 0.0;
    config.learning.g_comp = 0.0;
    return config;
}

namespace detail {

/// Flattened view of the population list: per-unit rate pointers.
struct UnitTable {
    std::vector<const std::vector<double>*> unit_schedule;  // per unit

    explicit UnitTable(const std::vector<PopulationConfig>& pops) {
        for (const auto& pop : pops)
            for (std::size_t u = 0; u < pop.size; ++u) unit_schedule.push_back(&pop.segment_rates_hz);
    }

    std::size_t size() const { return unit_schedule.size(); }
    double rate(std::size_t unit, std::size_t segment) const {
        return (*unit_schedule[unit])[segment];
    }
};

}  // namespace detail

/**
 * Run the clocked simulation. Per step: (1) draw input and teacher spikes;
 * (2) read phase: every input spike reads its target synapses and injects
 * the weighted currents into the excitatory/inhibitory channels; (3)
 * integrate neurons, update the S and T traces, decay traces; (4) write
 * phase: every input spike triggers one update evaluation per target neuron,
 * with one Bernoulli gate draw shared by that neuron's synapses for the
 * event. Pure function of the config, including the seed.
 */
inline SpikeRecord run(const SimConfig& config) {
    config.validate();
    const std::size_t n_in = config.n_input_units();
    const std::size_t n_out = config.n_outputs;
    const std::size_t n_segments = config.segment_ends.size();
    const double dt = config.dt;

    const RandomStream master(config.seed);
    RandomStream input_rng = master.substream("network.inputs");
    RandomStream teacher_rng = master.substream("network.teacher");
    RandomStream device_rng = master.substream("network.device");
    RandomStream gate_rng = master.substream("network.bernoulli");
    RandomStream init_rng = master.substream("network.init");

    const WeightMapping mapping = WeightMapping::make(config.device, config.circuit);

    // Synapse layout: all inputs of output 0, then output 1, ...
    std::vector<Synapse> synapses;
    if (!config.initial_synapses.empty()) {
        synapses = config.initial_synapses;
    } else {
        synapses.resize(n_in * n_out);
        const double w0 = std::abs(WeightMapping::nominal_weight(DeviceParams::conservative(),
                                                                 config.circuit));
        const bool all_up = config.init_policy == InitPolicy::increase_all;
        for (auto& syn : synapses) {
            if (config.learning.mode == SynapseMode::high_res) {
                syn.weight = all_up ? w0 : init_rng.uniform(-w0, w0);
            } else {
                const auto dir = (all_up || init_rng.bernoulli(0.5))
                                     ? ProgramDirection::increase
                                     : ProgramDirection::decrease;
                syn.pair = program_pair(syn.pair, dir, config.device, init_rng);
                syn.weight = mapping.weight_of(syn.pair);
            }
        }
    }

    const detail::UnitTable input_units(config.inputs);
    const detail::UnitTable teacher_units(config.teachers);
    std::vector<std::size_t> teacher_unit_target;
    for (std::size_t pi = 0; pi < config.teachers.size(); ++pi)
        for (std::size_t u = 0; u < config.teachers[pi].size; ++u)
            teacher_unit_target.push_back(config.teacher_target[pi]);

    std::vector<NeuronState> neurons(n_out);
    std::vector<SynChannelState> exc(n_out), inh(n_out);
    std::vector<LearningState> traces(n_out);
    std::vector<double> drive_exc(n_out), drive_inh(n_out), i_syn_net(n_out);
    std::vector<int> teach_count(n_out);

    SpikeRecord record;
    record.output_spike_counts.assign(n_out, 0);

    // Per-unit Bernoulli probabilities for the active segment.
    std::vector<double> input_p(input_units.size()), teacher_p(teacher_units.size());
    std::size_t segment = static_cast<std::size_t>(-1);

    const std::size_t n_steps =
        static_cast<std::size_t>(std::ceil(config.duration() / dt - 1e-9));
    const std::size_t snap_every =
        config.record.weight_snapshot_interval > 0.0
            ? static_cast<std::size_t>(config.record.weight_snapshot_interval / dt + 0.5)
            : 0;

    std::vector<std::pair<std::uint32_t, int>> step_spikes;  // (input unit, count)

    for (std::size_t step = 0; step < n_steps; ++step) {
        const double t = static_cast<double>(step) * dt;

        // Advance the schedule segment and refresh per-unit probabilities.
        if (segment == static_cast<std::size_t>(-1) || t >= config.segment_ends[segment]) {
            segment = (segment == static_cast<std::size_t>(-1)) ? 0 : segment + 1;
            while (segment + 1 < n_segments && t >= config.segment_ends[segment]) ++segment;
            for (std::size_t u = 0; u < input_units.size(); ++u)
                input_p[u] = input_units.rate(u, segment);
            for (std::size_t u = 0; u < teacher_units.size(); ++u)
                teacher_p[u] = teacher_units.rate(u, segment);
        }

        // (1) Spike generation. Zero-rate units are skipped without touching
        // the stream; consumption order is unit-ascending and deterministic.
        step_spikes.clear();
        for (std::size_t u = 0; u < input_units.size(); ++u) {
            if (input_p[u] == 0.0) continue;
            const int c = poisson_spikes(input_p[u], dt, input_rng);
            if (c > 0) {
                step_spikes.emplace_back(static_cast<std::uint32_t>(u), c);
                record.stats.input_spikes += static_cast<std::uint64_t>(c);
                if (config.record.input_events)
                    for (int k = 0; k < c; ++k)
                        record.events.push_back({t, static_cast<std::uint32_t>(u), SpikeKind::input});
            }
        }
        std::fill(teach_count.begin(), teach_count.end(), 0);
        for (std::size_t u = 0; u < teacher_units.size(); ++u) {
            if (teacher_p[u] == 0.0) continue;
            const int c = poisson_spikes(teacher_p[u], dt, teacher_rng);
            if (c > 0) {
                teach_count[teacher_unit_target[u]] += c;
                record.stats.teacher_spikes += static_cast<std::uint64_t>(c);
                if (config.record.teacher_events)
                    for (int k = 0; k < c; ++k)
                        record.events.push_back({t, static_cast<std::uint32_t>(u), SpikeKind::teacher});
            }
        }

        // (2) Read phase: weighted impulse accumulation per channel.
        std::fill(drive_exc.begin(), drive_exc.end(), 0.0);
        std::fill(drive_inh.begin(), drive_inh.end(), 0.0);
        for (const auto& [unit, count] : step_spikes) {
            for (std::size_t j = 0; j < n_out; ++j) {
                const double w = synapses[j * n_in + unit].weight;
                if (w >= 0.0)
                    drive_exc[j] += count * w;
                else
                    drive_inh[j] -= count * w;
                record.stats.reads += static_cast<std::uint64_t>(count);
            }
        }

        // (3) Neuron integration and trace updates.
        for (std::size_t j = 0; j < n_out; ++j) {
            exc[j] = step_syn(exc[j], config.channel, dt, drive_exc[j]);
            inh[j] = step_syn(inh[j], config.channel, dt, drive_inh[j]);
            i_syn_net[j] = exc[j].i_syn - inh[j].i_syn;

            const double i_comp = compensation(traces[j], config.learning, t);
            const NeuronStepResult res =
                step_neuron(neurons[j], config.neuron, 0.0, i_comp, i_syn_net[j], dt);
            neurons[j] = res.state;
            if (res.spiked) {
                traces[j] = on_post_spike(traces[j], config.learning);
                record.stats.output_spikes++;
                record.output_spike_counts[j]++;
                if (config.record.output_events)
                    record.events.push_back({t, static_cast<std::uint32_t>(j), SpikeKind::output});
            }
            for (int k = 0; k < teach_count[j]; ++k)
                traces[j] = on_teacher_spike(traces[j], config.learning);
            traces[j] = decay_traces(traces[j], config.learning, dt);
        }

        // (4) Write phase: one evaluation per input spike per target neuron.
        if (config.plastic) {
            for (const auto& [unit, count] : step_spikes) {
                for (int k = 0; k < count; ++k) {
                    for (std::size_t j = 0; j < n_out; ++j) {
                        const double q = error_current(traces[j], config.learning, i_syn_net[j]);
                        int sign = 0;
                        if (config.learning.mode == SynapseMode::binary) {
                            const bool gate = gate_rng.bernoulli(config.learning.p_bernoulli);
                            sign = eval_update(traces[j], config.learning, i_syn_net[j], gate);
                        }
                        record.stats.write_evals++;
                        Synapse& syn = synapses[j * n_in + unit];
                        if (config.learning.mode == SynapseMode::high_res || sign != 0) {
                            syn = apply_presyn_update(syn, sign, q, config.learning,
                                                      config.device, mapping, device_rng);
                            record.stats.writes_applied++;
                        }
                    }
                }
            }
        }

        if (snap_every > 0 && step % snap_every == 0)
            for (std::size_t s = 0; s < synapses.size(); ++s)
                record.weight_snapshots.push_back({t, static_cast<std::uint32_t>(s),
                                                   synapses[s].weight});
    }

    record.final_synapses = std::move(synapses);
    return record;
}

/// Output spike count of one neuron within [t0, t1).
inline std::uint64_t count_output_spikes(const SpikeRecord& record, std::uint32_t neuron,
                                         double t0, double t1) {
    std::uint64_t n = 0;
    for (const auto& ev : record.events)
        if (ev.kind == SpikeKind::output && ev.source == neuron && ev.time >= t0 && ev.time < t1)
            ++n;
    return n;
}

}  // namespace memsyn
