/**
 * (C) Copyright 2026 the memsyn authors.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "memsyn/learning.hpp"
#include "support/oracles.hpp"

using namespace memsyn;
using test_support::mean_of;

TEST_CASE("traces decay with the learning time constant", "[learning]") {
    const LearningParams p = LearningParams::mnist_defaults();
    LearningState s{0.0, 100e-12};
    s = decay_traces(s, p, p.tau_learn);
    CHECK(s.s_trace == Catch::Approx(100e-12 * std::exp(-1.0)).epsilon(1e-12));
    LearningState frozen{3e-12, 4e-12};
    const LearningState same = decay_traces(frozen, p, 0.0);
    CHECK(same.t_trace == frozen.t_trace);
    CHECK(same.s_trace == frozen.s_trace);
    LearningState zero;
    zero = decay_traces(zero, p, 1.0);
    CHECK(zero.t_trace == 0.0);
    CHECK(zero.s_trace == 0.0);
}

TEST_CASE("spikes add their trace weights", "[learning]") {
    const LearningParams p = LearningParams::mnist_defaults();
    LearningState s;
    s = on_post_spike(s, p);
    CHECK(s.s_trace == Catch::Approx(200e-12));
    s = on_teacher_spike(s, p);
    CHECK(s.t_trace == Catch::Approx(40e-12));
    s = on_teacher_spike(s, p);
    CHECK(s.t_trace == Catch::Approx(80e-12));
}

TEST_CASE("compensation follows the trace difference until teaching stops", "[learning]") {
    LearningParams p = LearningParams::mnist_defaults();
    p.t_stop = 1.0;
    CHECK(compensation({40e-12, 40e-12}, p, 0.5) == 0.0);
    CHECK(compensation({40e-12, 0.0}, p, 0.5) == Catch::Approx(40e-12));
    CHECK(compensation({40e-12, 0.0}, p, 1.0) == 0.0);
    CHECK(compensation({40e-12, 0.0}, p, 2.0) == 0.0);
}

TEST_CASE("update decision gates on the dead zone and the Bernoulli draw", "[learning]") {
    LearningParams p = LearningParams::single_pattern_defaults();  // alpha = 500 pA, s0 = 0
    const LearningState s{0.0, 0.0};
    CHECK(eval_update(s, p, -600e-12, true) == +1);   // q = +600 pA
    CHECK(eval_update(s, p, -600e-12, false) == 0);
    CHECK(eval_update(s, p, +600e-12, true) == -1);   // q = -600 pA
    CHECK(eval_update(s, p, -400e-12, true) == 0);    // inside the dead zone
}

TEST_CASE("dead zone suppresses every update", "[learning]") {
    LearningParams p = LearningParams::mnist_defaults();  // alpha = 300 pA
    RandomStream rng(3);
    for (int k = 0; k < 10000; ++k) {
        LearningState s{0.0, rng.uniform(0.0, 2e-9)};
        const double q_target = rng.uniform(-p.alpha, p.alpha);
        const double i_syn = s.s_trace + p.s0 - q_target;
        CHECK(eval_update(s, p, i_syn, true) == 0);
    }
}

TEST_CASE("gate frequency converges to the Bernoulli probability", "[learning]") {
    LearningParams p = LearningParams::mnist_defaults();
    RandomStream rng(5);
    const LearningState s{0.0, 2e-9};  // q = 1.5 nA, far outside the dead zone
    constexpr int kEvents = 100000;
    int nonzero = 0;
    for (int k = 0; k < kEvents; ++k)
        nonzero += eval_update(s, p, 0.0, rng.bernoulli(p.p_bernoulli)) != 0;
    const double freq = static_cast<double>(nonzero) / kEvents;
    const double tol = 3.0 * std::sqrt(p.p_bernoulli * (1 - p.p_bernoulli) / kEvents);
    CHECK(std::abs(freq - p.p_bernoulli) < tol);
}

TEST_CASE("no-op decisions leave the synapse untouched", "[learning]") {
    const LearningParams p = LearningParams::mnist_defaults();
    const WeightMapping mapping = WeightMapping::make(DeviceParams::conservative(), {});
    RandomStream rng(7);
    Synapse syn;
    syn.pair = {DeviceState{3100.0}, DeviceState{5900.0}};
    syn.weight = mapping.weight_of(syn.pair);
    const Synapse after = apply_presyn_update(syn, 0, 1e-9, p, DeviceParams::conservative(),
                                              mapping, rng);
    CHECK(after.pair.d_pos.resistance_ohm == syn.pair.d_pos.resistance_ohm);
    CHECK(after.pair.d_neg.resistance_ohm == syn.pair.d_neg.resistance_ohm);
    CHECK(after.weight == syn.weight);
}

TEST_CASE("binary updates are push-pull symmetric at zero variance", "[learning]") {
    const LearningParams p = LearningParams::mnist_defaults();
    const DeviceParams dev{{6000.0, 0.0, 100.0}, {3000.0, 0.0, 100.0}};
    const WeightMapping mapping = WeightMapping::make(dev, {});
    RandomStream rng(9);
    Synapse up = apply_presyn_update({}, +1, 1e-9, p, dev, mapping, rng);
    Synapse down = apply_presyn_update({}, -1, -1e-9, p, dev, mapping, rng);
    CHECK(up.weight > 0.0);
    CHECK(up.weight == Catch::Approx(-down.weight).epsilon(1e-12));
    CHECK(std::abs(up.weight) <= 1.0);
}

TEST_CASE("high-resolution updates integrate the normalized error", "[learning]") {
    LearningParams p = LearningParams::mnist_defaults();
    p.mode = SynapseMode::high_res;
    const WeightMapping mapping = WeightMapping::make(DeviceParams::conservative(), {});
    RandomStream rng(11);
    Synapse syn;
    syn.weight = 0.25;
    // One event with q = 1000 pA against i_b = 20 nA: step = 1e-4 * 0.05.
    syn = apply_presyn_update(syn, 0, 1000e-12, p, DeviceParams::conservative(), mapping, rng);
    CHECK(syn.weight == Catch::Approx(0.25 + 1e-4 * 0.05).epsilon(1e-9));
    // Saturating steps clip at the rails.
    syn.weight = 0.999999;
    for (int k = 0; k < 1000; ++k)
        syn = apply_presyn_update(syn, 0, 20e-9, p, DeviceParams::conservative(), mapping, rng);
    CHECK(syn.weight == 1.0);
}

TEST_CASE("binary weights form sign-symmetric clusters", "[learning]") {
    const LearningParams p = LearningParams::mnist_defaults();
    const DeviceParams dev = DeviceParams::typical();  // well-separated states
    const WeightMapping mapping = WeightMapping::make(dev, {});
    RandomStream rng(13);
    std::vector<double> ups, downs;
    for (int k = 0; k < 2000; ++k) {
        const int sign = (k % 2 == 0) ? +1 : -1;
        const Synapse syn = apply_presyn_update({}, sign, 0.0, p, dev, mapping, rng);
        CHECK((sign > 0 ? syn.weight > 0.0 : syn.weight < 0.0));  // sign = last update
        (sign > 0 ? ups : downs).push_back(syn.weight);
    }
    CHECK(mean_of(ups) == Catch::Approx(-mean_of(downs)).epsilon(0.05));
    CHECK(mean_of(ups) > 0.1);
}

TEST_CASE("weight rescale equalizes the two device settings", "[learning]") {
    const CircuitParams circuit;
    const WeightMapping conservative = WeightMapping::make(DeviceParams::conservative(), circuit);
    const WeightMapping typical = WeightMapping::make(DeviceParams::typical(), circuit);
    CHECK(conservative.scale == Catch::Approx(1.0).epsilon(1e-12));
    CHECK(typical.scale < 1.0);
    // Nominal weights agree after the rescale.
    const SynapsePair cons_pair{DeviceState{3000.0}, DeviceState{6000.0}};
    const SynapsePair typ_pair{DeviceState{10e3}, DeviceState{100e3}};
    CHECK(conservative.weight_of(cons_pair) ==
          Catch::Approx(typical.weight_of(typ_pair)).epsilon(1e-9));
}

TEST_CASE("signed updates pull the expected error toward zero", "[learning]") {
    // Frozen snapshot: the dendritic drive is w * c with c > 0, the somatic
    // side is fixed, and one update with L = sign(q) is applied. Averaged
    // over the programming noise, |q| must shrink.
    const LearningParams p = LearningParams::mnist_defaults();
    const DeviceParams dev = DeviceParams::conservative();
    const CircuitParams circuit;
    const WeightMapping mapping = WeightMapping::make(dev, circuit);
    const double drive = 5e-9;       // i_syn_net per unit weight
    const double somatic = 0.5e-9;   // s_trace + s0

    // Weights far from the fixed point; close to it the sign step overshoots,
    // which is what the dead zone exists to prevent.
    RandomStream rng(17);
    for (double w0 : {-0.9, -0.5, 0.6}) {
        const double q_before = somatic - w0 * drive;
        const int sign = q_before > 0 ? +1 : -1;
        std::vector<double> q_after(1000);
        for (auto& q : q_after) {
            Synapse syn;
            syn.weight = w0;
            syn.pair = {DeviceState{4000.0}, DeviceState{4000.0}};
            const Synapse updated = apply_presyn_update(syn, sign, q_before, p, dev, mapping, rng);
            q = somatic - updated.weight * drive;
        }
        CHECK(std::abs(mean_of(q_after)) < std::abs(q_before));
    }
}
