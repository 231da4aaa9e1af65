/**
 * (C) Copyright 2026 the memsyn authors.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include <catch2/catch_amalgamated.hpp>

#include <vector>

#include "memsyn/device.hpp"
#include "support/oracles.hpp"

using namespace memsyn;
using test_support::mean_of;
using test_support::std_of;

TEST_CASE("zero-variance sampling is exact", "[device]") {
    RandomStream rng(1);
    const StateDistribution dist{6000.0, 0.0, 100.0};
    for (int i = 0; i < 10; ++i) CHECK(sample_state(dist, rng).resistance_ohm == 6000.0);
}

TEST_CASE("sample moments match the distribution", "[device]") {
    RandomStream rng(7);
    const StateDistribution dist{6000.0, 1200.0, 100.0};
    std::vector<double> xs(100000);
    for (double& x : xs) x = sample_state(dist, rng).resistance_ohm;
    CHECK(mean_of(xs) == Catch::Approx(6000.0).epsilon(0.01));
    CHECK(std_of(xs) == Catch::Approx(1200.0).epsilon(0.03));
}

TEST_CASE("samples respect the truncation floor", "[device]") {
    RandomStream rng(3);
    const StateDistribution mild{3000.0, 600.0, 100.0};
    for (int i = 0; i < 1000; ++i) CHECK(sample_state(mild, rng).resistance_ohm >= 100.0);
    // Aggressive case where the floor actually bites.
    const StateDistribution hard{300.0, 600.0, 100.0};
    double lowest = 1e12;
    for (int i = 0; i < 20000; ++i)
        lowest = std::min(lowest, sample_state(hard, rng).resistance_ohm);
    CHECK(lowest >= 100.0);
    CHECK(lowest < 200.0);  // truncation region is actually exercised
}

TEST_CASE("programming has deterministic limits at zero variance", "[device]") {
    RandomStream rng(5);
    DeviceParams params{{6000.0, 0.0, 100.0}, {3000.0, 0.0, 100.0}};
    SynapsePair pair;
    pair = program_pair(pair, ProgramDirection::increase, params, rng);
    CHECK(pair.d_pos.resistance_ohm == 3000.0);
    CHECK(pair.d_neg.resistance_ohm == 6000.0);
    pair = program_pair(pair, ProgramDirection::decrease, params, rng);
    CHECK(pair.d_pos.resistance_ohm == 6000.0);
    CHECK(pair.d_neg.resistance_ohm == 3000.0);
}

TEST_CASE("every write is a fresh draw", "[device]") {
    RandomStream rng(11);
    const DeviceParams params = DeviceParams::conservative();
    SynapsePair pair;
    pair = program_pair(pair, ProgramDirection::increase, params, rng);
    const SynapsePair again = program_pair(pair, ProgramDirection::increase, params, rng);
    CHECK(pair.d_pos.resistance_ohm != again.d_pos.resistance_ohm);
    CHECK(pair.d_neg.resistance_ohm != again.d_neg.resistance_ohm);
}

TEST_CASE("increase-then-decrease matches decrease in distribution", "[device]") {
    const DeviceParams params = DeviceParams::conservative();
    RandomStream rng(13);
    constexpr int kTrials = 10000;
    std::vector<double> chained_pos(kTrials), chained_neg(kTrials);
    std::vector<double> direct_pos(kTrials), direct_neg(kTrials);
    for (int i = 0; i < kTrials; ++i) {
        SynapsePair p;
        p = program_pair(p, ProgramDirection::increase, params, rng);
        p = program_pair(p, ProgramDirection::decrease, params, rng);
        chained_pos[i] = p.d_pos.resistance_ohm;
        chained_neg[i] = p.d_neg.resistance_ohm;
        SynapsePair q;
        q = program_pair(q, ProgramDirection::decrease, params, rng);
        direct_pos[i] = q.d_pos.resistance_ohm;
        direct_neg[i] = q.d_neg.resistance_ohm;
    }
    // Two-sample mean comparison; tolerance 4 standard errors.
    const double se_pos = std::sqrt(2.0) * std_of(chained_pos) / std::sqrt(double(kTrials));
    const double se_neg = std::sqrt(2.0) * std_of(chained_neg) / std::sqrt(double(kTrials));
    CHECK(std::abs(mean_of(chained_pos) - mean_of(direct_pos)) < 4.0 * se_pos);
    CHECK(std::abs(mean_of(chained_neg) - mean_of(direct_neg)) < 4.0 * se_neg);
}

TEST_CASE("conductance ordering holds for well-separated states", "[device]") {
    const DeviceParams params = DeviceParams::typical();  // ~4.5 combined sigmas
    RandomStream rng(17);
    int violations = 0;
    for (int i = 0; i < 10000; ++i) {
        SynapsePair p;
        p = program_pair(p, ProgramDirection::increase, params, rng);
        if (conductance_siemens(p.d_pos) <= conductance_siemens(p.d_neg)) ++violations;
    }
    CHECK(violations <= 5);
}

TEST_CASE("sampling is reproducible bit-exactly", "[device]") {
    const StateDistribution dist{6000.0, 1200.0, 100.0};
    RandomStream a(99), b(99);
    for (int i = 0; i < 1000; ++i)
        CHECK(sample_state(dist, a).resistance_ohm == sample_state(dist, b).resistance_ohm);
}

TEST_CASE("invalid distributions are rejected", "[device]") {
    const StateDistribution bad_mean{-1.0, 0.0, 100.0};
    const StateDistribution bad_std{100.0, -1.0, 100.0};
    const StateDistribution bad_floor{100.0, 0.0, 0.0};
    CHECK_THROWS_AS(bad_mean.validate(), std::invalid_argument);
    CHECK_THROWS_AS(bad_std.validate(), std::invalid_argument);
    CHECK_THROWS_AS(bad_floor.validate(), std::invalid_argument);
    const DeviceParams inverted{{3000.0, 0.0, 100.0}, {6000.0, 0.0, 100.0}};
    CHECK_THROWS_AS(inverted.validate(), std::invalid_argument);
}
