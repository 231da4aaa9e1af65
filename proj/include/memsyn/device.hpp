/**
 * (C) Copyright 2026 the memsyn authors.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#pragma once

#include <stdexcept>

#include "memsyn/random.hpp"

namespace memsyn {

/// Gaussian sampling distribution for one resistive state, truncated below
/// at `floor_ohm` by resampling (no probability atom at the floor).
struct StateDistribution {
    double mean_ohm = 0.0;
    double std_ohm = 0.0;
    double floor_ohm = 100.0;

    void validate() const {
        if (mean_ohm <= 0.0) throw std::invalid_argument("StateDistribution: mean must be > 0");
        if (std_ohm < 0.0) throw std::invalid_argument("StateDistribution: std_dev must be >= 0");
        if (floor_ohm <= 0.0) throw std::invalid_argument("StateDistribution: floor must be > 0");
    }
};

/// High/low resistive-state pair describing one device technology setting.
struct DeviceParams {
    StateDistribution high_state;
    StateDistribution low_state;

    void validate() const {
        high_state.validate();
        low_state.validate();
        if (high_state.mean_ohm <= low_state.mean_ohm)
            throw std::invalid_argument("DeviceParams: high-state mean must exceed low-state mean");
    }

    /// Conservative small-ratio states, 6 kOhm / 3 kOhm with 20% spread.
    /// This is the wide-spread ("high CV") device setting.
    static DeviceParams conservative() {
        return {{6000.0, 1200.0, 100.0}, {3000.0, 600.0, 100.0}};
    }

    /// Typical large-ratio states, 100 kOhm / 10 kOhm with 20% spread.
    /// This is the tight ("low CV") device setting.
    static DeviceParams typical() {
        return {{100e3, 20e3, 100.0}, {10e3, 2e3, 100.0}};
    }
};

struct DeviceState {
    double resistance_ohm = 0.0;
};

inline double conductance_siemens(const DeviceState& d) { return 1.0 / d.resistance_ohm; }

/// Differential pair: the synapse weight is encoded as the difference
/// between the conductances of d_pos and d_neg.
struct SynapsePair {
    DeviceState d_pos;
    DeviceState d_neg;
};

enum class ProgramDirection { increase, decrease };

/// Draw a device resistance from a state distribution, resampling until the
/// value clears the truncation floor.
inline DeviceState sample_state(const StateDistribution& dist, RandomStream& rng) {
    double r;
    do {
        r = rng.gaussian(dist.mean_ohm, dist.std_ohm);
    } while (r < dist.floor_ohm);
    return DeviceState{r};
}

/**
 * Push-pull reprogramming of a differential pair. Increasing the weight
 * redraws d_pos from the low-resistance (high-conductance) state and d_neg
 * from the high-resistance state; decreasing does the complement. Every
 * write is a fresh draw, which models cycle-to-cycle programming spread.
 */
inline SynapsePair program_pair(const SynapsePair&, ProgramDirection direction,
                                const DeviceParams& params, RandomStream& rng) {
    SynapsePair out;
    if (direction == ProgramDirection::increase) {
        out.d_pos = sample_state(params.low_state, rng);
        out.d_neg = sample_state(params.high_state, rng);
    } else {
        out.d_pos = sample_state(params.high_state, rng);
        out.d_neg = sample_state(params.low_state, rng);
    }
    return out;
}

}  // namespace memsyn
