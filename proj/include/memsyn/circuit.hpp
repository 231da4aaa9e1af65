/**
 * (C) Copyright 2026 the memsyn authors.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "memsyn/device.hpp"

namespace memsyn {

/// Sub-threshold read-path constants and bias settings.
struct CircuitParams {
    double v_rd = 1.8;        ///< read supply [V]
    double v_s = 0.9;         ///< source bias of the sensing transistors [V]
    double i_b = 20e-9;       ///< normalizer tail bias [A]
    double kappa = 0.7;       ///< sub-threshold slope factor
    double u_t = 25.85e-3;    ///< thermal voltage [V]
    double i0_fet = 70e-12;   ///< transistor leakage scale [A]

    void validate() const {
        if (v_rd <= v_s) throw std::invalid_argument("CircuitParams: v_rd must exceed v_s");
        if (i_b <= 0.0) throw std::invalid_argument("CircuitParams: i_b must be > 0");
        if (kappa <= 0.0 || kappa > 1.0)
            throw std::invalid_argument("CircuitParams: kappa must be in (0, 1]");
        if (u_t <= 0.0) throw std::invalid_argument("CircuitParams: u_t must be > 0");
        if (i0_fet <= 0.0) throw std::invalid_argument("CircuitParams: i0_fet must be > 0");
    }
};

/// Normalized output current pair of one differential read.
struct ReadResult {
    double i_pos = 0.0;
    double i_neg = 0.0;
};

class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Branch current in the zero-resistance limit: the exponential device-drop
/// factor degenerates to 1.
inline double branch_current_limit(const CircuitParams& p) {
    return p.i0_fet * std::exp((p.kappa * p.v_rd - p.v_s) / p.u_t);
}

/**
 * Current through a device of resistance r in series with the diode-connected
 * sensing transistor. Solves
 *
 *     I = i0 * exp(-kappa * r * I / u_t) * exp((kappa * v_rd - v_s) / u_t)
 *
 * by bisection on [0, I(r->0)]. The right-hand side is strictly decreasing in
 * I, so the root is unique and the bracket cannot fail.
 */
inline double branch_current_exact(double r, const CircuitParams& p) {
    if (r <= 0.0) throw std::invalid_argument("branch_current_exact: resistance must be > 0");
    const double i_max = branch_current_limit(p);
    if (!std::isfinite(i_max) || i_max <= 0.0)
        throw SolverError("branch_current_exact: pathological parameters, no finite bracket");

    const double slope = p.kappa * r / p.u_t;  // exponent per ampere
    auto rhs = [&](double i) { return i_max * std::exp(-slope * i); };

    double lo = 0.0, hi = i_max;
    double mid = 0.5 * (lo + hi);
    constexpr int kMaxIter = 200;
    constexpr double kRelTol = 1e-12;
    for (int it = 0; it < kMaxIter; ++it) {
        mid = 0.5 * (lo + hi);
        if (rhs(mid) > mid)
            lo = mid;
        else
            hi = mid;
        if (hi - lo <= kRelTol * hi) break;
    }
    const double root = 0.5 * (lo + hi);
    const double residual = std::abs(rhs(root) - root) / root;
    if (!(residual < 1e-9))
        throw SolverError("branch_current_exact: no convergence, residual " +
                          std::to_string(residual));
    return root;
}

/// Closed-form linearization of the branch current, valid while the voltage
/// drop across the device stays a small fraction of u_t / kappa.
inline double branch_current_linear(double r, const CircuitParams& p) {
    if (r <= 0.0) throw std::invalid_argument("branch_current_linear: resistance must be > 0");
    const double denom =
        std::exp(-(p.kappa * p.v_rd - p.v_s) / p.u_t) + (p.kappa / p.u_t) * r * p.i0_fet;
    return p.i0_fet / denom;
}

/// Ideal current normalizer: each output gets its input's share of the input
/// sum, rescaled to the tail bias.
inline ReadResult normalizer(double i_m1, double i_m4, double i_b) {
    if (i_m1 < 0.0 || i_m4 < 0.0)
        throw std::invalid_argument("normalizer: input currents must be >= 0");
    const double sum = i_m1 + i_m4;
    if (sum <= 0.0) throw std::domain_error("normalizer: both inputs zero");
    return ReadResult{i_b * i_m1 / sum, i_b * i_m4 / sum};
}

/// Full differential read: sense both devices, normalize to the tail bias.
inline ReadResult read_synapse(const SynapsePair& pair, const CircuitParams& p) {
    return normalizer(branch_current_exact(pair.d_pos.resistance_ohm, p),
                      branch_current_exact(pair.d_neg.resistance_ohm, p), p.i_b);
}

/// Multi-device extension: n branches share one normalizer, each output is
/// that branch's share of the tail bias.
inline std::vector<double> multi_branch(std::span<const double> conductances,
                                        const CircuitParams& p) {
    if (conductances.size() < 2)
        throw std::invalid_argument("multi_branch: need at least 2 branches");
    std::vector<double> currents(conductances.size());
    double sum = 0.0;
    for (std::size_t k = 0; k < conductances.size(); ++k) {
        if (conductances[k] <= 0.0)
            throw std::invalid_argument("multi_branch: conductances must be > 0");
        currents[k] = branch_current_exact(1.0 / conductances[k], p);
        sum += currents[k];
    }
    for (double& i : currents) i = p.i_b * i / sum;
    return currents;
}

enum class BranchWeighting { unit, binary };

/**
 * Combine per-branch currents into a differential output. The first `split`
 * branches form the positive side, the rest the negative side. Binary
 * weighting scales branch x by 2^x on the positive side and 2^(x - split) on
 * the negative side (zero-based indices), which expands the dynamic range.
 */
inline std::pair<double, double> combine_weighted(std::span<const double> currents,
                                                  std::size_t split, BranchWeighting weighting) {
    if (split < 1 || split > currents.size())
        throw std::invalid_argument("combine_weighted: split must be in [1, n]");
    double i_pos = 0.0, i_neg = 0.0;
    for (std::size_t x = 0; x < currents.size(); ++x) {
        if (weighting == BranchWeighting::unit) {
            (x < split ? i_pos : i_neg) += currents[x];
        } else {
            if (x < split)
                i_pos += std::ldexp(currents[x], static_cast<int>(x));
            else
                i_neg += std::ldexp(currents[x], static_cast<int>(x - split));
        }
    }
    return {i_pos, i_neg};
}

/// Active-feedback read variant: the device bottom nodes are servoed to a
/// reference, so the branch currents are exactly linear in conductance and
/// the normalized outputs reduce to the ideal conductance ratio.
inline ReadResult active_read(double g_pos, double g_neg, double v_rd, double v_ref, double i_b) {
    if (v_rd <= v_ref) throw std::invalid_argument("active_read: v_rd must exceed v_ref");
    if (g_pos <= 0.0 || g_neg <= 0.0)
        throw std::invalid_argument("active_read: conductances must be > 0");
    const double i_m1 = g_pos * (v_rd - v_ref);
    const double i_m4 = g_neg * (v_rd - v_ref);
    return normalizer(i_m1, i_m4, i_b);
}

}  // namespace memsyn
