// SPDX-License-Identifier: Apache-2.0
//
// Joint average power and rate allocation (APRA). In the moderate-rate
// regime the optimum spreads the power budget uniformly, m / m_A, over the
// last m_A streams and splits the rate as ARA does at the boosted SNR
// (m / m_A) snr.

#pragma once

#include "vblast/alloc_ara.hpp"
#include "vblast/outage.hpp"
#include "vblast/system.hpp"

#include <string>
#include <vector>

namespace vblast {

struct ApraClosedForm {
    Allocation allocation;
    AraCoefficients coefficients;
    std::vector<AraCandidate> candidates;  ///< m_A = 1..m
    std::vector<std::string> warnings;
};

/// Uniform power m / k over the last k streams with ARA rates at SNR
/// (m / k) snr, for k = 1..m; keeps the feasible candidate with the lowest
/// exact outage. Throws SolverFailure if none is feasible.
ApraClosedForm apra_closed_form(const SystemConfig& cfg, const RateSpec& spec);

/// Joint minimisation of the first-order objective. For each candidate
/// active set, alternates the rate water-filling at fixed powers (multiplier
/// nu_R) with the power balance (1/alpha_i) dP_i/dR_i = nu_alpha at fixed
/// rates, until both multipliers move less than 1e-10 relative (at most 100
/// rounds). The candidate with the lowest first-order objective is returned.
SolveResult apra_exact(const SystemConfig& cfg, const RateSpec& spec);

/// Joint minimisation of the exact system outage by block-coordinate
/// descent: exact rate water-filling at fixed powers alternating with exact
/// power water-filling at fixed rates. Started from every candidate active
/// set and from the exact APA and ARA optima; the best end point is kept,
/// so the result never exceeds either of them.
SolveResult apra_exact_objective(const SystemConfig& cfg, const RateSpec& spec);

/// Same as apra_exact_objective for an explicit total rate.
SolveResult apra_solve_exact(const SystemConfig& cfg, double total_rate);

struct ThresholdReport {
    /// Multiplexing gain above which all m streams are active at the
    /// configuration's SNR.
    double r_threshold = 0.0;
    /// SNR (dB) above which all m streams are active at the RateSpec rate;
    /// +inf if that never happens.
    double snr_threshold_db = 0.0;
};

/// Active-set thresholds from the closed-form predicted outage with the
/// rate tied to ln snr, R = (r / m) ln snr: all m streams are active where
/// the m-stream candidate's predicted outage is the smallest.
ThresholdReport apra_threshold(const SystemConfig& cfg, const RateSpec& spec);

/// Same thresholds for ARA (no SNR boost).
ThresholdReport ara_threshold(const SystemConfig& cfg, const RateSpec& spec);

}  // namespace vblast
