// SPDX-License-Identifier: Apache-2.0
//
// Average rate allocation (ARA): powers stay at 1 and the total rate mR is
// split across the streams. With the last m_A streams active, the
// moderate-rate optimum is
//   R_i = ln snr + (mR - m_A ln snr) / (b k_i) + c_i,
//   a = sum_j ln((n - m_A + j - 1)!) / (n - m_A + j),
//   b = sum_j 1 / (n - m_A + j),            j = 1..m_A,
//   c_i = (ln((k_i - 1)!) - a / b) / k_i,   k_i = n - m + i.

#pragma once

#include "vblast/outage.hpp"
#include "vblast/system.hpp"

#include <string>
#include <vector>

namespace vblast {

struct AraCoefficients {
    double a = 0.0;
    double b = 0.0;
    std::vector<double> c;  ///< c[i] for 0-based stream i (all m streams)
    int active_count = 0;
};

AraCoefficients ara_coefficients(int rx_antennas, int tx_antennas, int active_count);

/// Closed-form rates with the last `active_count` streams active at SNR
/// `snr` and total rate `total_rate`. Inactive entries are 0; active entries
/// may come out negative, which marks the candidate infeasible.
std::vector<double> ara_candidate_rates(int rx_antennas, int tx_antennas, double snr, double total_rate,
                                        int active_count);

struct AraCandidate {
    int active_count = 0;
    Allocation allocation;
    bool feasible = false;  ///< every active rate is positive
    double p_out_exact = 1.0;
};

struct AraClosedForm {
    Allocation allocation;
    AraCoefficients coefficients;
    std::vector<AraCandidate> candidates;  ///< m_A = 1..m
    std::vector<std::string> warnings;
};

/// Evaluates every candidate active set and keeps the feasible one with the
/// lowest exact outage. Throws SolverFailure if none is feasible.
AraClosedForm ara_closed_form(const SystemConfig& cfg, const RateSpec& spec);

/// Largest m_A whose candidate has all active rates positive (at least 1).
int ara_active_set_by_positivity(const SystemConfig& cfg, const RateSpec& spec);

/// Rate water-filling at unit powers for an arbitrary total rate: bisection
/// on the slope multiplier nu with an inner monotone root-find per stream.
/// multiplier_rate is dP/dR_i of the chosen objective on the active set.
SolveResult ara_solve(const SystemConfig& cfg, double total_rate, Objective objective);

/// Optimal rates for fixed powers: streams with positive power share
/// `total_rate`. Returns the rate vector only.
std::vector<double> rates_for_powers(const SystemConfig& cfg, const std::vector<double>& powers, double total_rate,
                                     Objective objective);

/// ara_solve on the first-order objective at the RateSpec total rate.
SolveResult ara_exact(const SystemConfig& cfg, const RateSpec& spec);

/// ara_solve on the exact system outage at the RateSpec total rate.
SolveResult ara_exact_objective(const SystemConfig& cfg, const RateSpec& spec);

struct AraPrediction {
    int active_count = 0;
    double multiplier = 0.0;     ///< nu = snr^{-m_A/b} e^{(mR - a)/b}
    OutageReport outage;         ///< P_i = nu / k_i on the active set
    double p_out_direct = 0.0;   ///< sum of P_i = nu b
    double p_out_printed = 0.0;  ///< b (n - m_A + m - 1)! / (n - 1)! nu
    double diversity = 0.0;      ///< (m_A - r) / b
};

/// Closed-form optimised outage for the active set picked by ara_closed_form.
AraPrediction ara_predicted_outage(const SystemConfig& cfg, const RateSpec& spec);

/// Same prediction for a given active count.
AraPrediction ara_predicted_outage(const SystemConfig& cfg, const RateSpec& spec, int active_count);

}  // namespace vblast
