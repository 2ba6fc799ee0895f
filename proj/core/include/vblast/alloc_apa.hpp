// SPDX-License-Identifier: Apache-2.0
//
// Average power allocation (APA): every stream carries the same rate R and
// the total power m is split to minimise the system outage.
//
// In the low-outage regime the optimum is
//   alpha_i = b_i c^{(i-1)/(k_i+1)},  i = 2..m  (1-based),
//   alpha_1 = m - sum_{i>=2} alpha_i,
// with c = (e^R - 1) / snr, k_i = n - m + i and
//   b_i = [m^{n-m+2} (n-m)! / (n-m+i-1)!]^{1/(n-m+i+1)}.

#pragma once

#include "vblast/outage.hpp"
#include "vblast/system.hpp"

#include <string>
#include <vector>

namespace vblast {

struct ApaCoefficients {
    /// b[j] is the coefficient of 0-based stream j + 1 (b_2..b_m).
    std::vector<double> b;
};

ApaCoefficients apa_coefficients(int rx_antennas, int tx_antennas);

struct ApaClosedForm {
    Allocation allocation;
    ApaCoefficients coefficients;
    std::vector<std::string> warnings;
};

/// Closed-form low-outage allocation. Warns when R >= ln(1 + snr); throws
/// SolverFailure when the first stream's power comes out nonpositive.
ApaClosedForm apa_closed_form(const SystemConfig& cfg, double rate);

/// Minimises the first-order objective: alpha_i is explicit in the power
/// price lambda, which is found by bisection on the power budget.
/// multiplier_power is lambda.
SolveResult apa_kkt_approximate(const SystemConfig& cfg, double rate);

/// Minimises the exact system outage by water-filling on the separable form
/// sum_i -ln(1 - P_i). multiplier_power is -dP_out/dalpha_i at the optimum.
SolveResult apa_exact(const SystemConfig& cfg, double rate);

/// Same optimum as apa_exact reached by projected-gradient descent on P_out
/// over the power simplex (powers floored at 1e-12).
SolveResult apa_exact_projected_gradient(const SystemConfig& cfg, double rate,
                                         double tolerance = 1e-9, int max_iterations = 10000);

struct ApaPrediction {
    OutageReport outage;             ///< closed-form optimised outage
    std::vector<double> diversity;   ///< d_i = k_i (n - m + 2) / (k_i + 1)
};

/// Optimised per-stream outage: P_1 = (c/m)^{k_1} / k_1! and, for i >= 2,
/// P_i = b_i^{-k_i} c^{d_i} / k_i!.
ApaPrediction apa_predicted_outage(const SystemConfig& cfg, double rate);

struct GainReport {
    double gain_linear = 1.0;
    double gain_db = 0.0;
};

/// SNR gain G of `alloc`: the uniform allocation with every power equal to G
/// and every rate `rate` has the same exact outage as `alloc`.
GainReport snr_gain(const SystemConfig& cfg, double rate, const Allocation& alloc);

}  // namespace vblast
