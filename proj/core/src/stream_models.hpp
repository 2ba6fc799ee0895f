// SPDX-License-Identifier: Apache-2.0
//
// Per-stream marginals used by the allocation solvers.
//
// Minimising the exact P_out = 1 - prod(1 - P_i) is the same as minimising
// the separable sum of h_i = -ln(1 - P_i), so both objectives reduce to
// per-stream convex terms: x^k / k! (first order) or h (exact), with
// x = (e^R - 1) / (alpha snr).
//
// Rate marginals are written in terms of the stream gain s = alpha snr,
// power marginals in terms of c = (e^R - 1) / snr, so that x = c / alpha.

#pragma once

#include "vblast/outage.hpp"

namespace vblast::detail {

/// ln d/dR of the stream term. -inf at R = 0 when k > 1.
double log_rate_slope(Objective objective, int k, double gain, double rate);

/// Rate whose slope equals exp(log_slope); 0 when the slope at R = 0
/// already exceeds it.
double rate_for_slope(Objective objective, int k, double gain, double log_slope);

/// ln(-d/dalpha) of the stream term at power alpha > 0.
double log_power_price(Objective objective, int k, double c, double alpha);

/// Power whose price equals exp(log_price). Requires c > 0.
double power_for_price(Objective objective, int k, double c, double log_price);

/// Power solving the moderate-rate balance -(1/alpha) dP/dR = -nu_alpha of
/// the first-order term at fixed rate R > 0, for nu = exp(log_nu).
double moderate_rate_power(int k, double snr, double rate, double log_nu);

/// Stream term value: x^k / k! or -ln(1 - F_k(x)).
double stream_term(Objective objective, int k, double x);

}  // namespace vblast::detail

#include "vblast/water_filling.hpp"

#include <span>

namespace vblast::detail {

/// Minimises the separable objective over rates at fixed powers: streams
/// with positive power share `total_rate`, the others get rate 0.
BudgetSplit split_rates(const SystemConfig& cfg, std::span<const double> powers, double total_rate,
                        Objective objective);

/// Minimises the separable objective over powers at fixed rates: streams
/// with positive rate share `budget`, the others get power 0.
BudgetSplit split_powers(const SystemConfig& cfg, std::span<const double> rates, double budget,
                         Objective objective);

}  // namespace vblast::detail
