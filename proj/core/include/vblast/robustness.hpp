// SPDX-License-Identifier: Apache-2.0
//
// Local sensitivity of the optimised outage, delta = |(dP/P) / (du/u)|, to a
// single power or rate u of an allocation strategy's optimum.

#pragma once

#include "vblast/outage.hpp"
#include "vblast/strategy.hpp"
#include "vblast/system.hpp"

#include <string>
#include <vector>

namespace vblast {

enum class SensitivityParameter { power, rate };
enum class SensitivityMethod { closed_form, multiplier, finite_difference };

const char* to_string(SensitivityParameter parameter) noexcept;
const char* to_string(SensitivityMethod method) noexcept;

struct SensitivityReport {
    SensitivityParameter parameter = SensitivityParameter::power;
    int stream = 0;  ///< 0-based
    double delta = 0.0;
    SensitivityMethod method = SensitivityMethod::closed_form;
    /// Objective whose optimum (and outage) the estimate refers to.
    Objective objective = Objective::approximate;
    bool one_sided = false;
    bool constraint_preserving = false;

    /// e.g. "power_2 finite_difference exact".
    std::string label() const;
};

/// Low-outage closed forms at the strategy's closed-form optimum:
///   APA:  delta_1 = n - m + 1, delta_i = b_i (n - m + 1) / m c^{(i-1)/(k_i+1)};
///   ARA:  delta_{R_i} = (n-1)! / (b (n - m_A + m - 1)!) R_i for active i;
///   APRA: the ARA rate form at the boosted SNR and, for every active power,
///         (n-1)! / (b (n - m_A + m - 1)!).
/// Throws std::invalid_argument for the uniform strategy.
std::vector<SensitivityReport> sensitivity_closed_form(const SystemConfig& cfg, const RateSpec& spec,
                                                       Strategy strategy);

struct SensitivityOptions {
    /// Optimum to perturb: first-order (SolveMethod::first_order) or exact.
    Objective objective = Objective::exact;
    /// Compensate the move on the other active parameters of the same kind
    /// so that the budget is kept.
    bool constraint_preserving = false;
    /// -1: system outage; otherwise the outage of this 0-based stream.
    int outage_stream = -1;
};

struct SensitivityEstimate {
    SensitivityReport finite_difference;
    /// nu u / P_out with nu the optimum's multiplier; NaN where the strategy
    /// has no multiplier for the parameter or a single-stream outage is
    /// requested.
    SensitivityReport multiplier;
};

/// Central difference with relative step h in [1e-6, 1e-2] at the
/// strategy's optimum for `options.objective`.
SensitivityEstimate sensitivity_finite_difference(const SystemConfig& cfg, const RateSpec& spec,
                                                  Strategy strategy, SensitivityParameter parameter,
                                                  int stream, double step,
                                                  const SensitivityOptions& options = {});

/// Same estimate at a given optimum (multipliers from its diagnostics).
SensitivityEstimate sensitivity_at(const SystemConfig& cfg, const SolveResult& optimum,
                                   SensitivityParameter parameter, int stream, double step,
                                   const SensitivityOptions& options = {});

}  // namespace vblast
