// SPDX-License-Identifier: Apache-2.0
//
// Uniform entry point over the allocation strategies.

#pragma once

#include "vblast/system.hpp"

#include <optional>
#include <string_view>

namespace vblast {

enum class Strategy { uniform, apa, ara, apra };

enum class SolveMethod {
    closed_form,  ///< low-outage closed-form allocation
    first_order,  ///< numerical optimum of the first-order objective
    exact,        ///< numerical optimum of the exact system outage
};

const char* to_string(Strategy strategy) noexcept;
const char* to_string(SolveMethod method) noexcept;
/// Accepts the lower-case names returned by to_string.
std::optional<Strategy> parse_strategy(std::string_view name);
std::optional<SolveMethod> parse_method(std::string_view name);

/// Solves `strategy` at the rate given by `spec`. The uniform strategy
/// ignores the method. Closed-form results carry NaN multipliers.
SolveResult solve_strategy(const SystemConfig& cfg, const RateSpec& spec, Strategy strategy,
                           SolveMethod method);

}  // namespace vblast
