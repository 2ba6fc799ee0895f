// SPDX-License-Identifier: Apache-2.0
//
// Problems dual to APA and ARA: the least total power, or the largest total
// rate, that keeps the exact system outage at a target epsilon.

#pragma once

#include "vblast/system.hpp"

namespace vblast {

class DualConstraint {
public:
    /// Throws std::invalid_argument unless 0 < epsilon < 1.
    explicit DualConstraint(double epsilon);
    double epsilon() const noexcept { return epsilon_; }

private:
    double epsilon_;
};

struct PowerDualResult {
    Allocation allocation;
    double total_power = 0.0;
    int iterations = 0;
    double residual = 0.0;    ///< |P_out - epsilon| / epsilon
    bool degenerate = false;  ///< budget below 1% of m: the target is met almost silently
};

/// Least total power at per-stream rate `rate` with exact P_out = epsilon.
/// The optimal split at budget P is the exact APA optimum at SNR snr P / m
/// scaled by P / m, so only the budget is searched, by bisection on ln P.
/// Throws SolverFailure when the target needs a budget beyond 1e12 m.
PowerDualResult min_total_power(const SystemConfig& cfg, double rate, const DualConstraint& constraint,
                                double tolerance = 1e-12);

struct RateDualResult {
    Allocation allocation;
    double total_rate = 0.0;
    int iterations = 0;
    double residual = 0.0;  ///< |P_out - epsilon| / epsilon
};

/// Largest total rate at unit powers whose exact-optimal rate split has
/// P_out = epsilon; bisection on the total rate around the exact ARA solve.
RateDualResult max_total_rate(const SystemConfig& cfg, const DualConstraint& constraint,
                              double tolerance = 1e-12);

}  // namespace vblast
