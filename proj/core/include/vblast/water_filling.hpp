// SPDX-License-Identifier: Apache-2.0
//
// One-dimensional root finding and multiplier search for separable
// resource splits: minimise sum_i phi_i(x_i) subject to sum_i x_i = total,
// x_i >= 0, with every phi_i convex. For a multiplier mu each stream's
// optimal level x_i(mu) is monotone in mu, so the constraint pins mu by
// bisection on ln mu.

#pragma once

#include <functional>
#include <vector>

namespace vblast {

/// Root of f(x) = target for nondecreasing f on [lo, hi). If f(hi) < target
/// the upper end is pushed out geometrically. Returns lo when f(lo) >= target.
double solve_nondecreasing(const std::function<double(double)>& f, double target,
                           double lo, double hi, double abs_tol = 1e-14);

enum class LevelTrend { increasing, decreasing };

struct BudgetSplit {
    std::vector<double> values;
    double log_multiplier = 0.0;
    int iterations = 0;
    /// Relative |sum - total| at the final multiplier, before the rounding
    /// remainder is folded into the largest level.
    double residual = 0.0;
};

/// `level(i, ln_mu)` returns stream i's level for multiplier exp(ln_mu);
/// every level must follow `trend` in ln_mu. The returned values sum to
/// `total` to rounding.
BudgetSplit split_budget(int count, double total, LevelTrend trend,
                         const std::function<double(int, double)>& level,
                         double log_multiplier_guess);

}  // namespace vblast
