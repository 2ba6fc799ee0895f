// SPDX-License-Identifier: Apache-2.0

#include "vblast/water_filling.hpp"

#include "vblast/system.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace vblast {

double solve_nondecreasing(const std::function<double(double)>& f, double target,
                           double lo, double hi, double abs_tol) {
    if (!(hi > lo)) throw std::invalid_argument("solve_nondecreasing: empty bracket");
    if (f(lo) >= target) return lo;
    int grow = 0;
    while (f(hi) < target) {
        const double width = hi - lo;
        lo = hi;
        hi += 2.0 * width + 1.0;
        if (++grow > 200) throw SolverFailure("solve_nondecreasing: could not bracket root");
    }
    for (int it = 0; it < 400; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi || hi - lo <= abs_tol * std::max(1.0, std::abs(mid))) break;
        if (f(mid) < target)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

BudgetSplit split_budget(int count, double total, LevelTrend trend,
                         const std::function<double(int, double)>& level,
                         double log_multiplier_guess) {
    if (count < 1) throw std::invalid_argument("split_budget: no streams");
    if (!(total > 0.0)) throw std::invalid_argument("split_budget: total must be positive");

    BudgetSplit out;
    out.values.assign(static_cast<std::size_t>(count), 0.0);
    auto sum_at = [&](double t) {
        double s = 0.0;
        for (int i = 0; i < count; ++i) s += level(i, t);
        ++out.iterations;
        return s;
    };
    // g(t) is increasing in t regardless of the level trend.
    const double sign = trend == LevelTrend::increasing ? 1.0 : -1.0;
    auto excess = [&](double t) { return sign * (sum_at(t) - total); };

    double lo = log_multiplier_guess;
    double hi = log_multiplier_guess;
    double step = 1.0;
    while (excess(lo) > 0.0) {
        lo -= step;
        step *= 2.0;
        if (step > 1e5) throw SolverFailure("split_budget: cannot bracket multiplier from below");
    }
    step = 1.0;
    while (excess(hi) < 0.0) {
        hi += step;
        step *= 2.0;
        if (step > 1e5) throw SolverFailure("split_budget: cannot bracket multiplier from above");
    }
    for (int it = 0; it < 300; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (excess(mid) < 0.0)
            lo = mid;
        else
            hi = mid;
    }

    // Take whichever bracket end sits closer to the budget.
    double sum_lo = 0.0, sum_hi = 0.0;
    std::vector<double> at_lo(out.values.size()), at_hi(out.values.size());
    for (int i = 0; i < count; ++i) {
        at_lo[static_cast<std::size_t>(i)] = level(i, lo);
        at_hi[static_cast<std::size_t>(i)] = level(i, hi);
        sum_lo += at_lo[static_cast<std::size_t>(i)];
        sum_hi += at_hi[static_cast<std::size_t>(i)];
    }
    const bool take_lo = std::abs(sum_lo - total) <= std::abs(sum_hi - total);
    out.values = take_lo ? at_lo : at_hi;
    out.log_multiplier = take_lo ? lo : hi;
    const double sum = take_lo ? sum_lo : sum_hi;
    out.residual = std::abs(sum - total) / total;

    auto largest = std::max_element(out.values.begin(), out.values.end());
    *largest += total - sum;
    if (*largest < 0.0) *largest = 0.0;
    return out;
}

}  // namespace vblast
