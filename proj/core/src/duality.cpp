// SPDX-License-Identifier: Apache-2.0

#include "vblast/duality.hpp"

#include "vblast/alloc_apa.hpp"
#include "vblast/alloc_ara.hpp"
#include "vblast/outage.hpp"

#include <cmath>
#include <stdexcept>

namespace vblast {

DualConstraint::DualConstraint(double epsilon) : epsilon_(epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("dual: epsilon must lie in (0, 1)");
}

namespace {

Allocation power_shape(const SystemConfig& cfg, double rate, double budget) {
    const int m = cfg.streams();
    Allocation a = apa_exact(cfg.with_snr_scaled(budget / m), rate).allocation;
    for (double& p : a.powers) p *= budget / m;
    return a;
}

// Bisection on a monotone scalar g(t) for g = target, with g increasing.
template <class G>
double bisect(G&& g, double target, double lo, double hi, double tolerance, int& iterations) {
    for (iterations = 0; iterations < 400; ++iterations) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi || hi - lo <= tolerance * std::max(1.0, std::abs(mid))) break;
        (g(mid) < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

PowerDualResult min_total_power(const SystemConfig& cfg, double rate, const DualConstraint& constraint,
                                double tolerance) {
    const double eps = constraint.epsilon();
    const double m = cfg.streams();
    // -P_out rises with ln P.
    auto g = [&](double log_p) { return -system_outage_exact(cfg, power_shape(cfg, rate, std::exp(log_p))); };

    double lo = std::log(m), hi = std::log(m);
    while (g(lo) >= -eps) {
        lo -= 2.0;
        if (lo < std::log(m) - 700.0) break;
    }
    while (g(hi) < -eps) {
        hi += 2.0;
        if (hi > std::log(m) + std::log(1e12))
            throw SolverFailure("min_total_power: epsilon below the outage reachable with 1e12 m total power");
    }
    PowerDualResult out;
    const double log_p = bisect(g, -eps, lo, hi, tolerance, out.iterations);
    out.total_power = std::exp(log_p);
    out.allocation = power_shape(cfg, rate, out.total_power);
    out.residual = std::abs(system_outage_exact(cfg, out.allocation) - eps) / eps;
    out.degenerate = out.total_power < 1e-2 * m;
    return out;
}

RateDualResult max_total_rate(const SystemConfig& cfg, const DualConstraint& constraint, double tolerance) {
    const double eps = constraint.epsilon();
    auto g = [&](double total) {
        return system_outage_exact(cfg, ara_solve(cfg, total, Objective::exact).allocation);
    };
    const double start = cfg.streams() * std::log1p(cfg.snr());
    double lo = 0.0, hi = start;
    while (g(hi) < eps) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e6) throw SolverFailure("max_total_rate: cannot bracket the target outage");
    }
    RateDualResult out;
    const double total = bisect(g, eps, lo, hi, tolerance, out.iterations);
    out.total_rate = total;
    out.allocation = ara_solve(cfg, total, Objective::exact).allocation;
    out.residual = std::abs(system_outage_exact(cfg, out.allocation) - eps) / eps;
    return out;
}

}  // namespace vblast
