// SPDX-License-Identifier: Apache-2.0

#include "vblast/alloc_apa.hpp"

#include "stream_models.hpp"
#include "vblast/channel_model.hpp"
#include "vblast/projected_gradient.hpp"
#include "vblast/water_filling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vblast {
namespace {

void check_rate(double rate) {
    if (!(rate > 0.0) || !std::isfinite(rate))
        throw std::invalid_argument("apa: rate must be positive and finite");
}

double rate_argument(const SystemConfig& cfg, double rate) { return std::expm1(rate) / cfg.snr(); }

SolveResult apa_water_fill(const SystemConfig& cfg, double rate, Objective objective) {
    check_rate(rate);
    const int m = cfg.streams();
    SolveResult out;
    out.allocation = Allocation::uniform(cfg, rate);
    if (m == 1) return out;

    const std::vector<double> rates(static_cast<std::size_t>(m), rate);
    const BudgetSplit split = detail::split_powers(cfg, rates, m, objective);
    out.allocation.powers = split.values;
    out.diagnostics.iterations = split.iterations;

    const double c = rate_argument(cfg, rate);
    double kkt = 0.0;
    for (int i = 0; i < m; ++i) {
        const double a = out.allocation.powers[static_cast<std::size_t>(i)];
        kkt = std::max(kkt, std::abs(detail::log_power_price(objective, cfg.diversity_order(i), c, a)
                                     - split.log_multiplier));
    }
    out.diagnostics.residual = std::max(kkt, split.residual);
    const double price = std::exp(split.log_multiplier);
    out.diagnostics.multiplier_power =
        objective == Objective::exact ? price * (1.0 - system_outage_exact(cfg, out.allocation)) : price;
    out.diagnostics.multiplier_rate = std::nan("");
    if (out.diagnostics.residual > 1e-8) {
        out.diagnostics.converged = false;
        out.diagnostics.warnings.push_back("apa: KKT residual above 1e-8");
    }
    return out;
}

}  // namespace

ApaCoefficients apa_coefficients(int rx_antennas, int tx_antennas) {
    const SystemConfig probe(rx_antennas, tx_antennas, 1.0);
    const int n = rx_antennas, m = tx_antennas;
    ApaCoefficients co;
    for (int i = 2; i <= m; ++i) {
        const double log_b = (n - m + 2) * std::log(static_cast<double>(m)) + std::lgamma(n - m + 1.0)
                             - std::lgamma(static_cast<double>(n - m + i));
        co.b.push_back(std::exp(log_b / (n - m + i + 1)));
    }
    return co;
}

ApaClosedForm apa_closed_form(const SystemConfig& cfg, double rate) {
    check_rate(rate);
    const int n = cfg.rx_antennas(), m = cfg.streams();
    ApaClosedForm out;
    out.coefficients = apa_coefficients(n, m);
    out.allocation = Allocation::uniform(cfg, rate);
    if (rate >= std::log1p(cfg.snr()))
        out.warnings.push_back("apa closed form: rate outside the low-outage region R < ln(1 + snr)");

    const double c = rate_argument(cfg, rate);
    double rest = 0.0;
    for (int i = 2; i <= m; ++i) {
        const double a = out.coefficients.b[static_cast<std::size_t>(i - 2)]
                         * std::pow(c, static_cast<double>(i - 1) / (n - m + i + 1));
        out.allocation.powers[static_cast<std::size_t>(i - 1)] = a;
        rest += a;
    }
    out.allocation.powers[0] = m - rest;
    if (!(out.allocation.powers[0] > 0.0))
        throw SolverFailure("apa closed form: first-stream power is not positive; approximation broke down");
    return out;
}

SolveResult apa_kkt_approximate(const SystemConfig& cfg, double rate) {
    return apa_water_fill(cfg, rate, Objective::approximate);
}

SolveResult apa_exact(const SystemConfig& cfg, double rate) {
    return apa_water_fill(cfg, rate, Objective::exact);
}

SolveResult apa_exact_projected_gradient(const SystemConfig& cfg, double rate, double tolerance,
                                         int max_iterations) {
    check_rate(rate);
    const int m = cfg.streams();
    SolveResult out;
    out.allocation = Allocation::uniform(cfg, rate);
    if (m == 1) return out;

    const double c = rate_argument(cfg, rate);
    auto objective = [&](std::span<const double> a) {
        double log_success = 0.0;
        for (int i = 0; i < m; ++i)
            log_success += mrc_log_survival(cfg.diversity_order(i), c / a[static_cast<std::size_t>(i)]);
        return -std::expm1(log_success);
    };
    auto gradient = [&](std::span<const double> a, std::span<double> g) {
        double log_success = 0.0;
        for (int i = 0; i < m; ++i)
            log_success += mrc_log_survival(cfg.diversity_order(i), c / a[static_cast<std::size_t>(i)]);
        const double success = std::exp(log_success);
        for (int i = 0; i < m; ++i) {
            const auto s = static_cast<std::size_t>(i);
            // dP/dalpha = -(1 - P) hazard(x) x / alpha
            const double x = c / a[s];
            g[s] = -success * mrc_hazard(cfg.diversity_order(i), x) * x / a[s];
        }
    };
    const SimplexBlock block{0, static_cast<std::size_t>(m), static_cast<double>(m)};
    PgdOptions options;
    options.tolerance = tolerance;
    options.max_iterations = max_iterations;
    const PgdResult r = projected_gradient_descent(objective, gradient, out.allocation.powers, {&block, 1}, options);
    out.allocation.powers = r.x;
    out.diagnostics.iterations = r.iterations;
    out.diagnostics.residual = r.residual;
    out.diagnostics.converged = r.converged;
    std::vector<double> g(static_cast<std::size_t>(m));
    gradient(r.x, g);
    out.diagnostics.multiplier_power = -g[0];
    out.diagnostics.multiplier_rate = std::nan("");
    if (!r.converged) out.diagnostics.warnings.push_back("apa projected gradient: tolerance not reached");
    return out;
}

ApaPrediction apa_predicted_outage(const SystemConfig& cfg, double rate) {
    check_rate(rate);
    const int n = cfg.rx_antennas(), m = cfg.streams();
    const ApaCoefficients co = apa_coefficients(n, m);
    const double c = rate_argument(cfg, rate);
    ApaPrediction out;
    out.outage.per_stream.resize(static_cast<std::size_t>(m));
    out.diversity.resize(static_cast<std::size_t>(m));
    double log_success = 0.0;
    for (int i = 1; i <= m; ++i) {
        const int k = n - m + i;
        const double d = static_cast<double>(k) * (n - m + 2) / (k + 1);
        const double log_p = i == 1 ? k * std::log(c / m) - std::lgamma(k + 1.0)
                                    : -k * std::log(co.b[static_cast<std::size_t>(i - 2)]) + d * std::log(c)
                                          - std::lgamma(k + 1.0);
        const double p = std::min(1.0, std::exp(log_p));
        out.outage.per_stream[static_cast<std::size_t>(i - 1)] = p;
        out.diversity[static_cast<std::size_t>(i - 1)] = d;
        out.outage.system_approx += std::exp(log_p);
        log_success += std::log1p(-p);
    }
    out.outage.system_exact = -std::expm1(log_success);
    out.outage.ber = 0.5 * out.outage.system_exact;
    return out;
}

GainReport snr_gain(const SystemConfig& cfg, double rate, const Allocation& alloc) {
    check_rate(rate);
    const double target = system_outage_exact(cfg, alloc);
    if (!(target > 0.0 && target < 1.0))
        throw std::domain_error("snr_gain: outage of the allocation must lie in (0, 1)");
    // Outage of the scaled uniform allocation falls with ln G; search on its negative.
    auto neg_outage = [&](double log_g) {
        Allocation u = Allocation::uniform(cfg, rate);
        for (double& a : u.powers) a = std::exp(log_g);
        return -system_outage_exact(cfg, u);
    };
    if (neg_outage(-60.0) >= -target || neg_outage(60.0) < -target)
        throw SolverFailure("snr_gain: cannot bracket the equivalent uniform power");
    const double log_g = solve_nondecreasing(neg_outage, -target, -60.0, 60.0, 1e-15);
    GainReport g;
    g.gain_linear = std::exp(log_g);
    g.gain_db = linear_to_db(g.gain_linear);
    return g;
}

}  // namespace vblast
