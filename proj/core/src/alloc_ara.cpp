// SPDX-License-Identifier: Apache-2.0

#include "vblast/alloc_ara.hpp"

#include "stream_models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace vblast {
namespace {

double log_factorial(int k) { return std::lgamma(k + 1.0); }

void check_active(int m, int active_count) {
    if (active_count < 1 || active_count > m)
        throw std::invalid_argument("ara: active count must lie in [1, m]");
}

double multiplexing_gain(const RateSpec& spec) {
    return spec.mode() == RateSpec::Mode::multiplexing_gain ? spec.value() : 0.0;
}

}  // namespace

AraCoefficients ara_coefficients(int rx_antennas, int tx_antennas, int active_count) {
    const int n = rx_antennas, m = tx_antennas;
    const SystemConfig probe(n, m, 1.0);
    check_active(m, active_count);
    AraCoefficients co;
    co.active_count = active_count;
    for (int j = 1; j <= active_count; ++j) {
        const int k = n - active_count + j;
        co.a += log_factorial(k - 1) / k;
        co.b += 1.0 / k;
    }
    for (int i = 1; i <= m; ++i) {
        const int k = n - m + i;
        co.c.push_back((log_factorial(k - 1) - co.a / co.b) / k);
    }
    return co;
}

std::vector<double> ara_candidate_rates(int rx_antennas, int tx_antennas, double snr, double total_rate,
                                        int active_count) {
    const AraCoefficients co = ara_coefficients(rx_antennas, tx_antennas, active_count);
    const int n = rx_antennas, m = tx_antennas;
    const double log_snr = std::log(snr);
    std::vector<double> rates(static_cast<std::size_t>(m), 0.0);
    for (int i = m - active_count + 1; i <= m; ++i) {
        const int k = n - m + i;
        rates[static_cast<std::size_t>(i - 1)] =
            log_snr + (total_rate - active_count * log_snr) / (co.b * k) + co.c[static_cast<std::size_t>(i - 1)];
    }
    return rates;
}

AraClosedForm ara_closed_form(const SystemConfig& cfg, const RateSpec& spec) {
    const int n = cfg.rx_antennas(), m = cfg.streams();
    const double rate = spec.per_stream_rate(cfg);
    const double total = spec.total_rate(cfg);
    if (!(total > 0.0)) throw std::invalid_argument("ara: total rate must be positive");
    AraClosedForm out;
    if (rate <= 1.0 || rate >= std::log1p(cfg.snr()))
        out.warnings.push_back("ara closed form: per-stream rate outside 1 < R < ln(1 + snr)");

    int best = -1;
    for (int k = 1; k <= m; ++k) {
        AraCandidate cand;
        cand.active_count = k;
        cand.allocation.powers.assign(static_cast<std::size_t>(m), 1.0);
        cand.allocation.rates = ara_candidate_rates(n, m, cfg.snr(), total, k);
        cand.feasible = std::all_of(cand.allocation.rates.end() - k, cand.allocation.rates.end(),
                                    [](double r) { return r > 0.0; });
        if (cand.feasible) {
            cand.p_out_exact = system_outage_exact(cfg, cand.allocation);
            if (best < 0 || cand.p_out_exact < out.candidates[static_cast<std::size_t>(best)].p_out_exact)
                best = k - 1;
        }
        out.candidates.push_back(std::move(cand));
    }
    if (best < 0) throw SolverFailure("ara closed form: no feasible active set");
    out.allocation = out.candidates[static_cast<std::size_t>(best)].allocation;
    out.coefficients = ara_coefficients(n, m, best + 1);
    return out;
}

int ara_active_set_by_positivity(const SystemConfig& cfg, const RateSpec& spec) {
    const int n = cfg.rx_antennas(), m = cfg.streams();
    const double total = spec.total_rate(cfg);
    for (int k = m; k > 1; --k) {
        const auto rates = ara_candidate_rates(n, m, cfg.snr(), total, k);
        if (rates[static_cast<std::size_t>(m - k)] > 0.0) return k;
    }
    return 1;
}

SolveResult ara_solve(const SystemConfig& cfg, double total_rate, Objective objective) {
    if (!(total_rate > 0.0) || !std::isfinite(total_rate))
        throw std::invalid_argument("ara: total rate must be positive and finite");
    const int m = cfg.streams();
    SolveResult out;
    out.allocation.powers.assign(static_cast<std::size_t>(m), 1.0);
    const BudgetSplit split = detail::split_rates(cfg, out.allocation.powers, total_rate, objective);
    out.allocation.rates = split.values;
    out.diagnostics.iterations = split.iterations;

    double kkt = 0.0;
    for (int i = 0; i < m; ++i) {
        const double r = out.allocation.rates[static_cast<std::size_t>(i)];
        const double slope = detail::log_rate_slope(objective, cfg.diversity_order(i), cfg.snr(), r);
        if (r > 0.0)
            kkt = std::max(kkt, std::abs(slope - split.log_multiplier));
        else
            kkt = std::max(kkt, split.log_multiplier - slope);  // inactive: slope(0) >= nu
    }
    out.diagnostics.residual = std::max(kkt, split.residual);
    const double nu = std::exp(split.log_multiplier);
    out.diagnostics.multiplier_rate =
        objective == Objective::exact ? nu * (1.0 - system_outage_exact(cfg, out.allocation)) : nu;
    out.diagnostics.multiplier_power = std::nan("");
    if (out.diagnostics.residual > 1e-8) {
        out.diagnostics.converged = false;
        out.diagnostics.warnings.push_back("ara: KKT residual above 1e-8");
    }
    if (total_rate < 1.0) out.diagnostics.warnings.push_back("ara: total rate below 1 nat, first-order model loose");
    return out;
}

std::vector<double> rates_for_powers(const SystemConfig& cfg, const std::vector<double>& powers, double total_rate,
                                     Objective objective) {
    if (!(total_rate > 0.0) || !std::isfinite(total_rate))
        throw std::invalid_argument("ara: total rate must be positive and finite");
    check_allocation(cfg, Allocation{powers, std::vector<double>(powers.size(), 0.0)});
    return detail::split_rates(cfg, powers, total_rate, objective).values;
}

SolveResult ara_exact(const SystemConfig& cfg, const RateSpec& spec) {
    return ara_solve(cfg, spec.total_rate(cfg), Objective::approximate);
}

SolveResult ara_exact_objective(const SystemConfig& cfg, const RateSpec& spec) {
    return ara_solve(cfg, spec.total_rate(cfg), Objective::exact);
}

AraPrediction ara_predicted_outage(const SystemConfig& cfg, const RateSpec& spec) {
    return ara_predicted_outage(cfg, spec, ara_closed_form(cfg, spec).coefficients.active_count);
}

AraPrediction ara_predicted_outage(const SystemConfig& cfg, const RateSpec& spec, int active_count) {
    const int n = cfg.rx_antennas(), m = cfg.streams();
    const AraCoefficients co = ara_coefficients(n, m, active_count);
    const double total = spec.total_rate(cfg);
    AraPrediction out;
    out.active_count = active_count;
    out.multiplier = std::exp((-active_count * std::log(cfg.snr()) + total - co.a) / co.b);
    out.outage.per_stream.assign(static_cast<std::size_t>(m), 0.0);
    double log_success = 0.0;
    for (int i = m - active_count + 1; i <= m; ++i) {
        const double p = out.multiplier / (n - m + i);
        out.outage.per_stream[static_cast<std::size_t>(i - 1)] = std::min(1.0, p);
        out.outage.system_approx += p;
        log_success += std::log1p(-std::min(1.0, p));
    }
    out.outage.system_exact = -std::expm1(log_success);
    out.outage.ber = 0.5 * out.outage.system_exact;
    out.p_out_direct = out.multiplier * co.b;
    out.p_out_printed = co.b * std::exp(log_factorial(n - active_count + m - 1) - log_factorial(n - 1)) * out.multiplier;
    out.diversity = (active_count - multiplexing_gain(spec)) / co.b;
    return out;
}

}  // namespace vblast
