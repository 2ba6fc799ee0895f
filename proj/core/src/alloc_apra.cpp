// SPDX-License-Identifier: Apache-2.0

#include "vblast/alloc_apra.hpp"

#include "stream_models.hpp"
#include "vblast/alloc_apa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace vblast {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_total(double total_rate) {
    if (!(total_rate > 0.0) || !std::isfinite(total_rate))
        throw std::invalid_argument("apra: total rate must be positive and finite");
}

std::vector<double> candidate_powers(int m, int k) {
    std::vector<double> powers(static_cast<std::size_t>(m), 0.0);
    for (int i = m - k; i < m; ++i) powers[static_cast<std::size_t>(i)] = static_cast<double>(m) / k;
    return powers;
}

// Joint first-order KKT residual in log units: equal rate slopes and equal
// slope-per-power on the active set.
double joint_residual(const SystemConfig& cfg, const Allocation& a, double log_nu_r, double log_nu_a) {
    double worst = 0.0;
    for (int i = 0; i < cfg.streams(); ++i) {
        const auto s = static_cast<std::size_t>(i);
        if (!(a.rates[s] > 0.0) || !(a.powers[s] > 0.0)) continue;
        const double ls = detail::log_rate_slope(Objective::approximate, cfg.diversity_order(i),
                                                 a.powers[s] * cfg.snr(), a.rates[s]);
        worst = std::max({worst, std::abs(ls - log_nu_r), std::abs(ls - std::log(a.powers[s]) - log_nu_a)});
    }
    return worst;
}

struct Candidate {
    SolveResult result;
    double objective = kInf;
};

Candidate alternate_first_order(const SystemConfig& cfg, double total_rate, int k) {
    const int m = cfg.streams();
    Candidate out;
    Allocation& a = out.result.allocation;
    a.powers = candidate_powers(m, k);
    a.rates.assign(static_cast<std::size_t>(m), 0.0);
    double log_nu_r = 0.0, log_nu_a = 0.0;
    int rounds = 0;
    bool settled = false;
    for (; rounds < 100 && !settled; ++rounds) {
        const auto rates = detail::split_rates(cfg, a.powers, total_rate, Objective::approximate);
        a.rates = rates.values;
        std::vector<int> live;
        for (int i = 0; i < m; ++i)
            if (a.rates[static_cast<std::size_t>(i)] > 0.0) live.push_back(i);
        auto level = [&](int j, double log_nu) {
            const int i = live[static_cast<std::size_t>(j)];
            return detail::moderate_rate_power(cfg.diversity_order(i), cfg.snr(), a.rates[static_cast<std::size_t>(i)],
                                               log_nu);
        };
        const auto powers = split_budget(static_cast<int>(live.size()), m, LevelTrend::decreasing, level,
                                         rates.log_multiplier - std::log(static_cast<double>(m) / k));
        std::fill(a.powers.begin(), a.powers.end(), 0.0);
        for (std::size_t j = 0; j < live.size(); ++j) a.powers[static_cast<std::size_t>(live[j])] = powers.values[j];
        out.result.diagnostics.iterations += rates.iterations + powers.iterations;

        settled = rounds > 0 && std::abs(rates.log_multiplier - log_nu_r) < 1e-10
                  && std::abs(powers.log_multiplier - log_nu_a) < 1e-10;
        log_nu_r = rates.log_multiplier;
        log_nu_a = powers.log_multiplier;
    }
    // Rates matched to the final powers.
    const auto rates = detail::split_rates(cfg, a.powers, total_rate, Objective::approximate);
    a.rates = rates.values;
    log_nu_r = rates.log_multiplier;

    auto& d = out.result.diagnostics;
    d.multiplier_rate = std::exp(log_nu_r);
    d.multiplier_power = std::exp(log_nu_a);
    d.residual = joint_residual(cfg, a, log_nu_r, log_nu_a);
    d.converged = settled && d.residual < 1e-8;
    if (!d.converged) d.warnings.push_back("apra: alternating minimisation did not settle");
    for (int i = 0; i < m; ++i)
        if (a.rates[static_cast<std::size_t>(i)] > 0.0 && a.rates[static_cast<std::size_t>(i)] <= std::log(2.0)) {
            d.warnings.push_back("apra: active rate at or below ln 2, joint convexity not guaranteed");
            break;
        }
    out.objective = system_outage_approx(cfg, a);
    return out;
}

// Block-coordinate descent on the exact objective from `start`.
Candidate descend_exact(const SystemConfig& cfg, double total_rate, Allocation start) {
    const int m = cfg.streams();
    Candidate out;
    Allocation& a = out.result.allocation;
    a = std::move(start);
    double value = system_outage_exact(cfg, a);
    double log_nu_r = 0.0, log_lambda = 0.0, residual = 0.0;
    bool settled = false;
    int rounds = 0;
    for (; rounds < 5000 && !settled; ++rounds) {
        const auto rates = detail::split_rates(cfg, a.powers, total_rate, Objective::exact);
        const auto powers = detail::split_powers(cfg, rates.values, m, Objective::exact);
        Allocation next{powers.values, rates.values};
        const double next_value = system_outage_exact(cfg, next);
        out.result.diagnostics.iterations += rates.iterations + powers.iterations;
        if (next_value > value) break;
        double moved = 0.0;
        for (std::size_t s = 0; s < next.size(); ++s)
            moved = std::max({moved, std::abs(next.powers[s] - a.powers[s]) / m,
                              std::abs(next.rates[s] - a.rates[s]) / total_rate});
        settled = moved < 1e-12 || (value - next_value) <= 1e-15 * value;
        a = std::move(next);
        value = next_value;
        log_nu_r = rates.log_multiplier;
        log_lambda = powers.log_multiplier;
        residual = std::max({moved, rates.residual, powers.residual});
    }
    // Rates matched to the final powers.
    const auto rates = detail::split_rates(cfg, a.powers, total_rate, Objective::exact);
    a.rates = rates.values;
    log_nu_r = rates.log_multiplier;
    value = system_outage_exact(cfg, a);

    auto& d = out.result.diagnostics;
    d.multiplier_rate = std::exp(log_nu_r) * (1.0 - value);
    d.multiplier_power = std::exp(log_lambda) * (1.0 - value);
    d.residual = residual;
    d.converged = settled;
    if (!settled) d.warnings.push_back("apra exact: block-coordinate descent hit the round limit");
    out.objective = value;
    return out;
}

ThresholdReport thresholds(const SystemConfig& cfg, const RateSpec& spec, bool boosted) {
    const int n = cfg.rx_antennas(), m = cfg.streams();
    ThresholdReport out;
    if (m == 1) {
        out.snr_threshold_db = -kInf;
        return out;
    }
    struct Line {
        double base;   // ln P_k at L = 0 and zero rate
        double slope;  // d ln P_k / dL at zero rate
        double per_rate;  // d ln P_k / d(total rate)
    };
    auto line = [&](int k) {
        const AraCoefficients co = ara_coefficients(n, m, k);
        const double boost = boosted ? std::log(static_cast<double>(m) / k) : 0.0;
        return Line{std::log(co.b) - (k / co.b) * boost - co.a / co.b, -k / co.b, 1.0 / co.b};
    };
    const Line full = line(m);
    const double L = std::log(cfg.snr());
    const bool mux = spec.mode() == RateSpec::Mode::multiplexing_gain;

    out.r_threshold = 0.0;
    double worst_l = -kInf;
    for (int k = 1; k < m; ++k) {
        const Line part = line(k);
        // D(r, L) = ln P_m - ln P_k = d0 + dL L + dT T, T = total rate.
        const double d0 = full.base - part.base;
        const double dl = full.slope - part.slope;
        const double dt = full.per_rate - part.per_rate;  // < 0
        out.r_threshold = std::max(out.r_threshold, -(d0 + dl * L) / (dt * L));
        const double beta = mux ? dl + dt * spec.value() : dl;
        const double alpha = mux ? d0 : d0 + dt * m * spec.value();
        if (beta >= 0.0) {
            worst_l = kInf;
            continue;
        }
        worst_l = std::max(worst_l, -alpha / beta);
    }
    out.snr_threshold_db = std::isfinite(worst_l) ? 10.0 * worst_l / std::log(10.0) : worst_l;
    return out;
}

}  // namespace

ApraClosedForm apra_closed_form(const SystemConfig& cfg, const RateSpec& spec) {
    const int n = cfg.rx_antennas(), m = cfg.streams();
    const double total = spec.total_rate(cfg);
    check_total(total);
    ApraClosedForm out;
    int best = -1;
    for (int k = 1; k <= m; ++k) {
        AraCandidate cand;
        cand.active_count = k;
        cand.allocation.powers = candidate_powers(m, k);
        cand.allocation.rates = ara_candidate_rates(n, m, cfg.snr() * m / k, total, k);
        cand.feasible = std::all_of(cand.allocation.rates.end() - k, cand.allocation.rates.end(),
                                    [](double r) { return r > 0.0; });
        if (cand.feasible) {
            cand.p_out_exact = system_outage_exact(cfg, cand.allocation);
            if (best < 0 || cand.p_out_exact < out.candidates[static_cast<std::size_t>(best)].p_out_exact)
                best = k - 1;
        }
        out.candidates.push_back(std::move(cand));
    }
    if (best < 0) throw SolverFailure("apra closed form: no feasible active set");
    out.allocation = out.candidates[static_cast<std::size_t>(best)].allocation;
    out.coefficients = ara_coefficients(n, m, best + 1);
    for (int i = m - best - 1; i < m; ++i) {
        const double r = out.allocation.rates[static_cast<std::size_t>(i)];
        if (r <= 1.0 || r >= std::log1p(cfg.snr())) {
            out.warnings.push_back("apra closed form: active rate outside 1 < R_i < ln(1 + snr)");
            break;
        }
    }
    return out;
}

SolveResult apra_exact(const SystemConfig& cfg, const RateSpec& spec) {
    const double total = spec.total_rate(cfg);
    check_total(total);
    Candidate best;
    for (int k = 1; k <= cfg.streams(); ++k) {
        Candidate c = alternate_first_order(cfg, total, k);
        if (c.objective < best.objective) best = std::move(c);
    }
    return best.result;
}

SolveResult apra_solve_exact(const SystemConfig& cfg, double total_rate) {
    check_total(total_rate);
    const int m = cfg.streams();
    std::vector<Allocation> starts;
    for (int k = 1; k <= m; ++k) {
        Allocation a;
        a.powers = candidate_powers(m, k);
        a.rates = detail::split_rates(cfg, a.powers, total_rate, Objective::exact).values;
        starts.push_back(std::move(a));
    }
    starts.push_back(apa_exact(cfg, total_rate / m).allocation);

    Candidate best;
    for (auto& s : starts) {
        Candidate c = descend_exact(cfg, total_rate, std::move(s));
        if (c.objective < best.objective) best = std::move(c);
    }
    return best.result;
}

SolveResult apra_exact_objective(const SystemConfig& cfg, const RateSpec& spec) {
    return apra_solve_exact(cfg, spec.total_rate(cfg));
}

ThresholdReport apra_threshold(const SystemConfig& cfg, const RateSpec& spec) {
    return thresholds(cfg, spec, true);
}

ThresholdReport ara_threshold(const SystemConfig& cfg, const RateSpec& spec) {
    return thresholds(cfg, spec, false);
}

}  // namespace vblast
