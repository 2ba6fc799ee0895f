// SPDX-License-Identifier: Apache-2.0

#include "vblast/robustness.hpp"

#include "vblast/alloc_apa.hpp"
#include "vblast/alloc_apra.hpp"
#include "vblast/alloc_ara.hpp"

#include <cmath>
#include <stdexcept>

namespace vblast {
namespace {

double outage_of(const SystemConfig& cfg, const Allocation& a, const SensitivityOptions& options) {
    if (options.outage_stream < 0) return system_outage(cfg, a, options.objective);
    const auto s = static_cast<std::size_t>(options.outage_stream);
    return options.objective == Objective::exact
               ? stream_outage_exact(cfg, options.outage_stream, a.powers[s], a.rates[s])
               : stream_outage_approx(cfg, options.outage_stream, a.powers[s], a.rates[s]);
}

// (n-1)! / (b (n - m_A + m - 1)!)
double rate_prefactor(int n, int m, const AraCoefficients& co) {
    return std::exp(std::lgamma(static_cast<double>(n)) - std::lgamma(static_cast<double>(n - co.active_count + m)))
           / co.b;
}

void add_rate_reports(std::vector<SensitivityReport>& out, const Allocation& a, double prefactor) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!(a.rates[i] > 0.0)) continue;
        SensitivityReport r;
        r.parameter = SensitivityParameter::rate;
        r.stream = static_cast<int>(i);
        r.delta = prefactor * a.rates[i];
        out.push_back(r);
    }
}

}  // namespace

const char* to_string(SensitivityParameter parameter) noexcept {
    return parameter == SensitivityParameter::power ? "power" : "rate";
}

const char* to_string(SensitivityMethod method) noexcept {
    switch (method) {
        case SensitivityMethod::closed_form: return "closed_form";
        case SensitivityMethod::multiplier: return "multiplier";
        case SensitivityMethod::finite_difference: return "finite_difference";
    }
    return "?";
}

std::string SensitivityReport::label() const {
    std::string s = std::string(to_string(parameter)) + "_" + std::to_string(stream + 1) + " " + to_string(method);
    if (method != SensitivityMethod::closed_form) s += std::string(" ") + to_string(objective);
    if (constraint_preserving) s += " constraint_preserving";
    if (one_sided) s += " one_sided";
    return s;
}

std::vector<SensitivityReport> sensitivity_closed_form(const SystemConfig& cfg, const RateSpec& spec,
                                                       Strategy strategy) {
    const int n = cfg.rx_antennas(), m = cfg.streams();
    std::vector<SensitivityReport> out;
    switch (strategy) {
        case Strategy::uniform:
            throw std::invalid_argument("sensitivity: the uniform strategy has no optimum");
        case Strategy::apa: {
            const double rate = spec.per_stream_rate(cfg);
            const ApaCoefficients co = apa_coefficients(n, m);
            const double c = std::expm1(rate) / cfg.snr();
            for (int i = 1; i <= m; ++i) {
                SensitivityReport r;
                r.stream = i - 1;
                r.delta = i == 1 ? n - m + 1
                                 : co.b[static_cast<std::size_t>(i - 2)] * (n - m + 1) / m
                                       * std::pow(c, static_cast<double>(i - 1) / (n - m + i + 1));
                out.push_back(r);
            }
            return out;
        }
        case Strategy::ara: {
            const AraClosedForm cf = ara_closed_form(cfg, spec);
            add_rate_reports(out, cf.allocation, rate_prefactor(n, m, cf.coefficients));
            return out;
        }
        case Strategy::apra: {
            const ApraClosedForm cf = apra_closed_form(cfg, spec);
            const double pre = rate_prefactor(n, m, cf.coefficients);
            for (std::size_t i = 0; i < cf.allocation.size(); ++i) {
                if (!(cf.allocation.powers[i] > 0.0)) continue;
                SensitivityReport r;
                r.stream = static_cast<int>(i);
                r.delta = pre;
                out.push_back(r);
            }
            add_rate_reports(out, cf.allocation, pre);
            return out;
        }
    }
    return out;
}

SensitivityEstimate sensitivity_at(const SystemConfig& cfg, const SolveResult& optimum,
                                   SensitivityParameter parameter, int stream, double step,
                                   const SensitivityOptions& options) {
    if (!(step >= 1e-6 && step <= 1e-2)) throw std::invalid_argument("sensitivity: step must lie in [1e-6, 1e-2]");
    const Allocation& a = optimum.allocation;
    if (stream < 0 || static_cast<std::size_t>(stream) >= a.size())
        throw std::out_of_range("sensitivity: stream index out of range");
    if (options.outage_stream >= static_cast<int>(a.size()))
        throw std::out_of_range("sensitivity: outage stream out of range");

    const bool is_power = parameter == SensitivityParameter::power;
    const auto& values = is_power ? a.powers : a.rates;
    const auto s = static_cast<std::size_t>(stream);
    const double u = values[s];
    const double base = outage_of(cfg, a, options);

    SensitivityEstimate est;
    for (auto* r : {&est.finite_difference, &est.multiplier}) {
        r->parameter = parameter;
        r->stream = stream;
        r->objective = options.objective;
        r->constraint_preserving = options.constraint_preserving;
    }
    est.finite_difference.method = SensitivityMethod::finite_difference;
    est.multiplier.method = SensitivityMethod::multiplier;

    double others = 0.0;
    for (std::size_t j = 0; j < values.size(); ++j)
        if (j != s) others += values[j];

    auto moved = [&](double sign) {
        Allocation b = a;
        auto& v = is_power ? b.powers : b.rates;
        const double du = sign * step * u;
        v[s] += du;
        if (options.constraint_preserving && others > 0.0)
            for (std::size_t j = 0; j < v.size(); ++j)
                if (j != s) v[j] -= du * values[j] / others;
        return b;
    };

    if (u == 0.0 || !(base > 0.0)) {
        // A zero parameter has no relative perturbation; a zero outage has no
        // relative change.
        est.finite_difference.one_sided = true;
        est.finite_difference.delta = 0.0;
    } else {
        const double up = outage_of(cfg, moved(+1.0), options);
        const double down = outage_of(cfg, moved(-1.0), options);
        est.finite_difference.delta = std::abs((up - down) / (2.0 * step)) / base;
    }

    const double nu = is_power ? optimum.diagnostics.multiplier_power : optimum.diagnostics.multiplier_rate;
    est.multiplier.delta = options.outage_stream < 0 && base > 0.0 ? std::abs(nu) * u / base : std::nan("");
    return est;
}

SensitivityEstimate sensitivity_finite_difference(const SystemConfig& cfg, const RateSpec& spec,
                                                  Strategy strategy, SensitivityParameter parameter,
                                                  int stream, double step, const SensitivityOptions& options) {
    if (strategy == Strategy::uniform)
        throw std::invalid_argument("sensitivity: the uniform strategy has no optimum");
    const SolveMethod method = options.objective == Objective::exact ? SolveMethod::exact : SolveMethod::first_order;
    return sensitivity_at(cfg, solve_strategy(cfg, spec, strategy, method), parameter, stream, step, options);
}

}  // namespace vblast
