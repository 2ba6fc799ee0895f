// SPDX-License-Identifier: Apache-2.0

#include "vblast/strategy.hpp"

#include "vblast/alloc_apa.hpp"
#include "vblast/alloc_apra.hpp"
#include "vblast/alloc_ara.hpp"

#include <cmath>

namespace vblast {
namespace {

SolveResult closed(Allocation alloc, std::vector<std::string> warnings) {
    SolveResult r;
    r.allocation = std::move(alloc);
    r.diagnostics.multiplier_power = std::nan("");
    r.diagnostics.multiplier_rate = std::nan("");
    r.diagnostics.warnings = std::move(warnings);
    return r;
}

}  // namespace

const char* to_string(Strategy strategy) noexcept {
    switch (strategy) {
        case Strategy::uniform: return "uniform";
        case Strategy::apa: return "apa";
        case Strategy::ara: return "ara";
        case Strategy::apra: return "apra";
    }
    return "?";
}

const char* to_string(SolveMethod method) noexcept {
    switch (method) {
        case SolveMethod::closed_form: return "closed_form";
        case SolveMethod::first_order: return "first_order";
        case SolveMethod::exact: return "exact";
    }
    return "?";
}

std::optional<Strategy> parse_strategy(std::string_view name) {
    for (auto s : {Strategy::uniform, Strategy::apa, Strategy::ara, Strategy::apra})
        if (name == to_string(s)) return s;
    return std::nullopt;
}

std::optional<SolveMethod> parse_method(std::string_view name) {
    for (auto m : {SolveMethod::closed_form, SolveMethod::first_order, SolveMethod::exact})
        if (name == to_string(m)) return m;
    return std::nullopt;
}

SolveResult solve_strategy(const SystemConfig& cfg, const RateSpec& spec, Strategy strategy,
                           SolveMethod method) {
    const double rate = spec.per_stream_rate(cfg);
    switch (strategy) {
        case Strategy::uniform: return closed(Allocation::uniform(cfg, rate), {});
        case Strategy::apa:
            if (method == SolveMethod::closed_form) {
                auto cf = apa_closed_form(cfg, rate);
                return closed(std::move(cf.allocation), std::move(cf.warnings));
            }
            return method == SolveMethod::exact ? apa_exact(cfg, rate) : apa_kkt_approximate(cfg, rate);
        case Strategy::ara:
            if (method == SolveMethod::closed_form) {
                auto cf = ara_closed_form(cfg, spec);
                return closed(std::move(cf.allocation), std::move(cf.warnings));
            }
            return method == SolveMethod::exact ? ara_exact_objective(cfg, spec) : ara_exact(cfg, spec);
        case Strategy::apra:
            if (method == SolveMethod::closed_form) {
                auto cf = apra_closed_form(cfg, spec);
                return closed(std::move(cf.allocation), std::move(cf.warnings));
            }
            return method == SolveMethod::exact ? apra_exact_objective(cfg, spec) : apra_exact(cfg, spec);
    }
    throw std::invalid_argument("solve_strategy: unknown strategy");
}

}  // namespace vblast
