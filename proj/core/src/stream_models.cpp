// SPDX-License-Identifier: Apache-2.0

#include "stream_models.hpp"

#include "vblast/channel_model.hpp"
#include "vblast/water_filling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace vblast::detail {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_factorial(int k) { return std::lgamma(k + 1.0); }

}  // namespace

double log_rate_slope(Objective objective, int k, double gain, double rate) {
    const double log_gain = std::log(gain);
    if (objective == Objective::exact)
        return mrc_log_hazard(k, std::expm1(rate) / gain) + rate - log_gain;
    if (k == 1) return rate - log_gain;
    if (rate == 0.0) return kNegInf;
    return rate + (k - 1) * std::log(std::expm1(rate)) - k * log_gain - log_factorial(k - 1);
}

double rate_for_slope(Objective objective, int k, double gain, double log_slope) {
    const double log_gain = std::log(gain);
    if (k == 1 && objective == Objective::approximate) return std::max(0.0, log_slope + log_gain);
    auto f = [&](double r) { return log_rate_slope(objective, k, gain, r); };
    const double guess = objective == Objective::exact
                             ? log_slope + log_gain
                             : (log_slope + k * log_gain + log_factorial(k - 1)) / k;
    return solve_nondecreasing(f, log_slope, 0.0, std::max(1.0, guess + 1.0), 1e-15);
}

double log_power_price(Objective objective, int k, double c, double alpha) {
    if (objective == Objective::exact)
        return mrc_log_hazard(k, c / alpha) + std::log(c) - 2.0 * std::log(alpha);
    return k * std::log(c) - log_factorial(k - 1) - (k + 1) * std::log(alpha);
}

double power_for_price(Objective objective, int k, double c, double log_price) {
    const double log_c = std::log(c);
    const double first_order = (k * log_c - log_factorial(k - 1) - log_price) / (k + 1);
    if (objective == Objective::approximate) return std::exp(first_order);
    // The price falls with alpha, so search in u = ln alpha on its negative.
    auto f = [&](double u) { return -log_power_price(objective, k, c, std::exp(u)); };
    const double lo = std::min(first_order, 0.5 * (log_c - log_price)) - 40.0;
    return std::exp(solve_nondecreasing(f, -log_price, lo, first_order + 1.0, 1e-15));
}

double moderate_rate_power(int k, double snr, double rate, double log_nu) {
    const double log_tail = k == 1 ? 0.0 : (k - 1) * std::log(std::expm1(rate));
    return std::exp((rate + log_tail - k * std::log(snr) - log_factorial(k - 1) - log_nu) / (k + 1));
}

double stream_term(Objective objective, int k, double x) {
    if (objective == Objective::exact) return -mrc_log_survival(k, x);
    return mrc_outage_first_order(k, x);
}

}  // namespace vblast::detail

namespace vblast::detail {
namespace {

std::vector<int> positive_entries(std::span<const double> v) {
    std::vector<int> idx;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i] > 0.0) idx.push_back(static_cast<int>(i));
    return idx;
}

BudgetSplit scatter(BudgetSplit split, const std::vector<int>& idx, std::size_t m) {
    std::vector<double> full(m, 0.0);
    for (std::size_t j = 0; j < idx.size(); ++j) full[static_cast<std::size_t>(idx[j])] = split.values[j];
    split.values = std::move(full);
    return split;
}

}  // namespace

BudgetSplit split_rates(const SystemConfig& cfg, std::span<const double> powers, double total_rate,
                        Objective objective) {
    const auto idx = positive_entries(powers);
    if (idx.empty()) throw std::invalid_argument("split_rates: no powered stream");
    const double snr = cfg.snr();
    auto level = [&](int j, double log_nu) {
        const int i = idx[static_cast<std::size_t>(j)];
        return rate_for_slope(objective, cfg.diversity_order(i), powers[static_cast<std::size_t>(i)] * snr,
                              log_nu);
    };
    const int last = idx.back();
    const double guess = log_rate_slope(objective, cfg.diversity_order(last),
                                        powers[static_cast<std::size_t>(last)] * snr,
                                        total_rate / static_cast<double>(idx.size()));
    return scatter(split_budget(static_cast<int>(idx.size()), total_rate, LevelTrend::increasing, level, guess),
                   idx, powers.size());
}

BudgetSplit split_powers(const SystemConfig& cfg, std::span<const double> rates, double budget,
                         Objective objective) {
    const auto idx = positive_entries(rates);
    if (idx.empty()) throw std::invalid_argument("split_powers: no stream carries rate");
    const double snr = cfg.snr();
    auto c_of = [&](int i) { return std::expm1(rates[static_cast<std::size_t>(i)]) / snr; };
    auto level = [&](int j, double log_price) {
        const int i = idx[static_cast<std::size_t>(j)];
        return power_for_price(objective, cfg.diversity_order(i), c_of(i), log_price);
    };
    const int first = idx.front();
    const double share = budget / static_cast<double>(idx.size());
    const double guess = log_power_price(objective, cfg.diversity_order(first), c_of(first), share);
    return scatter(split_budget(static_cast<int>(idx.size()), budget, LevelTrend::decreasing, level, guess),
                   idx, rates.size());
}

}  // namespace vblast::detail
