// SPDX-License-Identifier: Apache-2.0

#include "vblast/outage.hpp"

#include "vblast/channel_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace vblast {

double outage_argument(const SystemConfig& cfg, double alpha, double rate) {
    if (!(rate >= 0.0)) throw std::invalid_argument("outage: rate must be >= 0");
    if (!(alpha >= 0.0)) throw std::invalid_argument("outage: power must be >= 0");
    if (rate == 0.0) return 0.0;
    if (alpha == 0.0) return std::numeric_limits<double>::infinity();
    return std::expm1(rate) / (alpha * cfg.snr());
}

double stream_outage_exact(const SystemConfig& cfg, int stream, double alpha, double rate) {
    const int k = cfg.diversity_order(stream);
    return mrc_outage_cdf(k, outage_argument(cfg, alpha, rate));
}

double stream_outage_approx(const SystemConfig& cfg, int stream, double alpha, double rate) {
    const int k = cfg.diversity_order(stream);
    return mrc_outage_first_order(k, outage_argument(cfg, alpha, rate));
}

double stream_outage_rate_derivative(const SystemConfig& cfg, int stream, double alpha, double rate) {
    const int k = cfg.diversity_order(stream);
    if (!(rate >= 0.0)) throw std::invalid_argument("outage derivative: rate must be >= 0");
    if (rate == 0.0 && k > 1) return 0.0;
    if (!(alpha > 0.0))
        throw std::domain_error("outage derivative: undefined for zero power");
    const double log_value = rate + (k > 1 ? (k - 1) * std::log(std::expm1(rate)) : 0.0)
                             - k * std::log(alpha * cfg.snr()) - std::lgamma(static_cast<double>(k));
    return std::exp(log_value);
}

OutageReport system_outage(const SystemConfig& cfg, const Allocation& alloc) {
    check_allocation(cfg, alloc);
    OutageReport report;
    report.per_stream.resize(alloc.size());
    double log_success = 0.0;
    for (int i = 0; i < cfg.streams(); ++i) {
        const auto s = static_cast<std::size_t>(i);
        const double p = stream_outage_exact(cfg, i, alloc.powers[s], alloc.rates[s]);
        report.per_stream[s] = p;
        log_success += std::log1p(-p);
        report.system_approx += stream_outage_approx(cfg, i, alloc.powers[s], alloc.rates[s]);
    }
    report.system_exact = -std::expm1(log_success);
    report.ber = 0.5 * report.system_exact;
    return report;
}

double system_outage_exact(const SystemConfig& cfg, const Allocation& alloc) {
    return system_outage(cfg, alloc).system_exact;
}

double system_outage_approx(const SystemConfig& cfg, const Allocation& alloc) {
    return system_outage(cfg, alloc).system_approx;
}

const char* to_string(Objective objective) noexcept {
    return objective == Objective::exact ? "exact" : "approximate";
}

double system_outage(const SystemConfig& cfg, const Allocation& alloc, Objective objective) {
    const OutageReport report = system_outage(cfg, alloc);
    return objective == Objective::exact ? report.system_exact : report.system_approx;
}

DiversityReport diversity_fit(std::span<const CurvePoint> curve, double lo_db, double hi_db) {
    std::vector<double> xs, ys;
    for (const auto& pt : curve) {
        const double db = linear_to_db(pt.snr);
        if (db < lo_db - 1e-9 || db > hi_db + 1e-9) continue;
        if (!(pt.p_out > 0.0))
            throw std::domain_error("diversity_fit: outage probabilities must be positive");
        xs.push_back(std::log(pt.snr));
        ys.push_back(-std::log(pt.p_out));
    }
    if (xs.size() < 3) throw std::invalid_argument("diversity_fit: fewer than 3 points in window");

    const double n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t j = 0; j < xs.size(); ++j) { mx += xs[j]; my += ys[j]; }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t j = 0; j < xs.size(); ++j) {
        sxx += (xs[j] - mx) * (xs[j] - mx);
        sxy += (xs[j] - mx) * (ys[j] - my);
    }
    if (!(sxx > 0.0)) throw std::invalid_argument("diversity_fit: SNR points are not distinct");

    DiversityReport report;
    report.slope = sxy / sxx;
    report.window_lo_db = lo_db;
    report.window_hi_db = hi_db;
    report.points = static_cast<int>(xs.size());
    const double intercept = my - report.slope * mx;
    for (std::size_t j = 0; j < xs.size(); ++j)
        report.residual = std::max(report.residual, std::abs(intercept + report.slope * xs[j] - ys[j]));
    return report;
}

}  // namespace vblast
