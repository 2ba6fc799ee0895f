// SPDX-License-Identifier: Apache-2.0

#include "vblast/channel_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace vblast {
namespace {

void check_args(int k, double x) {
    if (k < 1) throw std::domain_error("mrc: order k must be >= 1");
    if (!(x >= 0.0)) throw std::domain_error("mrc: argument x must be >= 0");
}

// ln(x^l / l!)
double log_term(int l, double x) { return l * std::log(x) - std::lgamma(l + 1.0); }

// ln sum_{l<k} x^l / l!, by log-sum-exp around the largest term.
double log_partial_exp(int k, double x) {
    if (x == 0.0) return 0.0;
    double peak = -std::numeric_limits<double>::infinity();
    for (int l = 0; l < k; ++l) peak = std::max(peak, log_term(l, x));
    double sum = 0.0;
    for (int l = 0; l < k; ++l) sum += std::exp(log_term(l, x) - peak);
    return peak + std::log(sum);
}

// Lower series of the regularised incomplete gamma function:
// F_k(x) = e^-x x^k / k! * sum_j x^j / ((k+1)...(k+j)).
double lower_series(int k, double x) {
    double term = 1.0;
    double sum = 1.0;
    for (int j = 1; j < 10000; ++j) {
        term *= x / (k + j);
        sum += term;
        if (term < sum * 1e-17) break;
    }
    return std::exp(-x + log_term(k, x)) * sum;
}

}  // namespace

double mrc_outage_cdf(int k, double x) {
    check_args(k, x);
    if (x == 0.0) return 0.0;
    if (std::isinf(x)) return 1.0;
    if (x < k) return std::min(1.0, lower_series(k, x));
    const double survival = std::exp(-x + log_partial_exp(k, x));
    return std::clamp(1.0 - survival, 0.0, 1.0);
}

double mrc_log_survival(int k, double x) {
    check_args(k, x);
    if (std::isinf(x)) return -std::numeric_limits<double>::infinity();
    const double cdf = (x < k) ? lower_series(k, x) : 1.0;
    if (cdf < 0.5) return std::log1p(-cdf);
    return -x + log_partial_exp(k, x);
}

double mrc_density(int k, double x) {
    check_args(k, x);
    if (x == 0.0) return k == 1 ? 1.0 : 0.0;
    return std::exp(-x + log_term(k - 1, x));
}

double mrc_hazard(int k, double x) {
    return std::exp(mrc_log_hazard(k, x));
}

double mrc_log_hazard(int k, double x) {
    check_args(k, x);
    if (k == 1 || std::isinf(x)) return 0.0;
    if (x == 0.0) return -std::numeric_limits<double>::infinity();
    return log_term(k - 1, x) - log_partial_exp(k, x);
}

double mrc_outage_first_order(int k, double x) {
    check_args(k, x);
    if (x == 0.0) return 0.0;
    return std::exp(log_term(k, x));
}

ChannelSample effective_gains(const Eigen::MatrixXcd& channel) {
    const auto m = channel.cols();
    if (m < 1 || channel.rows() < m)
        throw std::invalid_argument("effective_gains: need an n x m matrix with n >= m >= 1");
    const Eigen::MatrixXcd reversed = channel.rowwise().reverse();
    const Eigen::HouseholderQR<Eigen::MatrixXcd> qr(reversed);
    ChannelSample out;
    out.gains.resize(static_cast<std::size_t>(m));
    for (Eigen::Index j = 0; j < m; ++j)
        out.gains[static_cast<std::size_t>(m - 1 - j)] = std::norm(qr.matrixQR()(j, j));
    return out;
}

GainSampler::GainSampler(const SystemConfig& cfg)
    : n_(cfg.rx_antennas()),
      m_(cfg.tx_antennas()),
      reversed_(cfg.rx_antennas(), cfg.tx_antennas()),
      qr_(cfg.rx_antennas(), cfg.tx_antennas()),
      normal_(0.0, std::sqrt(0.5)) {}

bool GainSampler::fill(std::mt19937_64& rng, std::span<double> gains) {
    // Column j of reversed_ is channel column m-1-j.
    for (int j = 0; j < m_; ++j)
        for (int r = 0; r < n_; ++r) {
            const double re = normal_(rng);
            const double im = normal_(rng);
            reversed_(r, j) = {re, im};
        }
    qr_.compute(reversed_);
    const auto& packed = qr_.matrixQR();
    for (int j = 0; j < m_; ++j) {
        const double g = std::norm(packed(j, j));
        if (!(g > 0.0) || !std::isfinite(g)) return false;
        gains[static_cast<std::size_t>(m_ - 1 - j)] = g;
    }
    return true;
}

void GainSampler::sample(std::mt19937_64& rng, std::span<double> gains) {
    if (gains.size() != static_cast<std::size_t>(m_))
        throw std::invalid_argument("GainSampler: output span must hold m gains");
    while (!fill(rng, gains)) ++degenerate_;
}

ChannelSample sample_channel_gains(const SystemConfig& cfg, std::mt19937_64& rng) {
    GainSampler sampler(cfg);
    ChannelSample out;
    out.gains.resize(static_cast<std::size_t>(cfg.streams()));
    sampler.sample(rng, out.gains);
    return out;
}

}  // namespace vblast
