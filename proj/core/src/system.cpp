// SPDX-License-Identifier: Apache-2.0

#include "vblast/system.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace vblast {

SystemConfig::SystemConfig(int rx_antennas, int tx_antennas, double average_snr, double snr_gap)
    : n_(rx_antennas), m_(tx_antennas), gamma0_(average_snr), gap_(snr_gap) {
    if (m_ < 1 || n_ < m_)
        throw std::invalid_argument("SystemConfig: require n >= m >= 1");
    if (!(gamma0_ > 0.0) || !std::isfinite(gamma0_))
        throw std::invalid_argument("SystemConfig: average SNR must be positive and finite");
    if (!(gap_ >= 1.0) || !std::isfinite(gap_))
        throw std::invalid_argument("SystemConfig: SNR gap must be >= 1");
    effective_ = gamma0_ / gap_;
}

int SystemConfig::diversity_order(int stream) const {
    if (stream < 0 || stream >= m_)
        throw std::out_of_range("SystemConfig: stream index out of range");
    return n_ - m_ + stream + 1;
}

SystemConfig SystemConfig::with_snr_scaled(double factor) const {
    return SystemConfig(n_, m_, gamma0_ * factor, gap_);
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

RateSpec RateSpec::fixed(double nats_per_stream) {
    if (!(nats_per_stream >= 0.0) || !std::isfinite(nats_per_stream))
        throw std::invalid_argument("RateSpec: per-stream rate must be finite and >= 0");
    return RateSpec(Mode::fixed_rate, nats_per_stream);
}

RateSpec RateSpec::multiplexing(double gain) {
    if (!(gain >= 0.0) || !std::isfinite(gain))
        throw std::invalid_argument("RateSpec: multiplexing gain must be finite and >= 0");
    return RateSpec(Mode::multiplexing_gain, gain);
}

double RateSpec::per_stream_rate(const SystemConfig& cfg) const {
    if (mode_ == Mode::fixed_rate) return value_;
    if (value_ > cfg.streams())
        throw std::invalid_argument("RateSpec: multiplexing gain exceeds m");
    return value_ / cfg.streams() * std::log1p(cfg.snr());
}

double RateSpec::total_rate(const SystemConfig& cfg) const {
    return cfg.streams() * per_stream_rate(cfg);
}

int Allocation::active_count() const noexcept {
    return static_cast<int>(std::count_if(rates.begin(), rates.end(), [](double r) { return r > 0.0; }));
}

double Allocation::total_power() const noexcept {
    return std::accumulate(powers.begin(), powers.end(), 0.0);
}

double Allocation::total_rate() const noexcept {
    return std::accumulate(rates.begin(), rates.end(), 0.0);
}

Allocation Allocation::uniform(const SystemConfig& cfg, double rate_per_stream) {
    const auto m = static_cast<std::size_t>(cfg.streams());
    return Allocation{std::vector<double>(m, 1.0), std::vector<double>(m, rate_per_stream)};
}

void check_allocation(const SystemConfig& cfg, const Allocation& alloc) {
    const auto m = static_cast<std::size_t>(cfg.streams());
    if (alloc.powers.size() != m || alloc.rates.size() != m)
        throw std::invalid_argument("Allocation: dimension does not match the number of streams");
    for (double a : alloc.powers)
        if (!(a >= 0.0) || !std::isfinite(a))
            throw std::invalid_argument("Allocation: powers must be finite and >= 0");
    for (double r : alloc.rates)
        if (!(r >= 0.0))
            throw std::invalid_argument("Allocation: rates must be >= 0");
}

}  // namespace vblast
