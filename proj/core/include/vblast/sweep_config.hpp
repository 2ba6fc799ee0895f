// SPDX-License-Identifier: Apache-2.0
//
// Sweep configuration: a flat "key = value" text file, one key per line,
// '#' starting a comment. Keys and defaults:
//
//   n = 2                      receive antennas
//   m = 2                      transmit antennas (streams)
//   snr_db_start = 0
//   snr_db_stop = 40           inclusive
//   snr_db_step = 2            > 0
//   gap_db = 0                 SNR gap to capacity, >= 0 dB
//   rate_mode = multiplexing   multiplexing | nats | bits
//   rate_value = 1             gain r, or per-stream rate in nats or bits
//   strategies = uniform, apa, ara, apra
//   mc_trials = 0              Monte Carlo trials per row, 0 disables
//   seed = 1
//   threads = 0                worker threads, 0 = hardware concurrency
//
// Unknown keys, repeated keys and malformed values are rejected with the
// offending line number.

#pragma once

#include "vblast/strategy.hpp"
#include "vblast/system.hpp"

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace vblast {

class ConfigError : public std::runtime_error {
public:
    ConfigError(int line, std::string field, const std::string& message);
    int line() const noexcept { return line_; }  ///< 1-based; 0 for whole-file checks
    const std::string& field() const noexcept { return field_; }

private:
    int line_;
    std::string field_;
};

struct SweepConfig {
    enum class RateMode { multiplexing, nats, bits };

    int n = 2;
    int m = 2;
    double snr_db_start = 0.0;
    double snr_db_stop = 40.0;
    double snr_db_step = 2.0;
    double gap_db = 0.0;
    RateMode rate_mode = RateMode::multiplexing;
    double rate_value = 1.0;
    std::vector<Strategy> strategies{Strategy::uniform, Strategy::apa, Strategy::ara, Strategy::apra};
    std::int64_t mc_trials = 0;
    std::uint64_t seed = 1;
    unsigned threads = 0;

    /// Rate in nats (bits converted) or the multiplexing gain.
    RateSpec rate_spec() const;
    SystemConfig system_at(double snr_db) const;
    /// start, start + step, ... up to stop (inclusive, with 1e-9 dB slack).
    std::vector<double> snr_points_db() const;
    /// Throws ConfigError (line 0) when an invariant fails.
    void validate() const;
};

/// Sets one key from its text value without validating the whole config.
/// Throws ConfigError naming `line` for unknown keys or malformed values.
void set_config_value(SweepConfig& cfg, const std::string& key, std::string_view value, int line = 0);

SweepConfig parse_config(std::string_view text);
SweepConfig load_config(const std::filesystem::path& path);

}  // namespace vblast
