// SPDX-License-Identifier: Apache-2.0

#include "vblast/sweep_config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace vblast {
namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(std::string_view v, int line, const std::string& key) {
    double out = 0.0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size() || !std::isfinite(out))
        throw ConfigError(line, key, "expected a finite number, got '" + std::string(v) + "'");
    return out;
}

template <class Int>
Int to_integer(std::string_view v, int line, const std::string& key) {
    Int out = 0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size())
        throw ConfigError(line, key, "expected an integer, got '" + std::string(v) + "'");
    return out;
}

}  // namespace

ConfigError::ConfigError(int line, std::string field, const std::string& message)
    : std::runtime_error((line > 0 ? "line " + std::to_string(line) + ": " : std::string()) + field + ": " + message),
      line_(line),
      field_(std::move(field)) {}

RateSpec SweepConfig::rate_spec() const {
    switch (rate_mode) {
        case RateMode::multiplexing: return RateSpec::multiplexing(rate_value);
        case RateMode::nats: return RateSpec::fixed(rate_value);
        case RateMode::bits: return RateSpec::fixed(rate_value * std::log(2.0));
    }
    return RateSpec::fixed(rate_value);
}

SystemConfig SweepConfig::system_at(double snr_db) const {
    return SystemConfig(n, m, db_to_linear(snr_db), db_to_linear(gap_db));
}

std::vector<double> SweepConfig::snr_points_db() const {
    std::vector<double> pts;
    for (long j = 0;; ++j) {
        const double v = snr_db_start + static_cast<double>(j) * snr_db_step;
        if (v > snr_db_stop + 1e-9) break;
        pts.push_back(v);
    }
    return pts;
}

void SweepConfig::validate() const {
    if (m < 1) throw ConfigError(0, "m", "must be >= 1");
    if (n < m) throw ConfigError(0, "n", "must be >= m");
    if (n > 64) throw ConfigError(0, "n", "must be <= 64");
    if (!(snr_db_step > 0.0)) throw ConfigError(0, "snr_db_step", "must be > 0");
    if (snr_db_stop < snr_db_start) throw ConfigError(0, "snr_db_stop", "must be >= snr_db_start");
    if (gap_db < 0.0) throw ConfigError(0, "gap_db", "must be >= 0");
    if (strategies.empty()) throw ConfigError(0, "strategies", "must not be empty");
    if (mc_trials < 0) throw ConfigError(0, "mc_trials", "must be >= 0");
    if (rate_mode == RateMode::multiplexing) {
        if (!(rate_value > 0.0 && rate_value <= m)) throw ConfigError(0, "rate_value", "multiplexing gain must lie in (0, m]");
    } else if (!(rate_value > 0.0)) {
        throw ConfigError(0, "rate_value", "rate must be > 0");
    }
}

void set_config_value(SweepConfig& cfg, const std::string& key, std::string_view value, int line) {
    if (key == "n") cfg.n = to_integer<int>(value, line, key);
    else if (key == "m") cfg.m = to_integer<int>(value, line, key);
    else if (key == "snr_db_start") cfg.snr_db_start = to_double(value, line, key);
    else if (key == "snr_db_stop") cfg.snr_db_stop = to_double(value, line, key);
    else if (key == "snr_db_step") cfg.snr_db_step = to_double(value, line, key);
    else if (key == "gap_db") cfg.gap_db = to_double(value, line, key);
    else if (key == "rate_value") cfg.rate_value = to_double(value, line, key);
    else if (key == "mc_trials") cfg.mc_trials = to_integer<std::int64_t>(value, line, key);
    else if (key == "seed") cfg.seed = to_integer<std::uint64_t>(value, line, key);
    else if (key == "threads") cfg.threads = to_integer<unsigned>(value, line, key);
    else if (key == "rate_mode") {
        if (value == "multiplexing") cfg.rate_mode = SweepConfig::RateMode::multiplexing;
        else if (value == "nats") cfg.rate_mode = SweepConfig::RateMode::nats;
        else if (value == "bits") cfg.rate_mode = SweepConfig::RateMode::bits;
        else throw ConfigError(line, key, "expected multiplexing, nats or bits");
    } else if (key == "strategies") {
        cfg.strategies.clear();
        std::string_view rest = value;
        while (!rest.empty()) {
            const auto comma = rest.find(',');
            const std::string_view item = trim(rest.substr(0, comma));
            const auto st = parse_strategy(item);
            if (!st) throw ConfigError(line, key, "unknown strategy '" + std::string(item) + "'");
            cfg.strategies.push_back(*st);
            rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
        }
    } else {
        throw ConfigError(line, key, "unknown key");
    }
}

SweepConfig parse_config(std::string_view text) {
    SweepConfig cfg;
    std::set<std::string> seen;
    std::istringstream in{std::string(text)};
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string_view s = raw;
        if (const auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
        s = trim(s);
        if (s.empty()) continue;
        const auto eq = s.find('=');
        if (eq == std::string_view::npos) throw ConfigError(line, std::string(s), "expected 'key = value'");
        const std::string key(trim(s.substr(0, eq)));
        const std::string_view value = trim(s.substr(eq + 1));
        if (key.empty()) throw ConfigError(line, key, "missing key");
        if (value.empty()) throw ConfigError(line, key, "missing value");
        if (!seen.insert(key).second) throw ConfigError(line, key, "key given twice");

        set_config_value(cfg, key, value, line);
    }
    cfg.validate();
    return cfg;
}

SweepConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(0, path.string(), "cannot open file");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

}  // namespace vblast
