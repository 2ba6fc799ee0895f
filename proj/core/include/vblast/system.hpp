// SPDX-License-Identifier: Apache-2.0
//
// Core value types shared by every module: the link configuration, the
// per-stream power/rate allocation and the RateSpec rate model.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace vblast {

/// Raised when an iterative solver cannot meet its tolerance or a bracket
/// cannot be established.
class SolverFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Antenna counts and SNR of a ZF V-BLAST link.
///
/// The SNR gap enters exactly once: `snr()` is the effective SNR
/// gamma0 / gap and is the only SNR seen by the analytic and numerical code.
/// Streams are indexed 0..m-1 in detection order; stream i sees a
/// (n - m + i + 1)-th order MRC channel.
class SystemConfig {
public:
    SystemConfig(int rx_antennas, int tx_antennas, double average_snr, double snr_gap = 1.0);

    int rx_antennas() const noexcept { return n_; }
    int tx_antennas() const noexcept { return m_; }
    int streams() const noexcept { return m_; }

    double average_snr() const noexcept { return gamma0_; }
    double snr_gap() const noexcept { return gap_; }
    double snr() const noexcept { return effective_; }

    /// Diversity order n - m + i + 1 of 0-based stream i.
    int diversity_order(int stream) const;

    /// Same antennas and gap with the average SNR multiplied by `factor`.
    SystemConfig with_snr_scaled(double factor) const;

private:
    int n_;
    int m_;
    double gamma0_;
    double gap_;
    double effective_;
};

double db_to_linear(double db);
double linear_to_db(double linear);

/// Per-stream rate either fixed in nats or tied to the SNR through a
/// multiplexing gain r, R = (r / m) ln(1 + snr).
class RateSpec {
public:
    enum class Mode { fixed_rate, multiplexing_gain };

    static RateSpec fixed(double nats_per_stream);
    static RateSpec multiplexing(double gain);

    Mode mode() const noexcept { return mode_; }
    double value() const noexcept { return value_; }

    double per_stream_rate(const SystemConfig& cfg) const;
    double total_rate(const SystemConfig& cfg) const;

private:
    RateSpec(Mode mode, double value) : mode_(mode), value_(value) {}
    Mode mode_;
    double value_;
};

/// Powers alpha_i and rates R_i (nats/s/Hz) of the m streams.
struct Allocation {
    std::vector<double> powers;
    std::vector<double> rates;

    std::size_t size() const noexcept { return powers.size(); }
    /// Number of streams carrying a strictly positive rate.
    int active_count() const noexcept;
    double total_power() const noexcept;
    double total_rate() const noexcept;

    static Allocation uniform(const SystemConfig& cfg, double rate_per_stream);

    bool operator==(const Allocation&) const = default;
};

/// Throws std::invalid_argument on a size mismatch with `cfg` or a negative
/// or non-finite power. Rates may be +inf.
void check_allocation(const SystemConfig& cfg, const Allocation& alloc);

/// Iteration report of the numerical solvers. Multipliers refer to the
/// objective the solver minimised; NaN when not applicable.
struct SolverDiagnostics {
    double multiplier_power = 0.0;
    double multiplier_rate = 0.0;
    int iterations = 0;
    double residual = 0.0;
    bool converged = true;
    std::vector<std::string> warnings;
};

struct SolveResult {
    Allocation allocation;
    SolverDiagnostics diagnostics;
};

}  // namespace vblast
