// SPDX-License-Identifier: Apache-2.0
//
// SNR sweeps across allocation strategies and their CSV form.

#pragma once

#include "vblast/strategy.hpp"
#include "vblast/sweep_config.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace vblast {

/// One (SNR point, strategy) result. Allocation columns hold the exact
/// optimum; missing values are NaN.
struct SweepRow {
    double snr_db = 0.0;
    Strategy strategy = Strategy::uniform;
    double p_out_exact = 0.0;        ///< exact outage of the exact optimum
    double p_out_closed_form = 0.0;  ///< exact outage of the closed-form allocation
    double p_out_approx = 0.0;       ///< first-order outage of the exact optimum
    double p_out_mc = 0.0;
    double mc_stderr = 0.0;
    int active_count = 0;
    std::vector<double> powers;
    std::vector<double> rates;
    double snr_gain_db = 0.0;        ///< APA only
    double diversity_running = 0.0;  ///< local slope of -ln P_out vs ln snr
    std::string error;               ///< empty on success

    /// Field-wise equality with NaN equal to NaN.
    bool operator==(const SweepRow& other) const;
};

/// Rows ordered by SNR point, then by the configured strategy order.
/// Points run in parallel on config.threads workers; the output does not
/// depend on the thread count. A failing row keeps its error message and
/// NaN values, and the sweep continues.
std::vector<SweepRow> run_sweep(const SweepConfig& config);

/// Single row; `row_seed` seeds its Monte Carlo run.
SweepRow evaluate_point(const SweepConfig& config, double snr_db, Strategy strategy, std::uint64_t row_seed);

/// Fills diversity_running from neighbouring SNR points of each strategy.
void fill_running_diversity(std::vector<SweepRow>& rows);

/// RFC-4180 CSV with a header row. Reals use "%.6e"; NaN becomes an empty
/// field. `streams` fixes the number of alpha_i / rate_i columns.
void write_csv(std::ostream& out, const std::vector<SweepRow>& rows, int streams);
std::string to_csv(const std::vector<SweepRow>& rows, int streams);

/// Parses CSV written by write_csv. Throws std::runtime_error on malformed input.
std::vector<SweepRow> read_csv(std::istream& in);
std::vector<SweepRow> from_csv(const std::string& text);

}  // namespace vblast
