// SPDX-License-Identifier: Apache-2.0
//
// i.i.d. Rayleigh fading statistics of the ZF V-BLAST effective channels.
//
// After nulling and cancellation, stream i sees the gain |h_i_perp|^2, the
// squared norm of column i projected off the span of columns i+1..m. With
// unit-variance circular Gaussian entries that gain is Erlang(n - m + i, 1)
// (1-based i), so per-stream outage is the outage of a k-th order MRC.

#pragma once

#include "vblast/system.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace vblast {

/// Outage probability of a k-th order MRC, F_k(x) = 1 - e^-x sum_{l<k} x^l/l!.
/// Accurate in relative terms for tiny x (series form) and for x up to 1e3.
double mrc_outage_cdf(int k, double x);

/// ln(1 - F_k(x)), finite for every x >= 0.
double mrc_log_survival(int k, double x);

/// Erlang(k,1) density x^{k-1} e^-x / (k-1)!.
double mrc_density(int k, double x);

/// Hazard f_k(x) / (1 - F_k(x)); increasing in x, tends to 1.
double mrc_hazard(int k, double x);

/// ln of the hazard; -inf at x = 0 for k > 1.
double mrc_log_hazard(int k, double x);

/// Leading term x^k / k! of F_k(x) for small x.
double mrc_outage_first_order(int k, double x);

struct ChannelSample {
    std::vector<double> gains;  ///< g_i = |h_i_perp|^2, i = 0..m-1
};

/// Effective post-projection gains of a given n x m channel matrix.
/// Uses a QR factorisation of the column-reversed matrix: the j-th diagonal
/// of R is the norm of reversed column j projected off the columns before it.
ChannelSample effective_gains(const Eigen::MatrixXcd& channel);

/// Reusable sampler for effective gains; keeps its work buffers between draws.
class GainSampler {
public:
    explicit GainSampler(const SystemConfig& cfg);

    /// Draws one channel and writes its m gains into `gains`. Degenerate
    /// draws (a zero or non-finite gain) are redrawn and counted.
    void sample(std::mt19937_64& rng, std::span<double> gains);

    std::uint64_t degenerate_draws() const noexcept { return degenerate_; }

private:
    bool fill(std::mt19937_64& rng, std::span<double> gains);

    int n_;
    int m_;
    Eigen::MatrixXcd reversed_;
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr_;
    std::normal_distribution<double> normal_;
    std::uint64_t degenerate_ = 0;
};

ChannelSample sample_channel_gains(const SystemConfig& cfg, std::mt19937_64& rng);

/// Monte Carlo estimate of the system outage probability.
struct MonteCarloEstimate {
    double p_out = 0.0;
    double std_error = 0.0;  ///< sqrt(p (1 - p) / trials)
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    std::uint64_t degenerate_draws = 0;
};

/// Trials are grouped in fixed blocks of kMonteCarloBlock; block b draws from
/// an mt19937_64 seeded with monte_carlo_block_seed(seed, b). A block's
/// outcome therefore depends only on (seed, b), so any partition of the
/// blocks into shards or threads yields identical totals.
inline constexpr std::uint64_t kMonteCarloBlock = 4096;

std::uint64_t monte_carlo_block_seed(std::uint64_t seed, std::uint64_t block);

struct OutageTally {
    std::uint64_t outages = 0;
    std::uint64_t trials = 0;
    std::uint64_t degenerate_draws = 0;

    OutageTally& operator+=(const OutageTally& other) noexcept;
    bool operator==(const OutageTally&) const = default;
};

/// Runs blocks [first_block, last_block) of a `trials`-trial experiment.
OutageTally tally_outage_blocks(const SystemConfig& cfg, const Allocation& alloc,
                                std::uint64_t trials, std::uint64_t seed,
                                std::uint64_t first_block, std::uint64_t last_block);

MonteCarloEstimate to_estimate(const OutageTally& tally, std::uint64_t seed);

/// A trial is in outage when some stream has ln(1 + alpha_i g_i snr) < R_i.
/// `threads` = 0 picks the hardware concurrency.
MonteCarloEstimate monte_carlo_outage(const SystemConfig& cfg, const Allocation& alloc,
                                      std::int64_t trials, std::uint64_t seed,
                                      unsigned threads = 0);

}  // namespace vblast
