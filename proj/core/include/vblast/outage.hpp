// SPDX-License-Identifier: Apache-2.0
//
// Analytic outage of coded ZF V-BLAST with capacity-achieving codes.
//
// Stream i (0-based) with power alpha_i and rate R_i is in outage with
// probability P_i = F_k((e^R_i - 1) / (alpha_i snr)), k = n - m + i + 1.
// The system is in outage when any stream is:
//   exact:       P_out = 1 - prod_i (1 - P_i)
//   first order: P_out ~ sum_i x_i^k / k!,  x_i = (e^R_i - 1) / (alpha_i snr)

#pragma once

#include "vblast/system.hpp"

#include <span>
#include <vector>

namespace vblast {

/// MRC argument (e^R - 1) / (alpha snr). Zero for R = 0; +inf for alpha = 0.
double outage_argument(const SystemConfig& cfg, double alpha, double rate);

/// Exact stream outage. Returns 0 for rate 0 and 1 for alpha 0 with rate > 0.
double stream_outage_exact(const SystemConfig& cfg, int stream, double alpha, double rate);

/// First-order stream outage x^k / k!.
double stream_outage_approx(const SystemConfig& cfg, int stream, double alpha, double rate);

/// d/dR of the first-order stream outage:
///   e^R (e^R - 1)^{k-1} / ((alpha snr)^k (k-1)!).
/// Throws std::domain_error for alpha = 0 with a positive result.
double stream_outage_rate_derivative(const SystemConfig& cfg, int stream, double alpha, double rate);

struct OutageReport {
    std::vector<double> per_stream;  ///< exact P_i
    double system_exact = 0.0;
    double system_approx = 0.0;      ///< first-order sum, may exceed 1
    double ber = 0.0;                ///< ~ P_out / 2
};

OutageReport system_outage(const SystemConfig& cfg, const Allocation& alloc);

double system_outage_exact(const SystemConfig& cfg, const Allocation& alloc);
double system_outage_approx(const SystemConfig& cfg, const Allocation& alloc);

/// Which outage expression a solver minimises.
enum class Objective { approximate, exact };

const char* to_string(Objective objective) noexcept;

/// system_approx or system_exact of `alloc`.
double system_outage(const SystemConfig& cfg, const Allocation& alloc, Objective objective);

/// One point of an outage-versus-SNR curve (linear SNR).
struct CurvePoint {
    double snr = 0.0;
    double p_out = 0.0;
};

struct DiversityReport {
    double slope = 0.0;        ///< fitted diversity order d
    double window_lo_db = 0.0;
    double window_hi_db = 0.0;
    double residual = 0.0;     ///< max |fit - data| in -ln P units
    int points = 0;
};

/// Least-squares slope of -ln P_out against ln snr over points whose SNR
/// lies in [lo_db, hi_db]. Needs at least 3 such points, all with P_out > 0.
DiversityReport diversity_fit(std::span<const CurvePoint> curve, double lo_db, double hi_db);

}  // namespace vblast
