// SPDX-License-Identifier: Apache-2.0

#include "vblast/channel_model.hpp"
#include "vblast/outage.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

using namespace vblast;

namespace {

// Composite Simpson integral of the Erlang(k, 1) density over [0, x].
double erlang_cdf_by_quadrature(int k, double x) {
    const int steps = 20000;
    const double h = x / steps;
    auto f = [k](double t) { return std::pow(t, k - 1) * std::exp(-t) / std::tgamma(k); };
    double s = f(0.0) + f(x);
    for (int j = 1; j < steps; ++j) s += (j % 2 ? 4.0 : 2.0) * f(j * h);
    return s * h / 3.0;
}

// Kolmogorov-Smirnov distance of a sample against a CDF.
template <class Cdf>
double ks_statistic(std::vector<double> xs, Cdf cdf) {
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t j = 0; j < xs.size(); ++j) {
        const double f = cdf(xs[j]);
        d = std::max({d, (j + 1) / n - f, f - j / n});
    }
    return d;
}

}  // namespace

TEST(MrcOutageCdf, OriginIsZero) { EXPECT_EQ(mrc_outage_cdf(1, 0.0), 0.0); }

TEST(MrcOutageCdf, MatchesQuadratureOracle) {
    // Frozen from erlang_cdf_by_quadrature.
    EXPECT_NEAR(mrc_outage_cdf(1, 0.1), 9.5163e-2, 1e-6);
    EXPECT_NEAR(mrc_outage_cdf(2, 1.0), 2.64241e-1, 1e-6);
    for (int k : {1, 2, 3, 5, 8})
        for (double x : {0.05, 0.5, 1.0, 3.0, 10.0})
            EXPECT_NEAR(mrc_outage_cdf(k, x), erlang_cdf_by_quadrature(k, x), 1e-9) << k << " " << x;
}

TEST(MrcOutageCdf, MonotoneInArgumentAndOrder) {
    for (int k = 1; k <= 64; ++k) {
        double prev = 0.0;
        for (double x = 0.0; x <= 1000.0; x += 0.37) {
            const double f = mrc_outage_cdf(k, x);
            ASSERT_GE(f, prev);
            ASSERT_LE(f, 1.0);
            prev = f;
            if (k > 1) ASSERT_LE(f, mrc_outage_cdf(k - 1, x));
        }
    }
}

TEST(MrcOutageCdf, StableAtExtremes) {
    EXPECT_EQ(mrc_outage_cdf(64, 1000.0), 1.0);
    const double tiny = mrc_outage_cdf(64, 1e-3);
    EXPECT_GT(tiny, 0.0);
    EXPECT_NEAR(std::log(tiny), 64 * std::log(1e-3) - std::lgamma(65.0), 1e-3);
    EXPECT_TRUE(std::isfinite(mrc_log_survival(64, 1000.0)));
    EXPECT_NEAR(mrc_log_survival(1, 1000.0), -1000.0, 1e-9);
}

TEST(MrcOutageCdf, RejectsBadArguments) {
    EXPECT_THROW(mrc_outage_cdf(0, 1.0), std::domain_error);
    EXPECT_THROW(mrc_outage_cdf(1, -1e-9), std::domain_error);
}

TEST(MrcOutageCdf, FirstOrderTermBound) {
    for (int k = 1; k <= 12; ++k)
        for (double x = 1e-6; x <= 1e-2 * k; x *= 1.7) {
            const double approx = mrc_outage_first_order(k, x);
            const double rel = (approx - mrc_outage_cdf(k, x)) / approx;
            ASSERT_GE(rel, 0.0);
            // Rigorous bound for every k; the tighter 2x/(k+1) holds for k <= 2.
            ASSERT_LE(rel, x * (k + x) / (k + 1) * (1 + 1e-9));
            if (k <= 2) ASSERT_LE(rel, 2 * x / (k + 1) * (1 + 1e-9));
        }
}

TEST(MrcHazard, IncreasingTowardsOne) {
    for (int k : {1, 2, 4, 16}) {
        double prev = 0.0;
        for (double x = 0.01; x < 500; x *= 1.3) {
            const double h = mrc_hazard(k, x);
            ASSERT_GE(h, prev - 1e-15);
            ASSERT_LE(h, 1.0 + 1e-15);
            EXPECT_NEAR(h, mrc_density(k, x) / std::exp(mrc_log_survival(k, x)), 1e-9 * std::max(h, 1e-300) + 1e-12);
            prev = h;
        }
    }
}

TEST(EffectiveGains, IdentityChannel) {
    const auto g = effective_gains(Eigen::MatrixXcd::Identity(2, 2));
    ASSERT_EQ(g.gains.size(), 2u);
    EXPECT_NEAR(g.gains[0], 1.0, 1e-14);
    EXPECT_NEAR(g.gains[1], 1.0, 1e-14);
}

TEST(EffectiveGains, MatchesExplicitProjection) {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> nd(0.0, std::sqrt(0.5));
    Eigen::MatrixXcd h(4, 3);
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 3; ++c) h(r, c) = {nd(rng), nd(rng)};
    const auto g = effective_gains(h);
    for (int i = 0; i < 3; ++i) {
        // Project column i off the span of columns i+1..m-1 by least squares.
        Eigen::VectorXcd col = h.col(i);
        if (i < 2) {
            const Eigen::MatrixXcd rest = h.rightCols(2 - i);
            col -= rest * rest.colPivHouseholderQr().solve(col);
        }
        EXPECT_NEAR(g.gains[static_cast<std::size_t>(i)], col.squaredNorm(), 1e-10);
    }
}

TEST(SampleChannelGains, SingleAntennaMean) {
    const SystemConfig cfg(1, 1, 1.0);
    std::mt19937_64 rng(11);
    double sum = 0.0;
    for (int t = 0; t < 100000; ++t) sum += sample_channel_gains(cfg, rng).gains[0];
    EXPECT_NEAR(sum / 1e5, 1.0, 0.01);
}

TEST(SampleChannelGains, TwoByTwoMeans) {
    const SystemConfig cfg(2, 2, 1.0);
    std::mt19937_64 rng(12);
    double s0 = 0.0, s1 = 0.0;
    for (int t = 0; t < 100000; ++t) {
        const auto g = sample_channel_gains(cfg, rng);
        ASSERT_EQ(g.gains.size(), 2u);
        s0 += g.gains[0];
        s1 += g.gains[1];
    }
    EXPECT_NEAR(s0 / 1e5, 1.0, 0.02);
    EXPECT_NEAR(s1 / 1e5, 2.0, 0.02);
}

TEST(SampleChannelGains, ErlangByKolmogorovSmirnov) {
    const double critical = 1.628 / std::sqrt(1e5);  // 1% level
    for (auto [n, m] : {std::pair{2, 2}, std::pair{4, 2}, std::pair{4, 4}}) {
        const SystemConfig cfg(n, m, 1.0);
        std::mt19937_64 rng(1000 + 10 * n + m);
        GainSampler sampler(cfg);
        std::vector<std::vector<double>> draws(static_cast<std::size_t>(m));
        std::vector<double> g(static_cast<std::size_t>(m));
        for (int t = 0; t < 100000; ++t) {
            sampler.sample(rng, g);
            for (int i = 0; i < m; ++i) draws[static_cast<std::size_t>(i)].push_back(g[static_cast<std::size_t>(i)]);
        }
        for (int i = 0; i < m; ++i) {
            const int k = cfg.diversity_order(i);
            const double d = ks_statistic(draws[static_cast<std::size_t>(i)], [k](double x) { return mrc_outage_cdf(k, x); });
            EXPECT_LT(d, critical) << n << "x" << m << " stream " << i;
        }
    }
}

TEST(MonteCarloOutage, ZeroRatesNeverOutage) {
    const SystemConfig cfg(2, 2, 10.0);
    const auto est = monte_carlo_outage(cfg, Allocation::uniform(cfg, 0.0), 5000, 3);
    EXPECT_EQ(est.p_out, 0.0);
}

TEST(MonteCarloOutage, InfiniteRateAlwaysOutage) {
    const SystemConfig cfg(2, 2, 10.0);
    Allocation a = Allocation::uniform(cfg, 1.0);
    a.rates[1] = std::numeric_limits<double>::infinity();
    EXPECT_EQ(monte_carlo_outage(cfg, a, 5000, 3).p_out, 1.0);
}

TEST(MonteCarloOutage, MatchesExactOutage) {
    const SystemConfig cfg(2, 2, 10.0);
    const Allocation a = Allocation::uniform(cfg, 1.0);
    const auto est = monte_carlo_outage(cfg, a, 100000, 2024);
    const double exact = system_outage_exact(cfg, a);
    EXPECT_NEAR(exact, 0.1690, 5e-4);
    EXPECT_LT(std::abs(est.p_out - exact), 3 * est.std_error);
    EXPECT_NEAR(est.std_error, std::sqrt(est.p_out * (1 - est.p_out) / 1e5), 1e-15);
    EXPECT_EQ(est.trials, 100000u);
    EXPECT_EQ(est.seed, 2024u);
}

TEST(MonteCarloOutage, DeterministicAndPartitionInvariant) {
    const SystemConfig cfg(4, 2, 10.0);
    const Allocation a = Allocation::uniform(cfg, 1.5);
    const std::uint64_t trials = 50000, seed = 99;
    const std::uint64_t blocks = (trials + kMonteCarloBlock - 1) / kMonteCarloBlock;
    const auto whole = tally_outage_blocks(cfg, a, trials, seed, 0, blocks);
    auto halves = tally_outage_blocks(cfg, a, trials, seed, 0, blocks / 2);
    halves += tally_outage_blocks(cfg, a, trials, seed, blocks / 2, blocks);
    EXPECT_EQ(whole, halves);
    const auto one = monte_carlo_outage(cfg, a, trials, seed, 1);
    const auto four = monte_carlo_outage(cfg, a, trials, seed, 4);
    EXPECT_EQ(one.p_out, four.p_out);
    EXPECT_EQ(one.p_out, to_estimate(whole, seed).p_out);
}

TEST(MonteCarloOutage, RejectsNonpositiveTrials) {
    const SystemConfig cfg(2, 2, 10.0);
    EXPECT_THROW(monte_carlo_outage(cfg, Allocation::uniform(cfg, 1.0), 0, 1), std::invalid_argument);
}

TEST(SystemConfig, Validation) {
    EXPECT_THROW(SystemConfig(1, 2, 10.0), std::invalid_argument);
    EXPECT_THROW(SystemConfig(2, 2, 0.0), std::invalid_argument);
    EXPECT_THROW(SystemConfig(2, 2, 10.0, 0.5), std::invalid_argument);
    const SystemConfig cfg(2, 2, 100.0, db_to_linear(3.0));
    EXPECT_NEAR(cfg.snr(), 100.0 / std::pow(10.0, 0.3), 1e-12);
    EXPECT_EQ(cfg.diversity_order(0), 1);
    EXPECT_EQ(cfg.diversity_order(1), 2);
    EXPECT_THROW(cfg.diversity_order(2), std::out_of_range);
}
