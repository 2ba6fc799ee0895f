// SPDX-License-Identifier: Apache-2.0

#include "vblast/channel_model.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <stdexcept>
#include <thread>
#include <vector>

namespace vblast {
namespace {

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

std::uint64_t block_count(std::uint64_t trials) {
    return (trials + kMonteCarloBlock - 1) / kMonteCarloBlock;
}

}  // namespace

std::uint64_t monte_carlo_block_seed(std::uint64_t seed, std::uint64_t block) {
    return splitmix64(splitmix64(seed) ^ (block * 0xD1B54A32D192ED03ull));
}

OutageTally& OutageTally::operator+=(const OutageTally& other) noexcept {
    outages += other.outages;
    trials += other.trials;
    degenerate_draws += other.degenerate_draws;
    return *this;
}

OutageTally tally_outage_blocks(const SystemConfig& cfg, const Allocation& alloc,
                                std::uint64_t trials, std::uint64_t seed,
                                std::uint64_t first_block, std::uint64_t last_block) {
    check_allocation(cfg, alloc);
    const auto m = static_cast<std::size_t>(cfg.streams());
    const double snr = cfg.snr();
    last_block = std::min(last_block, block_count(trials));

    OutageTally tally;
    std::vector<double> gains(m);
    for (std::uint64_t b = first_block; b < last_block; ++b) {
        // Fresh generator and sampler per block: no state crosses block edges.
        std::mt19937_64 rng(monte_carlo_block_seed(seed, b));
        GainSampler sampler(cfg);
        const std::uint64_t begin = b * kMonteCarloBlock;
        const std::uint64_t end = std::min(trials, begin + kMonteCarloBlock);
        for (std::uint64_t t = begin; t < end; ++t) {
            sampler.sample(rng, gains);
            bool outage = false;
            for (std::size_t i = 0; i < m && !outage; ++i) {
                const double rate = alloc.rates[i];
                if (rate == 0.0) continue;
                outage = std::log1p(alloc.powers[i] * gains[i] * snr) < rate;
            }
            tally.outages += outage ? 1 : 0;
        }
        tally.trials += end - begin;
        tally.degenerate_draws += sampler.degenerate_draws();
    }
    return tally;
}

MonteCarloEstimate to_estimate(const OutageTally& tally, std::uint64_t seed) {
    MonteCarloEstimate est;
    est.trials = tally.trials;
    est.seed = seed;
    est.degenerate_draws = tally.degenerate_draws;
    if (tally.trials == 0) return est;
    est.p_out = static_cast<double>(tally.outages) / static_cast<double>(tally.trials);
    est.std_error = std::sqrt(est.p_out * (1.0 - est.p_out) / static_cast<double>(tally.trials));
    return est;
}

MonteCarloEstimate monte_carlo_outage(const SystemConfig& cfg, const Allocation& alloc,
                                      std::int64_t trials, std::uint64_t seed, unsigned threads) {
    if (trials <= 0) throw std::invalid_argument("monte_carlo_outage: trials must be positive");
    check_allocation(cfg, alloc);
    const auto total = static_cast<std::uint64_t>(trials);
    const std::uint64_t blocks = block_count(total);
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    const std::uint64_t shards = std::min<std::uint64_t>(threads, blocks);

    if (shards <= 1) return to_estimate(tally_outage_blocks(cfg, alloc, total, seed, 0, blocks), seed);

    std::vector<std::future<OutageTally>> parts;
    parts.reserve(shards);
    for (std::uint64_t s = 0; s < shards; ++s) {
        const std::uint64_t first = blocks * s / shards;
        const std::uint64_t last = blocks * (s + 1) / shards;
        parts.push_back(std::async(std::launch::async, [&, first, last] {
            return tally_outage_blocks(cfg, alloc, total, seed, first, last);
        }));
    }
    OutageTally tally;
    for (auto& part : parts) tally += part.get();
    return to_estimate(tally, seed);
}

}  // namespace vblast
