// SPDX-License-Identifier: Apache-2.0

#include "vblast/sweep.hpp"

#include "vblast/alloc_apa.hpp"
#include "vblast/channel_model.hpp"
#include "vblast/outage.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <thread>

namespace vblast {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool same(double a, double b) { return a == b || (std::isnan(a) && std::isnan(b)); }

bool same(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!same(a[i], b[i])) return false;
    return true;
}

}  // namespace

bool SweepRow::operator==(const SweepRow& o) const {
    return same(snr_db, o.snr_db) && strategy == o.strategy && same(p_out_exact, o.p_out_exact)
           && same(p_out_closed_form, o.p_out_closed_form) && same(p_out_approx, o.p_out_approx)
           && same(p_out_mc, o.p_out_mc) && same(mc_stderr, o.mc_stderr) && active_count == o.active_count
           && same(powers, o.powers) && same(rates, o.rates) && same(snr_gain_db, o.snr_gain_db)
           && same(diversity_running, o.diversity_running) && error == o.error;
}

SweepRow evaluate_point(const SweepConfig& config, double snr_db, Strategy strategy, std::uint64_t row_seed) {
    SweepRow row;
    row.snr_db = snr_db;
    row.strategy = strategy;
    row.p_out_exact = row.p_out_closed_form = row.p_out_approx = kNaN;
    row.p_out_mc = row.mc_stderr = row.snr_gain_db = row.diversity_running = kNaN;
    const auto m = static_cast<std::size_t>(config.m);
    row.powers.assign(m, kNaN);
    row.rates.assign(m, kNaN);

    const SystemConfig cfg = config.system_at(snr_db);
    const RateSpec spec = config.rate_spec();
    std::vector<std::string> errors;

    try {
        const SolveResult exact = solve_strategy(cfg, spec, strategy, SolveMethod::exact);
        const OutageReport rep = system_outage(cfg, exact.allocation);
        row.p_out_exact = rep.system_exact;
        row.p_out_approx = rep.system_approx;
        row.active_count = exact.allocation.active_count();
        row.powers = exact.allocation.powers;
        row.rates = exact.allocation.rates;
        if (strategy == Strategy::apa && rep.system_exact > 0.0 && rep.system_exact < 1.0)
            row.snr_gain_db = snr_gain(cfg, spec.per_stream_rate(cfg), exact.allocation).gain_db;
        if (config.mc_trials > 0) {
            const auto mc = monte_carlo_outage(cfg, exact.allocation, config.mc_trials, row_seed, 1);
            row.p_out_mc = mc.p_out;
            row.mc_stderr = mc.std_error;
        }
    } catch (const std::exception& e) {
        errors.push_back(std::string("exact: ") + e.what());
    }
    try {
        const SolveResult cf = solve_strategy(cfg, spec, strategy, SolveMethod::closed_form);
        row.p_out_closed_form = system_outage_exact(cfg, cf.allocation);
    } catch (const std::exception& e) {
        errors.push_back(std::string("closed form: ") + e.what());
    }
    for (const auto& e : errors) row.error += (row.error.empty() ? "" : "; ") + e;
    return row;
}

void fill_running_diversity(std::vector<SweepRow>& rows) {
    for (auto strategy : {Strategy::uniform, Strategy::apa, Strategy::ara, Strategy::apra}) {
        std::vector<SweepRow*> line;
        for (auto& r : rows)
            if (r.strategy == strategy) line.push_back(&r);
        std::sort(line.begin(), line.end(), [](auto* a, auto* b) { return a->snr_db < b->snr_db; });
        for (std::size_t j = 0; j < line.size(); ++j) {
            if (line.size() < 2) break;
            const std::size_t lo = j == 0 ? 0 : j - 1;
            const std::size_t hi = j + 1 == line.size() ? j : j + 1;
            const double p_lo = line[lo]->p_out_exact, p_hi = line[hi]->p_out_exact;
            if (!(p_lo > 0.0) || !(p_hi > 0.0)) continue;
            const double dl = (line[hi]->snr_db - line[lo]->snr_db) * std::log(10.0) / 10.0;
            line[j]->diversity_running = -(std::log(p_hi) - std::log(p_lo)) / dl;
        }
    }
}

std::vector<SweepRow> run_sweep(const SweepConfig& config) {
    config.validate();
    const auto points = config.snr_points_db();
    const std::size_t per_point = config.strategies.size();
    const std::size_t jobs = points.size() * per_point;
    std::vector<SweepRow> rows(jobs);

    auto work = [&](std::size_t first, std::size_t last) {
        for (std::size_t j = first; j < last; ++j)
            rows[j] = evaluate_point(config, points[j / per_point], config.strategies[j % per_point],
                                     monte_carlo_block_seed(config.seed, j));
    };
    unsigned threads = config.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : config.threads;
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(jobs, 1)));
    if (threads <= 1) {
        work(0, jobs);
    } else {
        std::vector<std::future<void>> parts;
        for (unsigned t = 0; t < threads; ++t)
            parts.push_back(std::async(std::launch::async, work, jobs * t / threads, jobs * (t + 1) / threads));
        for (auto& p : parts) p.get();
    }
    fill_running_diversity(rows);
    return rows;
}

}  // namespace vblast
