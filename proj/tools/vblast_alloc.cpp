// SPDX-License-Identifier: Apache-2.0
//
// vblast-alloc: allocation, sweeps, sensitivity, dual problems and Monte
// Carlo checks from the command line.
//
// Exit codes: 0 success, 2 configuration error, 3 solver failure.

#include "vblast/channel_model.hpp"
#include "vblast/duality.hpp"
#include "vblast/outage.hpp"
#include "vblast/robustness.hpp"
#include "vblast/strategy.hpp"
#include "vblast/sweep.hpp"
#include "vblast/sweep_config.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

using namespace vblast;

namespace {

constexpr int kConfigError = 2;
constexpr int kSolverFailure = 3;

// Flags mirroring the config keys; values are applied on top of --config.
struct ConfigFlags {
    std::string path;
    std::map<std::string, std::string> values;

    void attach(CLI::App& app, bool sweep_range) {
        app.add_option("-c,--config", path, "key = value configuration file");
        auto key = [&](const std::string& name, const std::string& help) {
            std::string flag = "--" + name;
            for (auto& ch : flag)
                if (ch == '_') ch = '-';
            app.add_option(flag, values[name], help);
        };
        key("n", "receive antennas");
        key("m", "transmit antennas (streams)");
        key("gap_db", "SNR gap to capacity in dB");
        key("rate_mode", "multiplexing | nats | bits");
        key("rate_value", "multiplexing gain or per-stream rate");
        key("seed", "random seed");
        key("threads", "worker threads, 0 = all cores");
        if (sweep_range) {
            key("snr_db_start", "first SNR point in dB");
            key("snr_db_stop", "last SNR point in dB");
            key("snr_db_step", "SNR step in dB");
            key("strategies", "comma separated strategies");
            key("mc_trials", "Monte Carlo trials per row, 0 disables");
        }
    }

    SweepConfig resolve() const {
        SweepConfig cfg = path.empty() ? SweepConfig{} : load_config(path);
        for (const auto& [k, v] : values)
            if (!v.empty()) set_config_value(cfg, k, v);
        cfg.validate();
        return cfg;
    }
};

Strategy strategy_from(const std::string& name) {
    const auto s = parse_strategy(name);
    if (!s) throw ConfigError(0, "strategy", "unknown strategy '" + name + "'");
    return *s;
}

SolveMethod method_from(const std::string& name) {
    const auto s = parse_method(name);
    if (!s) throw ConfigError(0, "method", "expected closed_form, first_order or exact");
    return *s;
}

void print_vector(const char* label, const std::vector<double>& v) {
    std::printf("%-14s", label);
    for (double x : v) std::printf(" %.6e", x);
    std::printf("\n");
}

void print_allocation(const SystemConfig& cfg, const SolveResult& res) {
    const auto rep = system_outage(cfg, res.allocation);
    print_vector("powers", res.allocation.powers);
    print_vector("rates", res.allocation.rates);
    print_vector("p_stream", rep.per_stream);
    std::printf("%-14s %.6e\n", "p_out_exact", rep.system_exact);
    std::printf("%-14s %.6e\n", "p_out_approx", rep.system_approx);
    std::printf("%-14s %d\n", "active", res.allocation.active_count());
    const auto& d = res.diagnostics;
    std::printf("%-14s %.6e\n%-14s %.6e\n", "nu_power", d.multiplier_power, "nu_rate", d.multiplier_rate);
    std::printf("%-14s %d\n%-14s %.3e\n%-14s %s\n", "iterations", d.iterations, "residual", d.residual, "converged",
                d.converged ? "yes" : "no");
    for (const auto& w : d.warnings) std::printf("warning: %s\n", w.c_str());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Average power and rate allocation for coded ZF V-BLAST"};
    app.require_subcommand(1);

    ConfigFlags alloc_flags, sweep_flags, sens_flags, dual_flags, mc_flags;
    double snr_db = 20.0;
    std::string strategy = "apa", method = "exact";

    auto* allocate = app.add_subcommand("allocate", "solve one operating point");
    alloc_flags.attach(*allocate, false);
    allocate->add_option("--snr-db", snr_db, "average SNR in dB");
    allocate->add_option("-s,--strategy", strategy, "uniform | apa | ara | apra");
    allocate->add_option("--method", method, "closed_form | first_order | exact");

    std::string output;
    auto* sweep = app.add_subcommand("sweep", "SNR sweep as CSV");
    sweep_flags.attach(*sweep, true);
    sweep->add_option("-o,--output", output, "CSV file, default stdout");

    std::string parameter = "power", objective = "exact";
    int stream = 1;
    double step = 1e-4;
    bool preserving = false;
    auto* sensitivity = app.add_subcommand("sensitivity", "local sensitivity of the optimised outage");
    sens_flags.attach(*sensitivity, false);
    sensitivity->add_option("--snr-db", snr_db, "average SNR in dB");
    sensitivity->add_option("-s,--strategy", strategy, "apa | ara | apra");
    sensitivity->add_option("--parameter", parameter, "power | rate")->check(CLI::IsMember({"power", "rate"}));
    sensitivity->add_option("--stream", stream, "1-based stream index");
    sensitivity->add_option("--step", step, "relative finite-difference step");
    sensitivity->add_option("--objective", objective, "first_order | exact")
        ->check(CLI::IsMember({"first_order", "exact"}));
    sensitivity->add_flag("--constraint-preserving", preserving, "keep the budget while perturbing");

    std::string kind = "power";
    double epsilon = 1e-3;
    auto* dual = app.add_subcommand("dual", "least power or largest rate at an outage target");
    dual_flags.attach(*dual, false);
    dual->add_option("--snr-db", snr_db, "average SNR in dB");
    dual->add_option("--kind", kind, "power | rate")->check(CLI::IsMember({"power", "rate"}));
    dual->add_option("--epsilon", epsilon, "target outage probability")->required();

    std::int64_t trials = 100000;
    auto* mc = app.add_subcommand("mc-validate", "compare the exact outage with Monte Carlo");
    mc_flags.attach(*mc, false);
    mc->add_option("--snr-db", snr_db, "average SNR in dB");
    mc->add_option("-s,--strategy", strategy, "uniform | apa | ara | apra");
    mc->add_option("--method", method, "closed_form | first_order | exact");
    mc->add_option("--trials", trials, "channel draws");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kConfigError;
    }

    try {
        if (allocate->parsed()) {
            const SweepConfig sc = alloc_flags.resolve();
            const SystemConfig cfg = sc.system_at(snr_db);
            const Strategy st = strategy_from(strategy);
            const SolveMethod me = method_from(method);
            std::printf("%-14s %dx%d at %.3f dB, %s, %s\n", "system", sc.n, sc.m, snr_db, to_string(st), to_string(me));
            print_allocation(cfg, solve_strategy(cfg, sc.rate_spec(), st, me));
        } else if (sweep->parsed()) {
            const SweepConfig sc = sweep_flags.resolve();
            const auto rows = run_sweep(sc);
            if (output.empty()) {
                write_csv(std::cout, rows, sc.m);
            } else {
                std::ofstream out(output, std::ios::binary);
                if (!out) throw ConfigError(0, "output", "cannot open '" + output + "'");
                write_csv(out, rows, sc.m);
            }
            int failed = 0;
            for (const auto& r : rows) failed += r.error.empty() ? 0 : 1;
            if (failed > 0) std::fprintf(stderr, "%d of %zu rows carry errors\n", failed, rows.size());
        } else if (sensitivity->parsed()) {
            const SweepConfig sc = sens_flags.resolve();
            const SystemConfig cfg = sc.system_at(snr_db);
            const Strategy st = strategy_from(strategy);
            if (st == Strategy::uniform) throw ConfigError(0, "strategy", "the uniform strategy has no optimum");
            if (stream < 1 || stream > sc.m) throw ConfigError(0, "stream", "must lie in 1..m");
            SensitivityOptions options;
            options.objective = objective == "exact" ? Objective::exact : Objective::approximate;
            options.constraint_preserving = preserving;
            const auto param = parameter == "power" ? SensitivityParameter::power : SensitivityParameter::rate;
            const auto est = sensitivity_finite_difference(cfg, sc.rate_spec(), st, param, stream - 1, step, options);
            for (const auto& r : sensitivity_closed_form(cfg, sc.rate_spec(), st))
                std::printf("%-44s %.6e\n", r.label().c_str(), r.delta);
            std::printf("%-44s %.6e\n", est.finite_difference.label().c_str(), est.finite_difference.delta);
            std::printf("%-44s %.6e\n", est.multiplier.label().c_str(), est.multiplier.delta);
        } else if (dual->parsed()) {
            const SweepConfig sc = dual_flags.resolve();
            const SystemConfig cfg = sc.system_at(snr_db);
            const DualConstraint target(epsilon);
            if (kind == "power") {
                const auto res = min_total_power(cfg, sc.rate_spec().per_stream_rate(cfg), target);
                std::printf("%-14s %.9e\n", "total_power", res.total_power);
                print_vector("powers", res.allocation.powers);
                print_vector("rates", res.allocation.rates);
                std::printf("%-14s %.3e\n%-14s %d\n", "residual", res.residual, "iterations", res.iterations);
                if (res.degenerate) std::printf("warning: budget collapsed towards zero\n");
            } else {
                const auto res = max_total_rate(cfg, target);
                std::printf("%-14s %.9e\n", "total_rate", res.total_rate);
                print_vector("powers", res.allocation.powers);
                print_vector("rates", res.allocation.rates);
                std::printf("%-14s %.3e\n%-14s %d\n", "residual", res.residual, "iterations", res.iterations);
            }
        } else if (mc->parsed()) {
            const SweepConfig sc = mc_flags.resolve();
            const SystemConfig cfg = sc.system_at(snr_db);
            const auto res = solve_strategy(cfg, sc.rate_spec(), strategy_from(strategy), method_from(method));
            const double exact = system_outage_exact(cfg, res.allocation);
            const auto est = monte_carlo_outage(cfg, res.allocation, trials, sc.seed, sc.threads);
            const double z = est.std_error > 0.0 ? (est.p_out - exact) / est.std_error : 0.0;
            std::printf("%-14s %.6e\n%-14s %.6e\n%-14s %.6e\n%-14s %.3f\n%-14s %llu\n", "p_out_exact", exact,
                        "p_out_mc", est.p_out, "std_error", est.std_error, "z", z, "trials",
                        static_cast<unsigned long long>(est.trials));
            std::printf("%-14s %s\n", "agreement", std::abs(z) <= 3.0 ? "within 3 stderr" : "outside 3 stderr");
        }
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kConfigError;
    } catch (const SolverFailure& e) {
        std::fprintf(stderr, "solver failure: %s\n", e.what());
        return kSolverFailure;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kConfigError;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "solver failure: %s\n", e.what());
        return kSolverFailure;
    }
    return 0;
}
