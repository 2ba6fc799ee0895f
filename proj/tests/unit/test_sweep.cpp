// SPDX-License-Identifier: Apache-2.0

#include "vblast/sweep.hpp"
#include "vblast/sweep_config.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

using namespace vblast;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

int error_line(std::string_view text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.line();
    }
    return -1;
}

}  // namespace

TEST(SweepConfig, Defaults) {
    const auto cfg = parse_config("# nothing but a comment\n\n");
    EXPECT_EQ(cfg.n, 2);
    EXPECT_EQ(cfg.m, 2);
    EXPECT_EQ(cfg.gap_db, 0.0);
    EXPECT_EQ(cfg.mc_trials, 0);
    EXPECT_EQ(cfg.strategies.size(), 4u);
    EXPECT_EQ(cfg.snr_points_db().size(), 21u);
}

TEST(SweepConfig, ParsesEveryKey) {
    const auto cfg = parse_config(
        "n = 4\n m=3 \nsnr_db_start = 10\nsnr_db_stop = 20 # inclusive\nsnr_db_step = 2.5\n"
        "gap_db = 3\nrate_mode = bits\nrate_value = 2\nstrategies = apra, apa\nmc_trials = 1000\n"
        "seed = 18446744073709551615\nthreads = 3\n");
    EXPECT_EQ(cfg.n, 4);
    EXPECT_EQ(cfg.m, 3);
    EXPECT_EQ(cfg.snr_points_db(), (std::vector<double>{10, 12.5, 15, 17.5, 20}));
    EXPECT_EQ(cfg.strategies, (std::vector<Strategy>{Strategy::apra, Strategy::apa}));
    EXPECT_EQ(cfg.mc_trials, 1000);
    EXPECT_EQ(cfg.seed, 18446744073709551615ull);
    EXPECT_EQ(cfg.threads, 3u);
    EXPECT_NEAR(cfg.rate_spec().per_stream_rate(cfg.system_at(10)), 2 * std::log(2.0), 1e-15);
}

TEST(SweepConfig, SnrGap) {
    const auto cfg = parse_config("gap_db = 3\n");
    const auto sys = cfg.system_at(20);
    EXPECT_NEAR(sys.snr(), 100.0 / std::pow(10.0, 0.3), 1e-12);
    EXPECT_NEAR(sys.snr(), 50.11872336, 1e-7);
}

TEST(SweepConfig, Rejections) {
    EXPECT_EQ(error_line("n = 2\nsnr_db_step = -1\n"), 0);
    EXPECT_EQ(error_line("n = 2\nbogus = 1\n"), 2);
    EXPECT_EQ(error_line("m = 2\nm = 2\n"), 2);
    EXPECT_EQ(error_line("\n\nn = two\n"), 3);
    EXPECT_EQ(error_line("rate_mode = watts\n"), 1);
    EXPECT_EQ(error_line("strategies = apa, magic\n"), 1);
    EXPECT_EQ(error_line("n\n"), 1);
    EXPECT_EQ(error_line("n =\n"), 1);
    EXPECT_EQ(error_line("n = 1\nm = 2\n"), 0);
    EXPECT_EQ(error_line("rate_value = 3\n"), 0);
    EXPECT_EQ(error_line("gap_db = -1\n"), 0);
    EXPECT_EQ(error_line("snr_db_start = 10\nsnr_db_stop = 0\n"), 0);
    EXPECT_EQ(error_line("snr_db_step = 0\n"), 0);
    EXPECT_EQ(error_line("mc_trials = -5\n"), 0);
    try {
        parse_config("n = 2\nbogus = 1\n");
    } catch (const ConfigError& e) {
        EXPECT_EQ(e.field(), "bogus");
        EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
    }
}

TEST(SweepConfig, LoadsFromFile) {
    const auto path = std::filesystem::temp_directory_path() / "vblast_sweep_test.cfg";
    std::ofstream(path) << "m = 1\nn = 3\n";
    EXPECT_EQ(load_config(path).n, 3);
    std::filesystem::remove(path);
    EXPECT_THROW(load_config(path), ConfigError);
}

TEST(SweepConfig, ShippedRecipesParse) {
    int count = 0;
    for (const auto& entry : std::filesystem::directory_iterator(VBLAST_CONFIG_DIR)) {
        if (entry.path().extension() != ".cfg") continue;
        EXPECT_NO_THROW(load_config(entry.path())) << entry.path();
        ++count;
    }
    EXPECT_GE(count, 1);
}

TEST(RunSweep, OrderingAcrossStrategies) {
    const auto rows = run_sweep(parse_config("snr_db_step = 4\nrate_value = 1\nthreads = 2\n"));
    ASSERT_EQ(rows.size(), 11u * 4);
    for (std::size_t j = 0; j < rows.size(); j += 4) {
        ASSERT_EQ(rows[j].strategy, Strategy::uniform);
        ASSERT_EQ(rows[j + 3].strategy, Strategy::apra);
        EXPECT_EQ(rows[j].snr_db, rows[j + 3].snr_db);
        const double uniform = rows[j].p_out_exact, apa = rows[j + 1].p_out_exact;
        const double ara = rows[j + 2].p_out_exact, apra = rows[j + 3].p_out_exact;
        EXPECT_LE(apra, ara * (1 + 1e-12)) << rows[j].snr_db;
        EXPECT_LE(ara, apa * (1 + 1e-12)) << rows[j].snr_db;
        EXPECT_LE(apa, uniform * (1 + 1e-12)) << rows[j].snr_db;
        for (std::size_t s = 0; s < 4; ++s) {
            EXPECT_TRUE(rows[j + s].error.empty()) << rows[j + s].error;
            EXPECT_GE(rows[j + s].p_out_exact, 0.0);
            EXPECT_LE(rows[j + s].p_out_exact, 1.0);
        }
        EXPECT_FALSE(std::isnan(rows[j + 1].snr_gain_db));
        EXPECT_TRUE(std::isnan(rows[j + 2].snr_gain_db));
    }
    for (std::size_t j = 4; j < rows.size(); ++j) EXPECT_LT(rows[j - 4].snr_db, rows[j].snr_db);
}

TEST(RunSweep, DeterministicAcrossThreadCounts) {
    auto cfg = parse_config("n = 3\nsnr_db_start = 10\nsnr_db_stop = 20\nsnr_db_step = 5\nmc_trials = 5000\nseed = 7\n");
    cfg.threads = 1;
    const auto one = to_csv(run_sweep(cfg), cfg.m);
    cfg.threads = 3;
    const auto three = to_csv(run_sweep(cfg), cfg.m);
    EXPECT_EQ(one, three);
    cfg.seed = 8;
    EXPECT_NE(one, to_csv(run_sweep(cfg), cfg.m));
}

TEST(RunSweep, ErrorsStayInTheRow) {
    // The closed-form APA allocation turns negative far below its validity region.
    const auto rows = run_sweep(parse_config("snr_db_start = -10\nsnr_db_stop = 30\nsnr_db_step = 40\n"
                                             "rate_mode = nats\nrate_value = 4\nstrategies = apa, uniform\n"));
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_NE(rows[0].error.find("closed form"), std::string::npos);
    EXPECT_TRUE(std::isnan(rows[0].p_out_closed_form));
    EXPECT_GT(rows[0].p_out_exact, 0.0);
    for (std::size_t j = 1; j < 4; ++j) EXPECT_TRUE(rows[j].error.empty()) << j;
}

TEST(RunSweep, RunningDiversityOfUniformCurve) {
    const auto rows = run_sweep(parse_config("snr_db_start = 40\nsnr_db_stop = 60\nsnr_db_step = 5\n"
                                             "rate_mode = nats\nrate_value = 2\nstrategies = uniform\n"));
    for (const auto& r : rows) EXPECT_NEAR(r.diversity_running, 1.0, 0.02) << r.snr_db;
}

TEST(Csv, HeaderAndQuoting) {
    SweepRow row;
    row.snr_db = 12.5;
    row.strategy = Strategy::ara;
    row.p_out_exact = 0.001;
    row.p_out_closed_form = 0.0011;
    row.p_out_approx = 0.00105;
    row.p_out_mc = kNaN;
    row.mc_stderr = kNaN;
    row.active_count = 2;
    row.powers = {1, 1};
    row.rates = {0.5, 1.5};
    row.snr_gain_db = kNaN;
    row.diversity_running = 0.75;
    row.error = "closed form: \"quoted\", with comma";
    const auto text = to_csv({row}, 2);
    EXPECT_EQ(text.substr(0, text.find("\r\n")),
              "snr_db,strategy,p_out_exact,p_out_closed_form,p_out_approx,p_out_mc,mc_stderr,m_A,alpha_1,alpha_2,"
              "rate_1,rate_2,snr_gain_db,diversity_running,error");
    EXPECT_NE(text.find("1.250000e+01,ara,1.000000e-03,1.100000e-03,1.050000e-03,,,2,"), std::string::npos);
    EXPECT_NE(text.find("\"closed form: \"\"quoted\"\", with comma\"\r\n"), std::string::npos);
    const auto back = from_csv(text);
    ASSERT_EQ(back.size(), 1u);
    EXPECT_EQ(back[0], row);
}

TEST(Csv, RoundTripOfSweep) {
    const auto rows = run_sweep(parse_config("snr_db_step = 10\nmc_trials = 2000\n"));
    const auto text = to_csv(rows, 2);
    const auto back = from_csv(text);
    ASSERT_EQ(back.size(), rows.size());
    // Reals carry 7 significant digits in the file.
    auto close = [](double a, double b) {
        return (std::isnan(a) && std::isnan(b)) || std::abs(a - b) <= 5e-7 * std::abs(a) + 1e-300;
    };
    for (std::size_t j = 0; j < rows.size(); ++j) {
        EXPECT_EQ(back[j].strategy, rows[j].strategy);
        EXPECT_EQ(back[j].active_count, rows[j].active_count);
        EXPECT_EQ(back[j].error, rows[j].error);
        EXPECT_TRUE(close(back[j].p_out_exact, rows[j].p_out_exact));
        EXPECT_TRUE(close(back[j].p_out_mc, rows[j].p_out_mc));
        EXPECT_TRUE(close(back[j].snr_gain_db, rows[j].snr_gain_db));
        for (std::size_t i = 0; i < 2; ++i) {
            EXPECT_TRUE(close(back[j].powers[i], rows[j].powers[i]));
            EXPECT_TRUE(close(back[j].rates[i], rows[j].rates[i]));
        }
    }
    // Once at file precision the round trip is exact.
    EXPECT_EQ(from_csv(to_csv(back, 2)), back);
    EXPECT_EQ(to_csv(back, 2), text);
}

TEST(Csv, RejectsMalformedInput) {
    EXPECT_THROW(from_csv(""), std::runtime_error);
    EXPECT_THROW(from_csv("a,b\r\n"), std::runtime_error);
    const std::string header =
        "snr_db,strategy,p_out_exact,p_out_closed_form,p_out_approx,p_out_mc,mc_stderr,m_A,alpha_1,rate_1,"
        "snr_gain_db,diversity_running,error\r\n";
    EXPECT_EQ(from_csv(header).size(), 0u);
    EXPECT_THROW(from_csv(header + "1,apa\r\n"), std::runtime_error);
    EXPECT_THROW(from_csv(header + "1,magic,,,,,,1,1,1,,,\r\n"), std::runtime_error);
    EXPECT_THROW(from_csv(header + "1x,apa,,,,,,1,1,1,,,\r\n"), std::runtime_error);
    EXPECT_THROW(from_csv(header + "1,apa,,,,,,1,1,1,,,\"open\r\n"), std::runtime_error);
}
