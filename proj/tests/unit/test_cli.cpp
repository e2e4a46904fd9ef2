// Copyright 2026 The critsense Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "critsense/error.hpp"
#include "critsense/reference_data.hpp"
#include "critsense/units.hpp"
#include "critsense_cli/config.hpp"
#include "critsense_cli/runner.hpp"

namespace critsense::cli {
namespace {

namespace fs = std::filesystem;

struct Failure {
    ErrorCode code = ErrorCode::InvalidArgument;
    int line = -1;
};

Failure parse_failure(std::string_view text) {
    try {
        (void)parse_config(text);
    } catch (const Error& e) {
        return {e.code(), e.line()};
    }
    ADD_FAILURE() << "config parsed:\n" << text;
    return {};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("critsense_cli_test_" + name);
    fs::remove_all(dir);
    return dir;
}

std::vector<std::string> csv_lines(const fs::path& p) {
    std::vector<std::string> lines;
    std::istringstream in(slurp(p));
    for (std::string line; std::getline(in, line);) {
        lines.push_back(line);
    }
    return lines;
}

RunResult run_in(RunConfig cfg, const fs::path& dir) {
    cfg.output_dir = dir;
    std::ostringstream log;
    return run(cfg, log);
}

constexpr std::string_view kToySweep = R"(command = sweep
scaling = I
L = 1
G = 3khz
U = -0.5khz
kappa = 1khz
delta_lo = -6khz
delta_hi = 2khz
delta_step = 0.5khz
max_dim = 60
)";

TEST(ParseConfig, PresetFillsOperatingPoint) {
    const RunConfig cfg = parse_config("command = sweep\npreset = table1_row3\n");
    EXPECT_EQ(cfg.command, Command::Sweep);
    const auto& op = preset("table1_row3");
    EXPECT_DOUBLE_EQ(cfg.real("G"), op.G);
    EXPECT_DOUBLE_EQ(cfg.real("U"), op.U * op.L);
    EXPECT_DOUBLE_EQ(cfg.real("kappa"), op.kappa);
    EXPECT_DOUBLE_EQ(cfg.real("L"), 1.0);
    EXPECT_DOUBLE_EQ(cfg.real("delta_lo"), op.tilde_delta_lo());
    EXPECT_EQ(cfg.text("scaling"), "I");
    EXPECT_EQ(cfg.params.at("G").line, 0);
}

TEST(ParseConfig, ExplicitKeysOverridePresetInAnyOrder) {
    for (const std::string text : {"command = sweep\nkappa = 72khz\npreset = table1_row3\n",
                                   "command = sweep\npreset = table1_row3\nkappa = 72khz\n"}) {
        const RunConfig cfg = parse_config(text);
        EXPECT_DOUBLE_EQ(cfg.real("kappa"), 2.0 * std::numbers::pi * 72e3);
        EXPECT_GT(cfg.params.at("kappa").line, 0);
    }
}

TEST(ParseConfig, UnitRule) {
    EXPECT_DOUBLE_EQ(std::get<double>(parse_value("72khz", ValueKind::Frequency, 1)), units::khz(72.0));
    EXPECT_DOUBLE_EQ(std::get<double>(parse_value("4.5 GHz", ValueKind::Frequency, 1)), units::ghz(4.5));
    EXPECT_DOUBLE_EQ(std::get<double>(parse_value("-9.14khz", ValueKind::Frequency, 1)), units::khz(-9.14));
    EXPECT_DOUBLE_EQ(std::get<double>(parse_value("3us", ValueKind::Time, 1)), 3e-6);
    EXPECT_DOUBLE_EQ(std::get<double>(parse_value("20ns", ValueKind::Time, 1)), 20e-9);
    const auto list = std::get<std::vector<double>>(parse_value("0.66, 1, 1.64", ValueKind::RealList, 1));
    EXPECT_EQ(list, (std::vector<double>{0.66, 1.0, 1.64}));
    for (const auto* bad : {"72", "72 furlongs", "khz", "1e400khz"}) {
        try {
            (void)parse_value(bad, ValueKind::Frequency, 7);
            ADD_FAILURE() << bad;
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), ErrorCode::ParseError) << bad;
            EXPECT_EQ(e.line(), 7);
        }
    }
}

TEST(ParseConfig, FailClosed) {
    Failure f = parse_failure("command = sweep\nkapa = 1\n");
    EXPECT_EQ(f.code, ErrorCode::UnknownKey);
    EXPECT_EQ(f.line, 2);
    // Known key, wrong command.
    f = parse_failure("command = sweep\npreset = table1_row3\nalpha2 = 3\n");
    EXPECT_EQ(f.code, ErrorCode::UnknownKey);
    EXPECT_EQ(f.line, 3);
    f = parse_failure("command = sweep\n# c\nG = 3khz\nG = 4khz\n");
    EXPECT_EQ(f.code, ErrorCode::ParseError);
    EXPECT_EQ(f.line, 4);
    f = parse_failure("command = sweep\njust text\n");
    EXPECT_EQ(f.code, ErrorCode::ParseError);
    EXPECT_EQ(f.line, 2);
    f = parse_failure("command = sweep\nG = 3khz\n");
    EXPECT_EQ(f.code, ErrorCode::MissingKey);
    f = parse_failure("command = teleport\n");
    EXPECT_EQ(f.code, ErrorCode::ParseError);
    EXPECT_EQ(f.line, 1);
    f = parse_failure("command = sweep\npreset = table9_row1\n");
    EXPECT_EQ(f.code, ErrorCode::UnknownKey);
    EXPECT_EQ(f.line, 2);
    f = parse_failure("command = sweep\npreset = table1_row3\nerror_form = median\n");
    EXPECT_EQ(f.line, 3);
}

TEST(ParseConfig, CommandArgumentMustAgree) {
    EXPECT_EQ(parse_config("preset = table1_row3\n", Command::Sweep).command, Command::Sweep);
    EXPECT_THROW((void)parse_config("command = sweep\npreset = table1_row3\n", Command::Scaling), Error);
}

TEST(ParseConfig, DescribeIsStable) {
    const RunConfig a = parse_config("command = sweep\npreset = table1_row3\nkappa = 72khz\n");
    const RunConfig b = parse_config("command = sweep\nkappa = 72khz\npreset = table1_row3\n");
    EXPECT_EQ(describe(a), describe(b));
    EXPECT_NE(describe(a).find("kappa = "), std::string::npos);
}

TEST(Run, ClassicalMaximumAtResonance) {
    const fs::path dir = fresh_dir("classical");
    const RunConfig cfg = parse_config(
        "command = classical\nkappa_ext = 100khz\nalpha2 = 10\ndelta_p_lo = -500khz\ndelta_p_hi = 500khz\n"
        "delta_p_step = 1khz\nsvg = true\n");
    const RunResult r = run_in(cfg, dir);
    EXPECT_EQ(r.exit_code, kExitSuccess);
    const auto lines = csv_lines(dir / "classical.csv");
    ASSERT_EQ(lines.size(), 1002u);
    EXPECT_EQ(lines[0], "delta_p_hz,precision,precision_timed,homodyne_slope");
    double best = -1.0;
    std::string best_delta;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto c1 = lines[i].find(',');
        const double p = std::stod(lines[i].substr(c1 + 1));
        if (p > best) {
            best = p;
            best_delta = lines[i].substr(0, c1);
        }
    }
    EXPECT_EQ(std::stod(best_delta), 0.0);
    EXPECT_TRUE(fs::exists(dir / "classical.svg"));
    EXPECT_TRUE(fs::exists(dir / "manifest.txt"));
    EXPECT_EQ(csv_lines(dir / "errors.csv").size(), 1u);
}

TEST(Run, SweepByteIdenticalAcrossRunsAndThreads) {
    RunConfig cfg = parse_config(kToySweep);
    cfg.seed = 42;
    cfg.threads = 1;
    const fs::path a = fresh_dir("det_a");
    const fs::path b = fresh_dir("det_b");
    const fs::path c = fresh_dir("det_c");
    ASSERT_EQ(run_in(cfg, a).exit_code, kExitSuccess);
    ASSERT_EQ(run_in(cfg, b).exit_code, kExitSuccess);
    cfg.threads = 3;
    ASSERT_EQ(run_in(cfg, c).exit_code, kExitSuccess);
    const std::string ref = slurp(a / "curve.csv");
    EXPECT_GT(csv_lines(a / "curve.csv").size(), 10u);
    EXPECT_EQ(ref, slurp(b / "curve.csv"));
    EXPECT_EQ(ref, slurp(c / "curve.csv"));
    EXPECT_EQ(slurp(a / "errors.csv"), slurp(c / "errors.csv"));
}

TEST(Run, TracesDeterministicInSeed) {
    const std::string text =
        "command = traces\nscaling = I\nL = 1\nG = 3khz\nU = -0.5khz\nkappa = 1khz\ndelta = -1khz\n"
        "traces = 50\ndelta_t = 50us\ntotal_time = 2ms\nj_ss_time = 0.5ms\n";
    RunConfig cfg = parse_config(text);
    cfg.seed = 7;
    const fs::path a = fresh_dir("tr_a");
    const fs::path b = fresh_dir("tr_b");
    const fs::path c = fresh_dir("tr_c");
    ASSERT_EQ(run_in(cfg, a).exit_code, kExitSuccess);
    cfg.threads = 2;
    ASSERT_EQ(run_in(cfg, b).exit_code, kExitSuccess);
    EXPECT_EQ(slurp(a / "traces.csv"), slurp(b / "traces.csv"));
    EXPECT_EQ(slurp(a / "moments.csv"), slurp(b / "moments.csv"));
    cfg.seed = 8;
    ASSERT_EQ(run_in(cfg, c).exit_code, kExitSuccess);
    EXPECT_NE(slurp(a / "traces.csv"), slurp(c / "traces.csv"));
}

TEST(Run, PointFailuresGoToErrorsCsv) {
    RunConfig cfg = parse_config(std::string(kToySweep) + "min_dim = 8\n");
    cfg.params.at("max_dim").value = std::int64_t{10};
    const fs::path dir = fresh_dir("errors");
    const RunResult r = run_in(cfg, dir);
    EXPECT_EQ(r.exit_code, kExitDomainError);
    EXPECT_GT(r.point_errors, 0u);
    const auto lines = csv_lines(dir / "errors.csv");
    ASSERT_EQ(lines.size(), r.point_errors + 1);
    EXPECT_EQ(lines[0], "context,index,delta_hz,code,message");
    EXPECT_NE(lines[1].find("TruncationLeak"), std::string::npos);
    // The curve is still written, with NaN at failed points.
    EXPECT_NE(slurp(dir / "curve.csv").find("nan"), std::string::npos);
}

TEST(Run, ScalingWritesCurvePerSizeAndBetaTable) {
    RunConfig cfg = parse_config(
        "command = scaling\npreset = table1_row3\nL_values = 0.66, 1, 1.64\ndelta_step = 25khz\n");
    const fs::path dir = fresh_dir("scaling");
    const RunResult r = run_in(cfg, dir);
    EXPECT_EQ(r.exit_code, kExitSuccess);
    for (const auto* name : {"curve_L0.66.csv", "curve_L1.csv", "curve_L1.64.csv"}) {
        EXPECT_TRUE(fs::exists(dir / name)) << name;
    }
    const auto beta = csv_lines(dir / "beta.csv");
    ASSERT_EQ(beta.size(), 4u);
    EXPECT_EQ(beta[0], "L,p_max,delta_max_hz,delta_c_hz");
    const auto fit = csv_lines(dir / "beta_fit.csv");
    ASSERT_EQ(fit.size(), 2u);
    const double b = std::stod(fit[1]);
    EXPECT_TRUE(std::isfinite(b));
    EXPECT_GT(b, 0.0);
}

TEST(DeriveSeed, DistinctStreams) {
    EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
    EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
    EXPECT_EQ(derive_seed(5, 3), derive_seed(5, 3));
}

TEST(SvgPlot, SelfContained) {
    const std::string svg = svg_plot("t", "x", {{"a", {0.0, 1.0, 2.0}, {1.0, NAN, 3.0}}});
    EXPECT_EQ(svg.rfind("<svg", 0), 0u);
    EXPECT_NE(svg.find("</svg>"), std::string::npos);
}

}  // namespace
}  // namespace critsense::cli
