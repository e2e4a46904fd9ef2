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
#include <vector>

#include <gtest/gtest.h>

#include "critsense/error.hpp"
#include "critsense/metrology.hpp"
#include "critsense/units.hpp"

namespace critsense {
namespace {

using units::khz;
using units::to_khz;

ReducedParams fig2(double L, Scaling s = Scaling::I) {
    return {0.0, khz(300.0), khz(-9.14), khz(72.0), L, s};
}

// Dimensionless toy point with few photons; keeps sweeps in the millisecond range.
ReducedParams toy() { return {0.0, 3.0, -0.5, 1.0, 1.0, Scaling::I}; }

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!(a[i] == b[i] || (std::isnan(a[i]) && std::isnan(b[i])))) {
            return false;
        }
    }
    return true;
}

TEST(ToPhysical, IdentityAtUnitL) {
    for (const Scaling s : {Scaling::I, Scaling::II}) {
        ReducedParams rp = fig2(1.0, s);
        rp.tilde_delta = khz(-50.0);
        const PhysicalParams p = to_physical(rp);
        EXPECT_DOUBLE_EQ(p.delta, rp.tilde_delta);
        EXPECT_DOUBLE_EQ(p.G, rp.tilde_G);
        EXPECT_DOUBLE_EQ(p.U, rp.tilde_U);
        EXPECT_DOUBLE_EQ(p.kappa, rp.tilde_kappa);
        EXPECT_DOUBLE_EQ(p.kappa_ext, 0.5 * rp.tilde_kappa);
    }
}

TEST(ToPhysical, TableValues) {
    // The bundled table1 row lists U = -5.58 kHz at L = 1.64; -9.14/1.64 rounds to -5.57.
    EXPECT_NEAR(to_khz(to_physical(fig2(1.64)).U), -5.573, 1e-3);
    EXPECT_NEAR(to_khz(to_physical(fig2(1.64)).U), -5.58, 0.01);
    EXPECT_NEAR(to_khz(to_physical(fig2(4.26, Scaling::II)).G), 1278.0, 1e-9);
    EXPECT_THROW((void)to_physical(fig2(0.0)), Error);
}

TEST(CriticalDetuning, Examples) {
    EXPECT_NEAR(to_khz(critical_detuning(khz(300.0), khz(72.0))), -291.23, 0.01);
    EXPECT_THROW((void)critical_detuning(khz(72.0), khz(72.0)), Error);
    EXPECT_DOUBLE_EQ(critical_detuning(2.0, 0.0), -2.0);
}

TEST(FitBeta, PowerLaws) {
    const std::vector<double> l = {0.66, 0.8, 1.0, 1.31, 1.64};
    std::vector<double> quad;
    std::vector<double> lin;
    for (double x : l) {
        quad.push_back(3.0 * x * x);
        lin.push_back(5.0 * x);
    }
    const BetaFit q = fit_beta(l, quad);
    EXPECT_NEAR(q.beta, 2.0, 1e-12);
    EXPECT_NEAR(q.std_error, 0.0, 1e-10);
    EXPECT_NEAR(fit_beta(l, lin).beta, 1.0, 1e-12);
    const std::vector<double> two = {1.0, 2.0};
    EXPECT_THROW((void)fit_beta(two, two), Error);
    const std::vector<double> flat = {1.0, 1.0, 1.0};
    EXPECT_THROW((void)fit_beta(flat, lin), Error);
}

TEST(Grid, UniformSpacing) {
    const auto g = uniform_grid(-1.0, 1.0, 0.5);
    ASSERT_EQ(g.size(), 5u);
    EXPECT_DOUBLE_EQ(g.back(), 1.0);
    EXPECT_THROW((void)uniform_grid(0.0, 1.0, 0.0), Error);
}

TEST(AssembleCurve, SyntheticArgmaxAndGap) {
    // n = delta^3 shape: precision grows with slope, so the last pair wins.
    const std::vector<double> grid = {0.0, 1.0, 2.0, 3.0, 4.0};
    std::vector<ObservableRecord> obs;
    for (double d : grid) {
        obs.push_back({d * d, 0.0, 1.0});
    }
    const std::vector<double> s(grid.size(), 1.0);
    MeasurementModel model = MeasurementModel::ideal(1.0);
    const PrecisionCurve c = assemble_curve(grid, obs, s, model, 0.0, 1e5, ErrorBarForm::AsPrinted);
    EXPECT_DOUBLE_EQ(c.d2n[2], 2.0);
    EXPECT_TRUE(std::isnan(c.d2n[0]));
    EXPECT_EQ(c.argmax(), 3u);
    EXPECT_DOUBLE_EQ(c.precision[4], c.precision[3]);
    EXPECT_DOUBLE_EQ(c.delta_max, 3.0);

    const std::vector<PrecisionCurve> curves = {c};
    const std::vector<ReducedParams> rps = {toy()};
    const auto gaps = delta_max_gap(curves, rps);
    ASSERT_EQ(gaps.size(), 1u);
    EXPECT_DOUBLE_EQ(gaps[0].tilde_delta_max, 3.0);
    EXPECT_DOUBLE_EQ(gaps[0].tilde_delta_c, -std::sqrt(8.0));
}

TEST(Sweep, VacuumPhaseCarriesNoSignal) {
    const MeasurementModel model = MeasurementModel::ideal(khz(36.0));
    const auto far = uniform_grid(khz(-2000.0), khz(-1900.0), khz(20.0));
    const auto near = uniform_grid(khz(-260.0), khz(-200.0), khz(20.0));
    const PrecisionCurve c_far = sweep(fig2(1.0), far, model);
    const PrecisionCurve c_near = sweep(fig2(1.0), near, model);
    for (double n : c_far.n_mean) {
        EXPECT_LT(n, 0.02);
    }
    EXPECT_LT(c_far.p_max, 1e-3 * c_near.p_max);
}

TEST(Sweep, ArgmaxWithinOneStepOfFineGrid) {
    const MeasurementModel model = MeasurementModel::ideal(0.5);
    const auto coarse = uniform_grid(-4.0, 1.0, 0.25);
    const auto fine = uniform_grid(-4.0, 1.0, 0.0625);
    const PrecisionCurve c = sweep(toy(), coarse, model);
    const PrecisionCurve f = sweep(toy(), fine, model);
    EXPECT_LE(std::abs(c.delta_max - f.delta_max), 0.25 + 1e-12);
}

TEST(Sweep, GainInvariance) {
    MeasurementModel model = MeasurementModel::ideal(0.5);
    const auto grid = uniform_grid(-3.5, 0.0, 0.25);
    const PrecisionCurve a = sweep(toy(), grid, model);
    model.gain = 3.7;
    const PrecisionCurve b = sweep(toy(), grid, model);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        EXPECT_NEAR(b.precision[i], a.precision[i], 1e-12 * a.precision[i]);
    }
}

TEST(Sweep, ThreadCountDoesNotChangeResults) {
    const MeasurementModel model = MeasurementModel::experiment(0.5);
    const auto grid = uniform_grid(-3.5, 0.0, 0.25);
    SweepOptions one;
    one.threads = 1;
    SweepOptions three;
    three.threads = 3;
    const PrecisionCurve a = sweep(toy(), grid, model, one);
    const PrecisionCurve b = sweep(toy(), grid, model, three);
    EXPECT_TRUE(same_bits(a.n_mean, b.n_mean));
    EXPECT_TRUE(same_bits(a.precision, b.precision));
    EXPECT_TRUE(same_bits(a.precision_err, b.precision_err));
}

TEST(Sweep, FailedPointsAreMissingNotInvented) {
    const MeasurementModel model = MeasurementModel::ideal(khz(36.0));
    SweepOptions opts;
    opts.min_dim = 10;
    opts.max_dim = 20;
    const auto grid = uniform_grid(khz(-400.0), khz(-100.0), khz(50.0));
    const PrecisionCurve c = sweep(fig2(1.0), grid, model, opts);
    ASSERT_FALSE(c.failures.empty());
    for (const auto& f : c.failures) {
        EXPECT_TRUE(std::isnan(c.n_mean[f.index]));
        EXPECT_EQ(f.code, "TruncationLeak");
    }
    EXPECT_FALSE(std::isnan(c.n_mean.front()));
}

TEST(Sweep, ScalingsAgreeAtEqualL) {
    const MeasurementModel m1 = MeasurementModel::ideal(to_physical(fig2(1.3)).kappa_ext);
    const MeasurementModel m2 = MeasurementModel::ideal(to_physical(fig2(1.3, Scaling::II)).kappa_ext);
    const auto grid = uniform_grid(khz(-300.0), khz(-150.0), khz(25.0));
    const PrecisionCurve a = sweep(fig2(1.3), grid, m1);
    const PrecisionCurve b = sweep(fig2(1.3, Scaling::II), grid, m2);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        EXPECT_NEAR(b.n_mean[i], a.n_mean[i], 0.02 * a.n_mean[i]);
        EXPECT_NEAR(b.precision[i], a.precision[i], 1e-6 * a.precision[i]);
    }
}

TEST(Sweep, RejectsBadGrids) {
    const MeasurementModel model = MeasurementModel::ideal(0.5);
    const std::vector<double> short_grid = {0.0, 1.0};
    const std::vector<double> uneven = {0.0, 1.0, 3.0};
    EXPECT_THROW((void)sweep(toy(), short_grid, model), Error);
    EXPECT_THROW((void)sweep(toy(), uneven, model), Error);
}

}  // namespace
}  // namespace critsense
