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

#include "critsense/dynamics.hpp"
#include "critsense/error.hpp"
#include "critsense/linear_fit.hpp"
#include "critsense/measurement.hpp"
#include "critsense/units.hpp"
#include "oracles/dense_lindblad.hpp"

namespace critsense {
namespace {

constexpr double kKappaExt = units::khz(36.0);

struct PooledStats {
    double mean;
    double var;
    double se_mean;
    double se_var;
};

PooledStats pooled(const TraceEnsemble& te) {
    double s1 = 0;
    double s2 = 0;
    const double count = static_cast<double>(te.m()) * te.j();
    for (int r = 0; r < te.m(); ++r) {
        for (int c = 0; c < te.j(); ++c) {
            const double n = te.i_samples(r, c) * te.i_samples(r, c) + te.q_samples(r, c) * te.q_samples(r, c);
            s1 += n;
        }
    }
    const double mean = s1 / count;
    double m4 = 0;
    for (int r = 0; r < te.m(); ++r) {
        for (int c = 0; c < te.j(); ++c) {
            const double d =
                te.i_samples(r, c) * te.i_samples(r, c) + te.q_samples(r, c) * te.q_samples(r, c) - mean;
            s2 += d * d;
            m4 += d * d * d * d;
        }
    }
    const double var = s2 / count;
    return {mean, var, std::sqrt(var / count), std::sqrt((m4 / count - var * var) / count)};
}

MeasurementModel single_bin(double sigma2 = 0.25) {
    MeasurementModel m = MeasurementModel::experiment(kKappaExt, sigma2);
    m.total_time = m.delta_t;
    m.j_ss_time = 0.0;
    return m;
}

TEST(MeasurementModel, ExperimentDefaults) {
    const MeasurementModel m = MeasurementModel::experiment(kKappaExt);
    EXPECT_EQ(m.bins(), 46);
    EXPECT_EQ(m.first_steady_bin(), 10);
    EXPECT_EQ(m.steady_bins(), 36);
    EXPECT_NEAR(m.amplifier_photons(), 0.5 / (kKappaExt * 1.5e-6), 1e-12);
}

TEST(MeasurementModel, Validation) {
    EXPECT_THROW(MeasurementModel::experiment(kKappaExt, 0.2).validate(), Error);
    MeasurementModel m = MeasurementModel::experiment(kKappaExt);
    m.j_ss_time = m.total_time;
    EXPECT_THROW(m.validate(), Error);
}

TEST(OutputMoments, VacuumThroughAmplifier) {
    // p = dp = 0 and sigma2 = 1/4: <N> = gain/2 and dN^2 = gain^2 (4/16 - 1/4) = 0.
    MeasurementModel model = MeasurementModel::experiment(kKappaExt);
    model.gain = 3.0;
    const PowerMoments pm = output_moments({0.0, 0.0, 0.0}, 1.0, model);
    EXPECT_DOUBLE_EQ(pm.n_out_mean, 1.5);
    EXPECT_NEAR(pm.n_out_var, 0.0, 1e-15);
}

TEST(OutputMoments, NoiseFreeAndAmplifiedForms) {
    const ObservableRecord obs{10.0, 0.0, 12.0};
    MeasurementModel model = MeasurementModel::experiment(kKappaExt, 0.75);
    model.gain = 2.0;
    const double p = kKappaExt * model.delta_t * 10.0;
    const double dp2 = 0.5 * std::pow(kKappaExt * model.delta_t, 2) * 12.0;
    const PowerMoments amp = output_moments(obs, 0.5, model);
    EXPECT_NEAR(amp.n_out_mean, 2.0 * (p + 1.5), 1e-12);
    EXPECT_NEAR(amp.n_out_var, 4.0 * (dp2 + 3.0 * p + 4.0 * 0.5625 - 0.25), 1e-10);
    model.noise_free = true;
    const PowerMoments clean = output_moments(obs, 0.5, model);
    EXPECT_NEAR(clean.n_out_mean, 2.0 * p, 1e-12);
    EXPECT_NEAR(clean.n_out_var, 4.0 * dp2, 1e-10);
    EXPECT_THROW((void)output_moments(obs, 0.0, model), Error);
}

TEST(OutputMoments, MoreAmplifierNoiseLowersPrecision) {
    const ObservableRecord a{5.0, 0.0, 6.0};
    const ObservableRecord b{5.5, 0.0, 6.4};
    double prev = INFINITY;
    for (const double s2 : {0.25, 0.5, 1.0, 2.0, 4.0}) {
        const MeasurementModel m = MeasurementModel::experiment(kKappaExt, s2);
        const double p = pair_precision(output_moments(a, 1.0, m), output_moments(b, 1.0, m), 1.0);
        EXPECT_LT(p, prev);
        prev = p;
    }
}

TEST(OutputMoments, GainCancelsInPrecision) {
    const ObservableRecord a{5.0, 0.0, 6.0};
    const ObservableRecord b{5.5, 0.0, 6.4};
    MeasurementModel m = MeasurementModel::experiment(kKappaExt, 0.6);
    const double p1 = pair_precision(output_moments(a, 1.0, m), output_moments(b, 1.0, m), 0.3);
    m.gain = 2.0;
    const double p2 = pair_precision(output_moments(a, 1.0, m), output_moments(b, 1.0, m), 0.3);
    EXPECT_NEAR(p2 / p1, 1.0, 1e-12);
}

TEST(Autocorrelation, ConstantCorrelationGivesOne) {
    const std::vector<double> c(65, 2.5);
    EXPECT_NEAR(autocorr_scale_from_samples(c, 1.0), 1.0, 1e-14);
}

TEST(Autocorrelation, ExponentialKernelAgainstClosedForm) {
    // C = e^{-tau/tc}: s = (2/dT^2) [tc dT - tc^2 (1 - e^{-dT/tc})].
    const double dt = 1.0;
    for (const double tc : {0.3, 0.01}) {
        const int n = 8192;
        std::vector<double> c(n + 1);
        for (int k = 0; k <= n; ++k) {
            c[k] = std::exp(-dt * k / n / tc);
        }
        const double exact = 2.0 / (dt * dt) * (tc * dt - tc * tc * (1.0 - std::exp(-dt / tc)));
        EXPECT_NEAR(autocorr_scale_from_samples(c, dt), exact, 1e-8 * exact + 1e-12);
        if (tc < 0.05) {
            EXPECT_NEAR(autocorr_scale_from_samples(c, dt), 2.0 * tc / dt, 0.02 * 2.0 * tc / dt);
        }
    }
}

TEST(Autocorrelation, SimpsonAgreesWithDenseTrapezoid) {
    const double dt = 2e-6;
    auto corr = [](double t) { return std::exp(-t / 7e-7) * std::cos(t / 5e-7); };
    std::vector<double> coarse(129);
    for (std::size_t k = 0; k < coarse.size(); ++k) {
        coarse[k] = corr(dt * k / 128.0);
    }
    const int dense_n = 400000;
    std::vector<double> integrand(dense_n + 1);
    for (int k = 0; k <= dense_n; ++k) {
        const double t = dt * k / dense_n;
        integrand[k] = (dt - t) * corr(t);
    }
    const double ref = 2.0 / (dt * dt) * oracle::trapezoid(integrand, dt / dense_n);
    EXPECT_NEAR(autocorr_scale_from_samples(coarse, dt), ref, 1e-6);
}

TEST(Autocorrelation, ShortBinsApproachOne) {
    const auto p = PhysicalParams::overcoupled(units::khz(-150.0), units::khz(300.0), units::khz(-9.14),
                                               units::khz(72.0));
    const DensityMatrix rho = steady_state_adaptive(p).rho;
    const Liouvillian liou = liouvillian(p, rho.space);
    MeasurementModel m = MeasurementModel::experiment(p.kappa_ext);
    m.delta_t = 1e-10;
    EXPECT_NEAR(autocorr_scale_factor(liou, rho, m, 16), 1.0, 1e-4);
    m.delta_t = 1.5e-6;
    const double s = autocorr_scale_factor(liou, rho, m, 64);
    EXPECT_GT(s, 0.0);
    EXPECT_LT(s, 1.0);
}

TEST(Synthesis, VacuumField) {
    const PowerMoments vac{0.5, 0.25};  // mu = 0, v = 1/4: Var(N) = 4 v^2
    const TraceEnsemble te = synthesize_traces(vac, single_bin(), 100000, 1);
    const PooledStats s = pooled(te);
    EXPECT_NEAR(s.mean, 0.5, 3.0 * s.se_mean);
    EXPECT_NEAR(s.var, 0.25, 3.0 * s.se_var);
}

TEST(Synthesis, RecoversTargetMoments) {
    const PowerMoments target{0.5, 3.0 / 16.0};
    const MeasurementModel model = MeasurementModel::experiment(kKappaExt);
    const TraceEnsemble te = synthesize_traces(target, model, 100000, 42);
    ASSERT_EQ(te.j(), 46);
    const PooledStats s = pooled(te);
    EXPECT_NEAR(s.mean, target.n_out_mean, 3.0 * s.se_mean);
    EXPECT_NEAR(s.var, target.n_out_var, 3.0 * s.se_var);
    for (const PowerMoments& pm : estimate_moments(te)) {
        EXPECT_NEAR(pm.n_out_mean, target.n_out_mean, 4.5 * std::sqrt(target.n_out_var / 1e5));
    }
}

TEST(Synthesis, DeterministicUnderSeed) {
    const PowerMoments target{3.0, 4.0};
    const MeasurementModel model = MeasurementModel::experiment(kKappaExt);
    const TraceEnsemble a = synthesize_traces(target, model, 50, 7);
    const TraceEnsemble b = synthesize_traces(target, model, 50, 7);
    const TraceEnsemble c = synthesize_traces(target, model, 50, 8);
    EXPECT_TRUE(a.i_samples == b.i_samples && a.q_samples == b.q_samples);
    EXPECT_FALSE(a.i_samples == c.i_samples);
    EXPECT_EQ(a.seed, std::optional<std::uint64_t>(7));
}

TEST(Synthesis, RejectsInfeasibleMoments) {
    try {
        (void)synthesize_traces({1.0, 2.0}, single_bin(), 10, 1);
        FAIL() << "expected MomentInfeasible";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::MomentInfeasible);
    }
}

TEST(Estimation, HandWorkedEnsembles) {
    TraceEnsemble te;
    te.model = single_bin();
    te.i_samples = Eigen::MatrixXd::Ones(4, 1);
    te.q_samples = Eigen::MatrixXd::Zero(4, 1);
    auto m = estimate_moments(te);
    EXPECT_DOUBLE_EQ(m[0].n_out_mean, 1.0);
    EXPECT_DOUBLE_EQ(m[0].n_out_var, 0.0);

    te.i_samples.resize(2, 1);
    te.q_samples = Eigen::MatrixXd::Zero(2, 1);
    te.i_samples << 0.0, std::sqrt(2.0);
    m = estimate_moments(te);
    EXPECT_NEAR(m[0].n_out_mean, 1.0, 1e-15);
    EXPECT_NEAR(m[0].n_out_std(), 1.0, 1e-15);
}

TEST(Estimation, UnitSignalToNoise) {
    const double s0 = 0.7;
    const double eps = 0.25;
    EXPECT_NEAR(pair_precision({0.0, s0 * s0}, {s0, s0 * s0}, eps), 1.0 / (eps * eps), 1e-12);
    EXPECT_EQ(pair_precision({1.0, 1.0}, {1.0, 2.0}, eps), 0.0);
}

TEST(Estimation, ErrorBarFormulas) {
    const PowerMoments a{10.0, 4.0};
    const PowerMoments b{11.0, 9.0};
    const double eps = 0.5;
    const double eps_err = 0.05;
    const double m = 1000.0;
    const double p = pair_precision(a, b, eps);
    EXPECT_NEAR(p, std::pow(2.0 * 1.0 / (5.0 * eps), 2), 1e-12);
    const double mean_term = (4.0 / m + 9.0 / m) / 1.0;
    const double std_num = 4.0 / (2 * m) + 9.0 / (2 * m);
    const double eps_term = eps_err * eps_err / (eps * eps);
    EXPECT_NEAR(pair_precision_error(a, b, eps, eps_err, m, m, ErrorBarForm::AsPrinted),
                2.0 * p * std::sqrt(mean_term + std_num / 1.0 + eps_term), 1e-12);
    EXPECT_NEAR(pair_precision_error(a, b, eps, eps_err, m, m, ErrorBarForm::SumOfDeviations),
                2.0 * p * std::sqrt(mean_term + std_num / 25.0 + eps_term), 1e-12);
}

TEST(Estimation, IdenticalEnsemblesFlagZeroSignal) {
    const TraceEnsemble te = synthesize_traces({2.0, 3.0}, MeasurementModel::experiment(kKappaExt), 100, 3);
    const PairPrecision pp = estimate_precision_pair(te, te, 0.1);
    EXPECT_TRUE(pp.any_zero_signal);
    EXPECT_EQ(pp.aggregate, 0.0);
    for (double p : pp.precision) {
        EXPECT_EQ(p, 0.0);
    }
}

TEST(Estimation, ShapeMismatchRejected) {
    const TraceEnsemble a = synthesize_traces({2.0, 3.0}, MeasurementModel::experiment(kKappaExt), 10, 3);
    const TraceEnsemble b = synthesize_traces({2.0, 3.0}, single_bin(), 10, 3);
    EXPECT_THROW((void)estimate_precision_pair(a, b, 0.1), Error);
    EXPECT_THROW((void)estimate_precision_pair(a, a, 0.0), Error);
}

TEST(Estimation, SimulatedPairMatchesAnalyticPrecision) {
    const double kappa = units::khz(72.0);
    const double eps = units::khz(5.0);
    const double delta = units::khz(-230.0);
    const auto pa = PhysicalParams::overcoupled(delta, units::khz(300.0), units::khz(-9.14), kappa);
    auto pb = pa;
    pb.delta += eps;
    const MeasurementModel model = MeasurementModel::experiment(pa.kappa_ext);
    const PowerMoments ma = output_moments(observables(steady_state_adaptive(pa).rho), 1.0, model);
    const PowerMoments mb = output_moments(observables(steady_state_adaptive(pb).rho), 1.0, model);
    const double analytic = pair_precision(ma, mb, eps);

    const TraceEnsemble ta = synthesize_traces(ma, model, 100000, 11);
    const TraceEnsemble tb = synthesize_traces(mb, model, 100000, 12);
    const PairPrecision pp = estimate_precision_pair(ta, tb, eps, 0.0, ErrorBarForm::SumOfDeviations);
    EXPECT_EQ(pp.first_steady_bin, 10);
    EXPECT_NEAR(pp.aggregate, analytic, 3.0 * pp.aggregate_err);
}

TEST(Estimation, ErrorShrinksAsInverseRootM) {
    const PowerMoments target{4.0, 6.0};
    std::vector<double> log_m;
    std::vector<double> log_err;
    for (const int m : {1000, 10000, 100000}) {
        double ss = 0;
        const int seeds = 30;
        for (int s = 0; s < seeds; ++s) {
            const auto est = estimate_moments(synthesize_traces(target, single_bin(), m, 1000 + s));
            ss += std::pow(est[0].n_out_mean - target.n_out_mean, 2);
        }
        log_m.push_back(std::log(static_cast<double>(m)));
        log_err.push_back(0.5 * std::log(ss / seeds));
    }
    EXPECT_NEAR(fit_line(log_m, log_err).slope, -0.5, 0.1);
}

TEST(Estimation, PrecisionFallsWithAmplifierNoise) {
    const ObservableRecord a{8.0, 0.0, 9.0};
    const ObservableRecord b{9.0, 0.0, 10.0};
    const double eps = units::khz(5.0);
    double prev = INFINITY;
    for (const double s2 : {0.25, 0.5, 1.0, 2.0}) {
        const MeasurementModel model = MeasurementModel::experiment(kKappaExt, s2);
        const TraceEnsemble ta = synthesize_traces(output_moments(a, 1.0, model), model, 20000, 5);
        const TraceEnsemble tb = synthesize_traces(output_moments(b, 1.0, model), model, 20000, 6);
        const double agg = estimate_precision_pair(ta, tb, eps).aggregate;
        EXPECT_LE(agg, prev);
        prev = agg;
    }
}

TEST(Estimation, GainScalingOfSamplesLeavesPrecision) {
    const MeasurementModel model = MeasurementModel::experiment(kKappaExt);
    TraceEnsemble a = synthesize_traces({3.0, 5.0}, model, 2000, 1);
    TraceEnsemble b = synthesize_traces({3.3, 5.5}, model, 2000, 2);
    const PairPrecision ref = estimate_precision_pair(a, b, 0.2);
    const double c = 17.0;
    for (TraceEnsemble* te : {&a, &b}) {
        te->i_samples *= std::sqrt(c);
        te->q_samples *= std::sqrt(c);
    }
    const auto scaled_moments = estimate_moments(a);
    EXPECT_NEAR(scaled_moments[0].n_out_mean / estimate_moments(synthesize_traces({3.0, 5.0}, model, 2000, 1))[0].n_out_mean,
                c, 1e-10 * c);
    const PairPrecision scaled = estimate_precision_pair(a, b, 0.2);
    EXPECT_NEAR(scaled.aggregate / ref.aggregate, 1.0, 1e-10);
}

TEST(Estimation, BackgroundMatchesAmplifierFloor) {
    const auto p = PhysicalParams::overcoupled(units::khz(-100.0), 0.0, units::khz(-9.14), units::khz(72.0));
    MeasurementModel model = MeasurementModel::experiment(p.kappa_ext, 0.8);
    model.gain = 3.0;
    const PowerMoments pm = output_moments(observables(steady_state(liouvillian(p, FockSpace(10)))), 1.0, model);
    const PooledStats s = pooled(synthesize_traces(pm, model, 100000, 77));
    EXPECT_NEAR(s.mean, 3.0 * 2.0 * 0.8, 3.0 * s.se_mean);
}

}  // namespace
}  // namespace critsense
