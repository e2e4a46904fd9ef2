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

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "critsense/dynamics.hpp"

namespace critsense {

/// Amplified heterodyne readout of the cavity output. Quadrature noise is in
/// vacuum units (vacuum variance 1/4); the amplifier adds
/// n_amp = 2 sigma2 / (kappa_ext * delta_t) cavity-photon equivalents.
struct MeasurementModel {
    double gain = 1.0;
    double sigma2 = 0.25;
    double kappa_ext = 0.0;      ///< rad/s
    double delta_t = 1.5e-6;     ///< integration bin, s
    double total_time = 69e-6;   ///< trace length, s
    double j_ss_time = 15e-6;    ///< start of the steady-state window, s
    /// Bypass the amplifier chain entirely: <N> = gain * p and dN^2 = gain^2 dp^2.
    bool noise_free = false;

    /// Experiment defaults: 1.5 us bins over 69 us, steady state after 15 us.
    [[nodiscard]] static MeasurementModel experiment(double kappa_ext, double sigma2 = 0.25);
    [[nodiscard]] static MeasurementModel ideal(double kappa_ext);

    /// Throws InvalidNoise for sigma2 < 1/4 and InvalidArgument for bad timing.
    void validate() const;
    [[nodiscard]] int bins() const;
    /// Index of the first bin whose start time is >= j_ss_time.
    [[nodiscard]] int first_steady_bin() const;
    [[nodiscard]] int steady_bins() const { return bins() - first_steady_bin(); }
    [[nodiscard]] double amplifier_photons() const;
};

/// Per-bin statistics of the measured output power N = I^2 + Q^2.
struct PowerMoments {
    double n_out_mean = 0.0;
    double n_out_var = 0.0;

    [[nodiscard]] double n_out_std() const;
};

/// Maps intracavity number statistics to output-power moments. With
/// p = kappa_ext dT <n> and dp^2 = s (kappa_ext dT)^2 Var(n):
///   <N>  = gain (p + 2 sigma2)
///   dN^2 = gain^2 (dp^2 + 4 sigma2 p + 4 sigma2^2 - 1/4)
[[nodiscard]] PowerMoments output_moments(const ObservableRecord& obs, double autocorr_scale,
                                          const MeasurementModel& model);

/// Variance reduction from averaging inside one bin,
/// s = (2/dT^2) int_0^dT (dT - tau) C(tau)/C(0) dtau, clamped to (0, 1].
/// Samples must be on a uniform grid starting at tau = 0 and ending at dT
/// with an even number of intervals (Simpson rule).
[[nodiscard]] double autocorr_scale_from_samples(std::span<const double> c, double delta_t);

/// Evaluates the number autocorrelation on [0, dT] and integrates it.
[[nodiscard]] double autocorr_scale_factor(const Liouvillian& liou, const DensityMatrix& rho_ss,
                                           const MeasurementModel& model, int intervals = 64);

/// Discretized error-propagation precision from two neighbouring points,
/// P = [2 |<N_a> - <N_b>| / ((dN_a + dN_b) eps)]^2. Zero when the signal is flat.
[[nodiscard]] double pair_precision(const PowerMoments& a, const PowerMoments& b, double epsilon);

enum class ErrorBarForm {
    /// Standard-deviation term divided by (dN_a - dN_b)^2.
    AsPrinted,
    /// Standard-deviation term divided by (dN_a + dN_b)^2, matching the estimator.
    SumOfDeviations,
};

/// Propagated error of pair_precision given the repetition counts behind each
/// point and the detuning-step uncertainty. Err[<N>] = dN/sqrt(M), Err[dN] = dN/sqrt(2M).
[[nodiscard]] double pair_precision_error(const PowerMoments& a, const PowerMoments& b, double epsilon,
                                          double epsilon_err, double repetitions_a, double repetitions_b,
                                          ErrorBarForm form = ErrorBarForm::AsPrinted);

/// M x J grid of integrated quadratures.
struct TraceEnsemble {
    Eigen::MatrixXd i_samples;  ///< rows: repetitions, cols: bins
    Eigen::MatrixXd q_samples;
    MeasurementModel model;
    std::optional<std::uint64_t> seed;  ///< empty when ingested from a file

    [[nodiscard]] int m() const { return static_cast<int>(i_samples.rows()); }
    [[nodiscard]] int j() const { return static_cast<int>(i_samples.cols()); }
    /// Throws ShapeError unless both arrays are m x j with m, j >= 1.
    void validate() const;
};

/// Gaussian forward model: I ~ N(mu, v), Q ~ N(0, v) with (mu^2, v) chosen so
/// that <N> and Var(N) match the target. Sample (trace, bin) draws from the
/// counter (trace, bin) of a Philox stream keyed by seed.
[[nodiscard]] TraceEnsemble synthesize_traces(const PowerMoments& target, const MeasurementModel& model, int m,
                                              std::uint64_t seed);

/// Sample moments per bin (divide-by-M estimators).
[[nodiscard]] std::vector<PowerMoments> estimate_moments(const TraceEnsemble& te);

struct PairPrecision {
    std::vector<double> precision;      ///< per bin
    std::vector<double> precision_err;  ///< per bin
    std::vector<bool> zero_signal;      ///< per bin: flat signal, precision reported as 0
    int first_steady_bin = 0;
    double aggregate = 0.0;             ///< mean precision over steady-state bins
    double aggregate_err = 0.0;
    bool any_zero_signal = false;
};

[[nodiscard]] PairPrecision estimate_precision_pair(const TraceEnsemble& a, const TraceEnsemble& b, double epsilon,
                                                    double epsilon_err = 0.0,
                                                    ErrorBarForm form = ErrorBarForm::AsPrinted);

/// Trace CSV: "# m=<int> j=<int> dt=<float_s> gain=<float> sigma2=<float>" then
/// m rows of I_1,Q_1,...,I_j,Q_j. Floats use the shortest round-trip form.
void write_traces(std::ostream& out, const TraceEnsemble& te);
void export_traces(const std::filesystem::path& path, const TraceEnsemble& te);

/// Header values override model.delta_t, gain and sigma2; total_time becomes j*dt.
[[nodiscard]] TraceEnsemble read_traces(std::istream& in, const MeasurementModel& model);
[[nodiscard]] TraceEnsemble ingest_traces(const std::filesystem::path& path, const MeasurementModel& model);

/// Shortest decimal that parses back to exactly the same double.
[[nodiscard]] std::string format_double(double value);

}  // namespace critsense
