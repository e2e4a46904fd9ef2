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

#include "critsense/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "critsense/error.hpp"
#include "critsense/random.hpp"

namespace critsense {

MeasurementModel MeasurementModel::experiment(double kappa_ext, double sigma2) {
    MeasurementModel model;
    model.kappa_ext = kappa_ext;
    model.sigma2 = sigma2;
    return model;
}

MeasurementModel MeasurementModel::ideal(double kappa_ext) {
    MeasurementModel model = experiment(kappa_ext);
    model.noise_free = true;
    return model;
}

void MeasurementModel::validate() const {
    if (!(gain > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "gain must be positive");
    }
    if (!(sigma2 >= 0.25)) {
        throw Error(ErrorCode::InvalidNoise, "amplifier quadrature variance below the vacuum value 1/4");
    }
    if (!(kappa_ext > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "kappa_ext must be positive");
    }
    if (!(delta_t > 0.0) || !(total_time >= delta_t)) {
        throw Error(ErrorCode::InvalidArgument, "need delta_t > 0 and total_time >= delta_t");
    }
    if (!(j_ss_time < total_time)) {
        throw Error(ErrorCode::InvalidArgument, "steady-state window starts after the trace ends");
    }
}

int MeasurementModel::bins() const {
    return std::max(1, static_cast<int>(std::floor(total_time / delta_t + 1e-9)));
}

int MeasurementModel::first_steady_bin() const {
    const int first = static_cast<int>(std::ceil(j_ss_time / delta_t - 1e-9));
    return std::clamp(first, 0, bins() - 1);
}

double MeasurementModel::amplifier_photons() const {
    return 2.0 * sigma2 / (kappa_ext * delta_t);
}

double PowerMoments::n_out_std() const { return std::sqrt(std::max(0.0, n_out_var)); }

PowerMoments output_moments(const ObservableRecord& obs, double autocorr_scale, const MeasurementModel& model) {
    model.validate();
    if (!(autocorr_scale > 0.0 && autocorr_scale <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "autocorrelation scale must lie in (0, 1]");
    }
    const double photons_per_bin = model.kappa_ext * model.delta_t;
    const double p = photons_per_bin * obs.n_mean;
    const double dp2 = autocorr_scale * photons_per_bin * photons_per_bin * obs.n_var;
    const double g = model.gain;
    if (model.noise_free) {
        return {g * p, g * g * dp2};
    }
    const double s2 = model.sigma2;
    return {g * (p + 2.0 * s2), g * g * (dp2 + 4.0 * s2 * p + 4.0 * s2 * s2 - 0.25)};
}

double autocorr_scale_from_samples(std::span<const double> c, double delta_t) {
    const std::size_t intervals = c.size() - 1;
    if (c.size() < 3 || intervals % 2 != 0) {
        throw Error(ErrorCode::InvalidArgument, "Simpson rule needs an even number of intervals");
    }
    if (!(delta_t > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "delta_t must be positive");
    }
    if (!(std::abs(c[0]) > 0.0)) {
        return 1.0;  // no fluctuations to filter
    }
    const double h = delta_t / static_cast<double>(intervals);
    double sum = 0.0;
    for (std::size_t k = 0; k <= intervals; ++k) {
        const double tau = h * static_cast<double>(k);
        const double f = (delta_t - tau) * c[k] / c[0];
        const double w = (k == 0 || k == intervals) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
        sum += w * f;
    }
    const double integral = sum * h / 3.0;
    const double s = 2.0 * integral / (delta_t * delta_t);
    return std::clamp(s, 1e-12, 1.0);
}

double autocorr_scale_factor(const Liouvillian& liou, const DensityMatrix& rho_ss, const MeasurementModel& model,
                             int intervals) {
    model.validate();
    if (intervals < 2 || intervals % 2 != 0) {
        throw Error(ErrorCode::InvalidArgument, "intervals must be even and >= 2");
    }
    std::vector<double> taus(static_cast<std::size_t>(intervals) + 1);
    for (int k = 0; k <= intervals; ++k) {
        taus[k] = model.delta_t * k / intervals;
    }
    const auto c = number_autocorrelation(liou, rho_ss, taus);
    return autocorr_scale_from_samples(c, model.delta_t);
}

double pair_precision(const PowerMoments& a, const PowerMoments& b, double epsilon) {
    if (epsilon == 0.0) {
        throw Error(ErrorCode::InvalidArgument, "detuning step must be non-zero");
    }
    const double signal = std::abs(a.n_out_mean - b.n_out_mean);
    if (signal == 0.0) {
        return 0.0;
    }
    const double noise = a.n_out_std() + b.n_out_std();
    if (noise == 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    const double err = noise * std::abs(epsilon) / (2.0 * signal);
    return 1.0 / (err * err);
}

double pair_precision_error(const PowerMoments& a, const PowerMoments& b, double epsilon, double epsilon_err,
                            double repetitions_a, double repetitions_b, ErrorBarForm form) {
    const double p = pair_precision(a, b, epsilon);
    if (p == 0.0) {
        return 0.0;
    }
    const double signal = a.n_out_mean - b.n_out_mean;
    const double mean_term = (a.n_out_var / repetitions_a + b.n_out_var / repetitions_b) / (signal * signal);

    const double sa = a.n_out_std();
    const double sb = b.n_out_std();
    const double std_num = a.n_out_var / (2.0 * repetitions_a) + b.n_out_var / (2.0 * repetitions_b);
    const double std_den = form == ErrorBarForm::AsPrinted ? (sa - sb) * (sa - sb) : (sa + sb) * (sa + sb);
    const double std_term = std_num == 0.0 ? 0.0
                            : std_den == 0.0 ? std::numeric_limits<double>::infinity()
                                             : std_num / std_den;

    const double step_term = (epsilon_err * epsilon_err) / (epsilon * epsilon);
    return 2.0 * p * std::sqrt(mean_term + std_term + step_term);
}

void TraceEnsemble::validate() const {
    if (i_samples.rows() < 1 || i_samples.cols() < 1) {
        throw Error(ErrorCode::ShapeError, "ensemble needs m >= 1 and j >= 1");
    }
    if (q_samples.rows() != i_samples.rows() || q_samples.cols() != i_samples.cols()) {
        throw Error(ErrorCode::ShapeError, "I and Q arrays differ in shape");
    }
}

TraceEnsemble synthesize_traces(const PowerMoments& target, const MeasurementModel& model, int m,
                                std::uint64_t seed) {
    model.validate();
    if (m < 1) {
        throw Error(ErrorCode::InvalidArgument, "need at least one repetition");
    }
    const double mean = target.n_out_mean;
    const double var = target.n_out_var;
    if (!(mean >= 0.0) || !(var >= 0.0)) {
        throw Error(ErrorCode::MomentInfeasible, "negative target moment");
    }
    // <N> = mu^2 + 2v, Var(N) = 4v(mu^2 + v)  =>  v = (<N> - sqrt(<N>^2 - Var)) / 2.
    const double disc = mean * mean - var;
    if (disc < -1e-12 * std::max(1.0, mean * mean)) {
        throw Error(ErrorCode::MomentInfeasible,
                    "Var(N) = " + format_double(var) + " exceeds <N>^2 = " + format_double(mean * mean) +
                        "; no displaced Gaussian field matches");
    }
    const double v = 0.5 * (mean - std::sqrt(std::max(0.0, disc)));
    const double mu = std::sqrt(std::max(0.0, mean - 2.0 * v));
    const double sd = std::sqrt(v);

    const int j = model.bins();
    TraceEnsemble te;
    te.i_samples.resize(m, j);
    te.q_samples.resize(m, j);
    te.model = model;
    te.seed = seed;
    const Philox4x32 rng(seed);
    for (int col = 0; col < j; ++col) {
        for (int row = 0; row < m; ++row) {
            const auto [z1, z2] = rng.normal_pair(static_cast<std::uint64_t>(row), static_cast<std::uint64_t>(col));
            te.i_samples(row, col) = mu + sd * z1;
            te.q_samples(row, col) = sd * z2;
        }
    }
    return te;
}

std::vector<PowerMoments> estimate_moments(const TraceEnsemble& te) {
    te.validate();
    const double inv_m = 1.0 / static_cast<double>(te.m());
    std::vector<PowerMoments> out(static_cast<std::size_t>(te.j()));
    for (int col = 0; col < te.j(); ++col) {
        double s1 = 0.0;
        double s2 = 0.0;
        for (int row = 0; row < te.m(); ++row) {
            const double i = te.i_samples(row, col);
            const double q = te.q_samples(row, col);
            const double n = i * i + q * q;
            s1 += n;
            s2 += n * n;
        }
        const double mean = s1 * inv_m;
        out[col] = {mean, std::max(0.0, s2 * inv_m - mean * mean)};
    }
    return out;
}

PairPrecision estimate_precision_pair(const TraceEnsemble& a, const TraceEnsemble& b, double epsilon,
                                      double epsilon_err, ErrorBarForm form) {
    a.validate();
    b.validate();
    if (a.j() != b.j()) {
        throw Error(ErrorCode::ShapeError, "ensembles have different bin counts");
    }
    if (epsilon == 0.0) {
        throw Error(ErrorCode::InvalidArgument, "detuning step must be non-zero");
    }
    const auto ma = estimate_moments(a);
    const auto mb = estimate_moments(b);

    PairPrecision out;
    const auto j = static_cast<std::size_t>(a.j());
    out.precision.resize(j);
    out.precision_err.resize(j);
    out.zero_signal.resize(j);
    for (std::size_t k = 0; k < j; ++k) {
        out.zero_signal[k] = ma[k].n_out_mean == mb[k].n_out_mean;
        out.any_zero_signal = out.any_zero_signal || out.zero_signal[k];
        out.precision[k] = pair_precision(ma[k], mb[k], epsilon);
        out.precision_err[k] = pair_precision_error(ma[k], mb[k], epsilon, epsilon_err, a.m(), b.m(), form);
    }

    MeasurementModel window = a.model;
    window.total_time = a.j() * window.delta_t;
    out.first_steady_bin = window.j_ss_time < window.total_time ? window.first_steady_bin() : 0;
    const std::size_t first = static_cast<std::size_t>(out.first_steady_bin);
    const double count = static_cast<double>(j - first);
    double sum_p = 0.0;
    double sum_err = 0.0;
    for (std::size_t k = first; k < j; ++k) {
        sum_p += out.precision[k];
        sum_err += out.precision_err[k];
    }
    out.aggregate = sum_p / count;
    out.aggregate_err = std::sqrt((sum_err / count) * (sum_err / count) / count);
    return out;
}

}  // namespace critsense
