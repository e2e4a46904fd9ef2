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

#include "critsense/metrology.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

#include "critsense/error.hpp"
#include "critsense/linear_fit.hpp"

namespace critsense {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct PointResult {
    ObservableRecord obs{kNaN, kNaN, kNaN};
    double autocorr_scale = kNaN;
    int dim = 0;
    bool ok = false;
    std::string code;
    std::string message;
};

PointResult solve_point(const ReducedParams& rp, double tilde_delta, const MeasurementModel& model,
                        const SweepOptions& options) {
    PointResult out;
    try {
        const PhysicalParams params = to_physical(rp.at_detuning(tilde_delta));
        AdaptiveSteadyState ss = steady_state_adaptive(params, options.steady, options.min_dim, options.max_dim);
        out.obs = observables(ss.rho);
        out.dim = ss.dim;
        out.autocorr_scale = 1.0;
        if (options.compute_autocorr) {
            const Liouvillian liou = liouvillian(params, ss.rho.space);
            out.autocorr_scale = autocorr_scale_factor(liou, ss.rho, model);
        }
        out.ok = true;
    } catch (const Error& e) {
        out.code = std::string(to_string(e.code()));
        out.message = e.what();
    }
    return out;
}

}  // namespace

std::string_view to_string(Scaling scaling) noexcept { return scaling == Scaling::I ? "I" : "II"; }

void ReducedParams::validate() const {
    if (!(L > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "L must be positive");
    }
    if (!(tilde_kappa > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "tilde_kappa must be positive");
    }
}

ReducedParams ReducedParams::at_detuning(double tilde_delta_new) const {
    ReducedParams rp = *this;
    rp.tilde_delta = tilde_delta_new;
    return rp;
}

double ReducedParams::detuning_scale() const { return scaling == Scaling::I ? 1.0 : L; }

PhysicalParams to_physical(const ReducedParams& rp) {
    rp.validate();
    if (rp.scaling == Scaling::I) {
        return PhysicalParams::overcoupled(rp.tilde_delta, rp.tilde_G, rp.tilde_U / rp.L, rp.tilde_kappa);
    }
    return PhysicalParams::overcoupled(rp.tilde_delta * rp.L, rp.tilde_G * rp.L, rp.tilde_U, rp.tilde_kappa * rp.L);
}

double critical_detuning(double G, double kappa) {
    if (kappa < 0.0 || G < 0.0) {
        throw Error(ErrorCode::InvalidArgument, "G and kappa must be non-negative");
    }
    if (kappa == 0.0 && G > 0.0) {
        return -G;
    }
    if (!(G > kappa)) {
        throw Error(ErrorCode::NoTransition, "two-photon drive does not exceed the loss rate");
    }
    return -std::sqrt(G * G - kappa * kappa);
}

std::size_t PrecisionCurve::argmax() const {
    std::size_t best = precision.size();
    for (std::size_t i = 0; i < precision.size(); ++i) {
        if (std::isfinite(precision[i]) && (best == precision.size() || precision[i] > precision[best])) {
            best = i;
        }
    }
    if (best == precision.size()) {
        throw Error(ErrorCode::NoConvergence, "no grid point produced a finite precision");
    }
    return best;
}

std::vector<double> uniform_grid(double lo, double hi, double step) {
    if (!(step > 0.0) || !(hi >= lo)) {
        throw Error(ErrorCode::InvalidArgument, "grid needs step > 0 and hi >= lo");
    }
    const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-6)) + 1;
    std::vector<double> grid(n);
    for (std::size_t i = 0; i < n; ++i) {
        grid[i] = lo + step * static_cast<double>(i);
    }
    return grid;
}

PrecisionCurve assemble_curve(std::span<const double> grid, std::span<const ObservableRecord> obs,
                              std::span<const double> autocorr_scales, const MeasurementModel& model,
                              double epsilon_err, double repetitions, ErrorBarForm form) {
    const std::size_t n = grid.size();
    if (n < 3) {
        throw Error(ErrorCode::InvalidArgument, "sweep needs at least 3 grid points");
    }
    if (obs.size() != n || autocorr_scales.size() != n) {
        throw Error(ErrorCode::ShapeError, "per-point data does not match the grid");
    }
    const double eps = (grid[n - 1] - grid[0]) / static_cast<double>(n - 1);

    PrecisionCurve c;
    c.detunings.assign(grid.begin(), grid.end());
    c.n_mean.resize(n);
    c.n_var.resize(n);
    c.d2n.assign(n, kNaN);
    c.precision.assign(n, kNaN);
    c.precision_err.assign(n, kNaN);
    c.dims.assign(n, 0);

    std::vector<PowerMoments> moments(n, PowerMoments{kNaN, kNaN});
    for (std::size_t i = 0; i < n; ++i) {
        c.n_mean[i] = obs[i].n_mean;
        c.n_var[i] = obs[i].n_var;
        if (std::isfinite(obs[i].n_mean)) {
            moments[i] = output_moments(obs[i], autocorr_scales[i], model);
        }
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
        c.d2n[i] = (c.n_mean[i + 1] - 2.0 * c.n_mean[i] + c.n_mean[i - 1]) / (eps * eps);
    }
    const double bins = std::sqrt(static_cast<double>(model.steady_bins()));
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t a = i + 1 < n ? i : n - 2;
        const PowerMoments& ma = moments[a];
        const PowerMoments& mb = moments[a + 1];
        if (!std::isfinite(ma.n_out_mean) || !std::isfinite(mb.n_out_mean)) {
            continue;
        }
        c.precision[i] = pair_precision(ma, mb, eps);
        c.precision_err[i] = pair_precision_error(ma, mb, eps, epsilon_err, repetitions, repetitions, form) / bins;
    }
    bool any = false;
    for (double p : c.precision) {
        any = any || std::isfinite(p);
    }
    if (any) {
        const std::size_t k = c.argmax();
        c.delta_max = c.detunings[k];
        c.p_max = c.precision[k];
    } else {
        c.delta_max = kNaN;
        c.p_max = kNaN;
    }
    return c;
}

PrecisionCurve sweep(const ReducedParams& rp, std::span<const double> grid, const MeasurementModel& model,
                     const SweepOptions& options) {
    rp.validate();
    model.validate();
    const std::size_t n = grid.size();
    if (n < 3) {
        throw Error(ErrorCode::InvalidArgument, "sweep needs at least 3 grid points");
    }
    const double eps = (grid[n - 1] - grid[0]) / static_cast<double>(n - 1);
    for (std::size_t i = 1; i < n; ++i) {
        const double step = grid[i] - grid[i - 1];
        if (!(step > 0.0) || std::abs(step - eps) > 1e-6 * std::abs(eps)) {
            throw Error(ErrorCode::InvalidArgument, "grid must be ascending with uniform spacing");
        }
    }

    std::vector<PointResult> results(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            results[i] = solve_point(rp, grid[i], model, options);
        }
    };
    int threads = options.threads > 0 ? options.threads : static_cast<int>(std::thread::hardware_concurrency());
    threads = std::clamp(threads, 1, static_cast<int>(n));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        for (int t = 0; t < threads; ++t) {
            pool.emplace_back(worker);
        }
    }

    std::vector<ObservableRecord> obs(n);
    std::vector<double> scales(n);
    for (std::size_t i = 0; i < n; ++i) {
        obs[i] = results[i].obs;
        scales[i] = results[i].autocorr_scale;
    }
    PrecisionCurve curve = assemble_curve(grid, obs, scales, model, options.epsilon_err / rp.detuning_scale(),
                                          options.repetitions, options.error_form);
    for (std::size_t i = 0; i < n; ++i) {
        curve.dims[i] = results[i].dim;
        if (!results[i].ok) {
            curve.failures.push_back({i, grid[i], results[i].code, results[i].message});
        }
    }
    return curve;
}

BetaFit fit_beta(std::span<const double> l_values, std::span<const double> p_max_values) {
    if (l_values.size() != p_max_values.size()) {
        throw Error(ErrorCode::DegenerateFit, "L and p_max lists differ in length");
    }
    if (l_values.size() < 3) {
        throw Error(ErrorCode::DegenerateFit, "need at least 3 (L, p_max) pairs");
    }
    std::vector<double> x(l_values.size());
    std::vector<double> y(l_values.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(l_values[i] > 0.0) || !(p_max_values[i] > 0.0)) {
            throw Error(ErrorCode::InvalidArgument, "L and p_max must be positive");
        }
        x[i] = std::log(l_values[i]);
        y[i] = std::log(p_max_values[i]);
    }
    const LineFit fit = fit_line(x, y);
    return {fit.slope, fit.slope_err};
}

std::vector<DeltaMaxGap> delta_max_gap(std::span<const PrecisionCurve> curves, std::span<const ReducedParams> rps) {
    if (curves.size() != rps.size()) {
        throw Error(ErrorCode::ShapeError, "curves and parameter sets are not aligned");
    }
    std::vector<DeltaMaxGap> out;
    out.reserve(curves.size());
    for (std::size_t i = 0; i < curves.size(); ++i) {
        out.push_back({rps[i].L, curves[i].delta_max, critical_detuning(rps[i].tilde_G, rps[i].tilde_kappa)});
    }
    return out;
}

}  // namespace critsense
