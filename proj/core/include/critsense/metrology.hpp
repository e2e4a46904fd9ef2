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

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "critsense/dynamics.hpp"
#include "critsense/fock.hpp"
#include "critsense/measurement.hpp"
#include "critsense/units.hpp"

namespace critsense {

enum class Scaling { I, II };

[[nodiscard]] std::string_view to_string(Scaling scaling) noexcept;

/// Parameters in the reduced frame of a thermodynamic-limit scaling.
/// Scaling I keeps (delta, G, kappa) and weakens U as 1/L; Scaling II keeps U
/// and multiplies (delta, G, kappa) by L. Either way the mean photon number grows as L.
struct ReducedParams {
    double tilde_delta = 0.0;
    double tilde_G = 0.0;
    double tilde_U = 0.0;
    double tilde_kappa = 0.0;
    double L = 1.0;
    Scaling scaling = Scaling::I;

    /// Throws InvalidArgument unless L > 0 and tilde_kappa > 0.
    void validate() const;
    [[nodiscard]] ReducedParams at_detuning(double tilde_delta_new) const;
    /// Factor mapping reduced detunings to physical ones (1 or L).
    [[nodiscard]] double detuning_scale() const;
};

/// Physical parameters with the overcoupled loss split kappa_ext = kappa/2.
[[nodiscard]] PhysicalParams to_physical(const ReducedParams& rp);

/// delta_c = -sqrt(G^2 - kappa^2). Throws NoTransition when G <= kappa (kappa > 0).
[[nodiscard]] double critical_detuning(double G, double kappa);

struct SweepOptions {
    /// Worker threads for independent grid points; 0 picks hardware concurrency.
    int threads = 1;
    SteadyStateOptions steady;
    int min_dim = 30;
    int max_dim = 400;
    /// Repetitions assumed when propagating error bars.
    double repetitions = 4e5;
    /// Uncertainty of the physical detuning step (resonator frequency drift).
    double epsilon_err = units::khz(1.0);
    ErrorBarForm error_form = ErrorBarForm::AsPrinted;
    /// Evaluate the in-bin autocorrelation filter; otherwise s = 1.
    bool compute_autocorr = false;
};

struct SweepFailure {
    std::size_t index;
    double tilde_delta;
    std::string code;
    std::string message;
};

/// Sweep result on an ascending reduced-detuning grid. Entries for points
/// whose steady state failed are NaN and listed in failures. precision[i]
/// uses the pair (i, i+1); the last point reuses the pair (n-2, n-1).
/// Precision is per unit reduced detuning.
struct PrecisionCurve {
    std::vector<double> detunings;
    std::vector<double> n_mean;
    std::vector<double> n_var;
    std::vector<double> d2n;
    std::vector<double> precision;
    std::vector<double> precision_err;
    std::vector<int> dims;
    double delta_max = 0.0;
    double p_max = 0.0;
    std::vector<SweepFailure> failures;

    [[nodiscard]] std::size_t size() const { return detunings.size(); }
    /// Index of the first finite maximum of precision; throws NoConvergence if none.
    [[nodiscard]] std::size_t argmax() const;
};

/// Uniform ascending grid lo, lo+step, ... not exceeding hi (within step/1e6).
[[nodiscard]] std::vector<double> uniform_grid(double lo, double hi, double step);

/// Solves the steady state at every grid point and derives precision from
/// neighbouring output-power moments. epsilon is the grid spacing.
[[nodiscard]] PrecisionCurve sweep(const ReducedParams& rp, std::span<const double> tilde_delta_grid,
                                   const MeasurementModel& model, const SweepOptions& options = {});

/// Assembles precision, d2n and the maximum from per-point statistics.
/// Exposed so that curves can be rebuilt from stored data.
[[nodiscard]] PrecisionCurve assemble_curve(std::span<const double> tilde_delta_grid,
                                            std::span<const ObservableRecord> obs,
                                            std::span<const double> autocorr_scales,
                                            const MeasurementModel& model, double epsilon_err,
                                            double repetitions, ErrorBarForm form);

struct BetaFit {
    double beta = 0.0;
    double std_error = 0.0;
};

/// Least-squares slope of log p_max against log L.
/// Throws DegenerateFit for fewer than 3 points or constant L, InvalidArgument for non-positive values.
[[nodiscard]] BetaFit fit_beta(std::span<const double> l_values, std::span<const double> p_max_values);

struct DeltaMaxGap {
    double L = 0.0;
    double tilde_delta_max = 0.0;
    double tilde_delta_c = 0.0;
};

/// Reduced argmax detuning and reduced critical detuning for each curve.
[[nodiscard]] std::vector<DeltaMaxGap> delta_max_gap(std::span<const PrecisionCurve> curves,
                                                     std::span<const ReducedParams> rps);

}  // namespace critsense
