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
#include <string_view>
#include <vector>

#include "critsense/fock.hpp"

namespace critsense {

/// Default bound on the population held by the top 10% of Fock levels.
inline constexpr double kDefaultLeakTolerance = 1e-6;
/// Eigenvalues in [-kNegativeEigenvalueFloor, 0) are treated as round-off.
inline constexpr double kNegativeEigenvalueFloor = 1e-8;

struct DensityMatrix {
    FockSpace space;
    DenseMatrix entries;

    [[nodiscard]] static DensityMatrix fock_state(FockSpace space, int n);
    [[nodiscard]] static DensityMatrix from_vector(const DenseVector& v, FockSpace space);
    [[nodiscard]] DenseVector vectorized() const { return vec(entries); }
    [[nodiscard]] cplx trace() const { return entries.trace(); }
};

/// Population of the highest ceil(dim/10) Fock levels.
[[nodiscard]] double truncation_leak(const DensityMatrix& rho);
[[nodiscard]] double min_eigenvalue(const DensityMatrix& rho);
/// Largest |rho - rho^dagger| entry.
[[nodiscard]] double hermiticity_error(const DensityMatrix& rho);

/// (rho + rho^dagger)/2 followed by trace renormalization.
void hermitize(DensityMatrix& rho);

/// Throws TruncationLeak, NegativeEigenvalue or InvalidArgument when the
/// density-matrix invariants do not hold.
void check_density(const DensityMatrix& rho, double leak_tol = kDefaultLeakTolerance);

[[nodiscard]] double trace_distance(const DensityMatrix& a, const DensityMatrix& b);
/// Uhlmann fidelity (Tr sqrt(sqrt(a) b sqrt(a)))^2.
[[nodiscard]] double fidelity(const DensityMatrix& a, const DensityMatrix& b);

struct ObservableRecord {
    double n_mean = 0.0;
    double n2_mean = 0.0;
    double n_var = 0.0;
};

[[nodiscard]] ObservableRecord observables(const DensityMatrix& rho);
[[nodiscard]] cplx expectation(const DensityMatrix& rho, const ComplexOperator& op);

enum class SteadyStateMethod { DirectLU, IterativeBiCGSTAB, TimeIntegration };

[[nodiscard]] std::string_view to_string(SteadyStateMethod method) noexcept;

struct SteadyStateOptions {
    double leak_tol = kDefaultLeakTolerance;
    /// Acceptance bound on |L vec(rho)|_inf relative to |L|_inf.
    double residual_tol = 1e-9;
    /// Tried in order until one meets residual_tol.
    std::vector<SteadyStateMethod> chain = {SteadyStateMethod::DirectLU,
                                            SteadyStateMethod::IterativeBiCGSTAB,
                                            SteadyStateMethod::TimeIntegration};
    int iterative_max_iterations = 20000;
    /// Horizon of the integration fallback, in units of 1/kappa.
    double integration_horizon = 400.0;
};

struct SteadyStateReport {
    DensityMatrix rho;
    SteadyStateMethod method;
    double relative_residual;
};

[[nodiscard]] SteadyStateReport solve_steady_state(const Liouvillian& liou,
                                                   const SteadyStateOptions& options = {});
[[nodiscard]] DensityMatrix steady_state(const Liouvillian& liou, const SteadyStateOptions& options = {});

/// Initial truncation for a parameter point: covers the mean-field photon
/// number plus a Poisson-like tail, floored at min_dim.
[[nodiscard]] int suggest_dimension(const PhysicalParams& params, int min_dim = 30);

struct AdaptiveSteadyState {
    DensityMatrix rho;
    int dim;
};

/// Steady state with the truncation enlarged (x1.5 per retry) until the leak
/// check passes or max_dim is exceeded, in which case TruncationLeak propagates.
[[nodiscard]] AdaptiveSteadyState steady_state_adaptive(const PhysicalParams& params,
                                                        const SteadyStateOptions& options = {},
                                                        int min_dim = 30, int max_dim = 400);

struct EvolveOptions {
    double abs_tol = 1e-8;
    double rel_tol = 1e-8;
    double leak_tol = kDefaultLeakTolerance;
    /// Rescale trace to one at every output. Off by default: drift is reported, not hidden.
    bool renormalize = false;
    /// Steps between output times before StepFailure is raised.
    int max_steps = 2'000'000;
};

/// Integrates d vec/dt = L vec from t = 0 and returns the state at each time.
/// Works on arbitrary (not necessarily Hermitian) operators.
[[nodiscard]] std::vector<DenseVector> propagate(const Liouvillian& liou, const DenseVector& initial,
                                                 std::span<const double> times,
                                                 const EvolveOptions& options = {});

[[nodiscard]] std::vector<DensityMatrix> evolve(const Liouvillian& liou, const DensityMatrix& rho0,
                                                std::span<const double> times,
                                                const EvolveOptions& options = {});

/// Connected photon-number correlation via the quantum regression theorem:
/// C(tau) = Re Tr[n e^{L tau}(n rho_ss)] - <n>^2. C(0) equals the number variance.
[[nodiscard]] std::vector<double> number_autocorrelation(const Liouvillian& liou, const DensityMatrix& rho_ss,
                                                         std::span<const double> taus,
                                                         const EvolveOptions& options = {});

}  // namespace critsense
