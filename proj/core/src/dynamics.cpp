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

#include "critsense/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseLU>
#include <boost/numeric/odeint.hpp>

#include "critsense/error.hpp"

namespace critsense {

namespace odeint = boost::numeric::odeint;

namespace {

using OdeState = std::vector<cplx>;

int top_levels(int dim) { return std::max(1, (dim + 9) / 10); }

Eigen::VectorXd hermitian_eigenvalues(const DenseMatrix& m) {
    Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(m, Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
}

DenseMatrix hermitian_sqrt(const DenseMatrix& m) {
    Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(m);
    const Eigen::VectorXd root = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return solver.eigenvectors() * root.asDiagonal() * solver.eigenvectors().adjoint();
}

double relative_residual(const Liouvillian& liou, const DenseVector& v) {
    const double scale = liou.norm_inf();
    const DenseVector r = liou.matrix * v;
    return r.cwiseAbs().maxCoeff() / (scale > 0.0 ? scale : 1.0);
}

// L/kappa with the first row replaced by the trace functional.
SparseMatrix trace_constrained_system(const Liouvillian& liou) {
    const int n = liou.space.dim();
    const double inv_kappa = 1.0 / liou.params.kappa;
    std::vector<Eigen::Triplet<cplx>> entries;
    entries.reserve(static_cast<std::size_t>(liou.matrix.nonZeros()) + n);
    for (Eigen::Index col = 0; col < liou.matrix.outerSize(); ++col) {
        for (SparseMatrix::InnerIterator it(liou.matrix, col); it; ++it) {
            if (it.row() != 0) {
                entries.emplace_back(it.row(), it.col(), it.value() * inv_kappa);
            }
        }
    }
    for (int i = 0; i < n; ++i) {
        entries.emplace_back(0, static_cast<Eigen::Index>(i) * n + i, 1.0);
    }
    SparseMatrix a(liou.matrix.rows(), liou.matrix.cols());
    a.setFromTriplets(entries.begin(), entries.end());
    a.makeCompressed();
    return a;
}

DenseVector unit_rhs(Eigen::Index size) {
    DenseVector b = DenseVector::Zero(size);
    b[0] = 1.0;
    return b;
}

bool solve_direct(const SparseMatrix& a, DenseVector& out) {
    Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
    lu.compute(a);
    if (lu.info() != Eigen::Success) {
        return false;
    }
    out = lu.solve(unit_rhs(a.rows()));
    return lu.info() == Eigen::Success && out.allFinite();
}

bool solve_iterative(const SparseMatrix& a, int max_iterations, DenseVector& out) {
    Eigen::BiCGSTAB<SparseMatrix, Eigen::DiagonalPreconditioner<cplx>> solver;
    solver.setMaxIterations(max_iterations);
    solver.setTolerance(1e-13);
    solver.compute(a);
    if (solver.info() != Eigen::Success) {
        return false;
    }
    DenseVector guess = DenseVector::Zero(a.rows());
    guess[0] = 1.0;
    out = solver.solveWithGuess(unit_rhs(a.rows()), guess);
    return solver.info() == Eigen::Success && out.allFinite();
}

bool solve_by_integration(const Liouvillian& liou, double horizon, DenseVector& out) {
    const double t_end = horizon / liou.params.kappa;
    DensityMatrix vacuum = DensityMatrix::fock_state(liou.space, 0);
    const std::vector<double> times{t_end};
    EvolveOptions opts;
    opts.abs_tol = 1e-10;
    opts.rel_tol = 1e-10;
    opts.leak_tol = 1.0;
    try {
        out = propagate(liou, vacuum.vectorized(), times, opts).front();
    } catch (const Error&) {
        return false;
    }
    return out.allFinite();
}

}  // namespace

DensityMatrix DensityMatrix::fock_state(FockSpace space, int n) {
    if (n < 0 || n >= space.dim()) {
        throw Error(ErrorCode::InvalidArgument, "Fock level outside the truncated space");
    }
    DenseMatrix m = DenseMatrix::Zero(space.dim(), space.dim());
    m(n, n) = 1.0;
    return {space, std::move(m)};
}

DensityMatrix DensityMatrix::from_vector(const DenseVector& v, FockSpace space) {
    return {space, unvec(v, space)};
}

double truncation_leak(const DensityMatrix& rho) {
    const int dim = rho.space.dim();
    double leak = 0.0;
    for (int k = dim - top_levels(dim); k < dim; ++k) {
        leak += rho.entries(k, k).real();
    }
    return std::max(0.0, leak);
}

double min_eigenvalue(const DensityMatrix& rho) {
    const DenseMatrix h = 0.5 * (rho.entries + rho.entries.adjoint());
    return hermitian_eigenvalues(h).minCoeff();
}

double hermiticity_error(const DensityMatrix& rho) {
    return (rho.entries - rho.entries.adjoint()).cwiseAbs().maxCoeff();
}

void hermitize(DensityMatrix& rho) {
    rho.entries = 0.5 * (rho.entries + rho.entries.adjoint()).eval();
    const double tr = rho.entries.trace().real();
    if (tr != 0.0) {
        rho.entries /= tr;
    }
}

void check_density(const DensityMatrix& rho, double leak_tol) {
    if (hermiticity_error(rho) > 1e-9) {
        throw Error(ErrorCode::InvalidArgument, "density matrix is not Hermitian");
    }
    if (std::abs(rho.trace() - 1.0) > 1e-9) {
        throw Error(ErrorCode::InvalidArgument, "density matrix trace differs from one");
    }
    const double leak = truncation_leak(rho);
    if (leak > leak_tol) {
        throw Error(ErrorCode::TruncationLeak,
                    "top-level population " + std::to_string(leak) + " exceeds tolerance at dim " +
                        std::to_string(rho.space.dim()));
    }
    const double lowest = min_eigenvalue(rho);
    if (lowest < -kNegativeEigenvalueFloor) {
        throw Error(ErrorCode::NegativeEigenvalue, "minimum eigenvalue " + std::to_string(lowest));
    }
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
    const DenseMatrix diff = a.entries - b.entries;
    const DenseMatrix h = 0.5 * (diff + diff.adjoint());
    return 0.5 * hermitian_eigenvalues(h).cwiseAbs().sum();
}

double fidelity(const DensityMatrix& a, const DensityMatrix& b) {
    const DenseMatrix root_a = hermitian_sqrt(0.5 * (a.entries + a.entries.adjoint()));
    const DenseMatrix inner = root_a * (0.5 * (b.entries + b.entries.adjoint())) * root_a;
    const double tr = hermitian_eigenvalues(0.5 * (inner + inner.adjoint())).cwiseMax(0.0).cwiseSqrt().sum();
    return tr * tr;
}

ObservableRecord observables(const DensityMatrix& rho) {
    const int dim = rho.space.dim();
    cplx n1 = 0.0;
    cplx n2 = 0.0;
    for (int k = 0; k < dim; ++k) {
        const double kd = k;
        n1 += kd * rho.entries(k, k);
        n2 += kd * kd * rho.entries(k, k);
    }
    ObservableRecord rec;
    rec.n_mean = n1.real();
    rec.n2_mean = n2.real();
    rec.n_var = std::max(0.0, rec.n2_mean - rec.n_mean * rec.n_mean);
    return rec;
}

cplx expectation(const DensityMatrix& rho, const ComplexOperator& op) {
    if (!(op.space == rho.space)) {
        throw Error(ErrorCode::InvalidArgument, "operator and state live on different spaces");
    }
    return (op.matrix * rho.entries).trace();
}

std::string_view to_string(SteadyStateMethod method) noexcept {
    switch (method) {
        case SteadyStateMethod::DirectLU: return "direct_lu";
        case SteadyStateMethod::IterativeBiCGSTAB: return "bicgstab";
        case SteadyStateMethod::TimeIntegration: return "integration";
    }
    return "unknown";
}

SteadyStateReport solve_steady_state(const Liouvillian& liou, const SteadyStateOptions& options) {
    liou.params.validate();
    const SparseMatrix system = trace_constrained_system(liou);
    double best_residual = std::numeric_limits<double>::infinity();

    for (const SteadyStateMethod method : options.chain) {
        DenseVector x;
        bool ok = false;
        switch (method) {
            case SteadyStateMethod::DirectLU: ok = solve_direct(system, x); break;
            case SteadyStateMethod::IterativeBiCGSTAB:
                ok = solve_iterative(system, options.iterative_max_iterations, x);
                break;
            case SteadyStateMethod::TimeIntegration:
                ok = solve_by_integration(liou, options.integration_horizon, x);
                break;
        }
        if (!ok) {
            continue;
        }
        DensityMatrix rho = DensityMatrix::from_vector(x, liou.space);
        hermitize(rho);
        const double residual = relative_residual(liou, rho.vectorized());
        best_residual = std::min(best_residual, residual);
        if (residual <= options.residual_tol) {
            check_density(rho, options.leak_tol);
            return {std::move(rho), method, residual};
        }
    }
    throw Error(ErrorCode::NoConvergence,
                "steady-state residual " + std::to_string(best_residual) + " above tolerance after fallback chain");
}

DensityMatrix steady_state(const Liouvillian& liou, const SteadyStateOptions& options) {
    return solve_steady_state(liou, options).rho;
}

int suggest_dimension(const PhysicalParams& params, int min_dim) {
    double n_mf = 0.0;
    if (params.U != 0.0 && params.G > params.kappa) {
        n_mf = std::max(0.0, (params.delta + std::sqrt(params.G * params.G - params.kappa * params.kappa)) /
                                 std::abs(params.U));
    }
    // Mean plus six Poisson widths must sit below the top 10% band.
    const double span = (n_mf + 6.0 * std::sqrt(n_mf + 1.0)) / 0.9 + 10.0;
    return std::max(min_dim, static_cast<int>(std::ceil(span)));
}

AdaptiveSteadyState steady_state_adaptive(const PhysicalParams& params, const SteadyStateOptions& options,
                                          int min_dim, int max_dim) {
    int dim = std::min(suggest_dimension(params, min_dim), max_dim);
    while (true) {
        try {
            auto rho = steady_state(liouvillian(params, FockSpace(dim)), options);
            return {std::move(rho), dim};
        } catch (const Error& e) {
            if (e.code() != ErrorCode::TruncationLeak || dim >= max_dim) {
                throw;
            }
            dim = std::min(max_dim, static_cast<int>(std::ceil(1.5 * dim)));
        }
    }
}

std::vector<DenseVector> propagate(const Liouvillian& liou, const DenseVector& initial,
                                   std::span<const double> times, const EvolveOptions& options) {
    if (initial.size() != liou.matrix.cols()) {
        throw Error(ErrorCode::InvalidArgument, "initial vector does not match the Liouvillian");
    }
    if (times.empty()) {
        return {};
    }
    if (times.front() < 0.0 || !std::is_sorted(times.begin(), times.end())) {
        throw Error(ErrorCode::InvalidArgument, "times must be ascending and non-negative");
    }

    std::vector<double> grid;
    grid.reserve(times.size() + 1);
    grid.push_back(0.0);
    for (double t : times) {
        if (t > grid.back()) {
            grid.push_back(t);
        }
    }

    const Eigen::Index n = initial.size();
    const SparseMatrix& m = liou.matrix;
    auto rhs = [&m, n](const OdeState& x, OdeState& dxdt, double /*t*/) {
        Eigen::Map<const DenseVector> xv(x.data(), n);
        Eigen::Map<DenseVector> dv(dxdt.data(), n);
        dv.noalias() = m * xv;
    };

    OdeState state(initial.data(), initial.data() + n);
    std::vector<DenseVector> at_grid;
    at_grid.reserve(grid.size());
    auto observer = [&at_grid, n](const OdeState& x, double /*t*/) {
        at_grid.emplace_back(Eigen::Map<const DenseVector>(x.data(), n));
    };

    if (grid.size() == 1) {
        observer(state, 0.0);
    } else {
        auto stepper = odeint::make_controlled(options.abs_tol, options.rel_tol,
                                               odeint::runge_kutta_dopri5<OdeState>());
        const double first_step = std::min(grid[1], 0.01 / std::max(liou.norm_inf(), 1e-300));
        try {
            odeint::integrate_times(stepper, rhs, state, grid.begin(), grid.end(), first_step, observer,
                                    odeint::max_step_checker(options.max_steps));
        } catch (const odeint::step_adjustment_error& e) {
            throw Error(ErrorCode::StepFailure, e.what());
        } catch (const odeint::no_progress_error& e) {
            throw Error(ErrorCode::StepFailure, e.what());
        }
    }

    std::vector<DenseVector> out;
    out.reserve(times.size());
    std::size_t g = 0;
    for (double t : times) {
        while (grid[g] < t) {
            ++g;
        }
        out.push_back(at_grid[g]);
    }
    return out;
}

std::vector<DensityMatrix> evolve(const Liouvillian& liou, const DensityMatrix& rho0,
                                  std::span<const double> times, const EvolveOptions& options) {
    if (!(rho0.space == liou.space)) {
        throw Error(ErrorCode::InvalidArgument, "initial state and Liouvillian live on different spaces");
    }
    const auto vectors = propagate(liou, rho0.vectorized(), times, options);
    std::vector<DensityMatrix> out;
    out.reserve(vectors.size());
    for (std::size_t k = 0; k < vectors.size(); ++k) {
        DensityMatrix rho = DensityMatrix::from_vector(vectors[k], liou.space);
        if (times[k] > 0.0) {
            rho.entries = 0.5 * (rho.entries + rho.entries.adjoint()).eval();
            if (options.renormalize) {
                rho.entries /= rho.entries.trace().real();
            }
        }
        const double leak = truncation_leak(rho);
        if (leak > options.leak_tol) {
            throw Error(ErrorCode::TruncationLeak,
                        "population " + std::to_string(leak) + " reached the truncation edge during evolution");
        }
        out.push_back(std::move(rho));
    }
    return out;
}

std::vector<double> number_autocorrelation(const Liouvillian& liou, const DensityMatrix& rho_ss,
                                           std::span<const double> taus, const EvolveOptions& options) {
    const int dim = liou.space.dim();
    const ObservableRecord obs = observables(rho_ss);
    Eigen::VectorXd levels(dim);
    for (int k = 0; k < dim; ++k) {
        levels[k] = k;
    }
    const DenseMatrix n_rho = levels.asDiagonal() * rho_ss.entries;
    EvolveOptions opts = options;
    opts.leak_tol = 1.0;  // n rho is not a state; leak is meaningless here
    const auto evolved = propagate(liou, vec(n_rho), taus, opts);

    std::vector<double> out;
    out.reserve(evolved.size());
    for (const auto& v : evolved) {
        cplx tr = 0.0;
        for (int k = 0; k < dim; ++k) {
            tr += levels[k] * v[static_cast<Eigen::Index>(k) * dim + k];
        }
        out.push_back(tr.real() - obs.n_mean * obs.n_mean);
    }
    return out;
}

}  // namespace critsense
