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

#include <complex>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace critsense {

using cplx = std::complex<double>;
using SparseMatrix = Eigen::SparseMatrix<cplx, Eigen::ColMajor>;
using DenseMatrix = Eigen::MatrixXcd;
using DenseVector = Eigen::VectorXcd;

/// Truncated photon-number basis |0>..|dim-1>.
class FockSpace {
public:
    explicit FockSpace(int dim);

    [[nodiscard]] int dim() const noexcept { return dim_; }
    /// Length of a vectorized operator on this space.
    [[nodiscard]] Eigen::Index liouville_dim() const noexcept {
        return static_cast<Eigen::Index>(dim_) * dim_;
    }

    friend bool operator==(const FockSpace&, const FockSpace&) = default;

private:
    int dim_;
};

struct ComplexOperator {
    FockSpace space;
    SparseMatrix matrix;
    std::string label;

    [[nodiscard]] DenseMatrix dense() const { return DenseMatrix(matrix); }
};

/// One operating point of the two-photon driven Kerr resonator.
/// Every rate is an angular frequency in rad/s.
struct PhysicalParams {
    double delta = 0.0;      ///< cavity-to-half-pump detuning
    double G = 0.0;          ///< two-photon drive amplitude
    double U = 0.0;          ///< Kerr nonlinearity
    double kappa = 0.0;      ///< total single-photon loss
    double kappa_int = 0.0;  ///< intrinsic loss
    double kappa_ext = 0.0;  ///< coupling to one feedline direction

    /// Loss split with kappa_int = 0 and 2*kappa_ext = kappa (overcoupled hanger).
    [[nodiscard]] static PhysicalParams overcoupled(double delta, double G, double U, double kappa);

    /// Throws InvalidArgument when kappa <= 0, G < 0, or the loss split is inconsistent.
    void validate() const;
};

[[nodiscard]] ComplexOperator annihilation(FockSpace space);
[[nodiscard]] ComplexOperator creation(FockSpace space);
[[nodiscard]] ComplexOperator number_operator(FockSpace space);

/// H/hbar = delta n + (U/2) a+a+aa + (G/2)(a+a+ + aa).
[[nodiscard]] ComplexOperator hamiltonian(const PhysicalParams& params, FockSpace space);

// Vectorization is column stacking: vec(rho)[i + j*dim] = rho(i, j), which is
// Eigen's native storage order. Under it vec(A X B) = (B^T kron A) vec(X).

[[nodiscard]] DenseVector vec(const DenseMatrix& rho);
[[nodiscard]] DenseMatrix unvec(const DenseVector& v, FockSpace space);

/// Generator of the Lindblad master equation as a sparse dim^2 x dim^2 matrix.
struct Liouvillian {
    FockSpace space;
    SparseMatrix matrix;
    PhysicalParams params;

    /// Largest absolute row sum; reference scale for residual checks.
    [[nodiscard]] double norm_inf() const;
    [[nodiscard]] DenseVector apply(const DenseVector& v) const { return matrix * v; }
    [[nodiscard]] DenseMatrix apply(const DenseMatrix& rho) const;
};

/// d rho/dt = -i[H, rho] + kappa (2 a rho a+ - {a+a, rho}) / 2.
[[nodiscard]] Liouvillian liouvillian(const PhysicalParams& params, FockSpace space);

}  // namespace critsense
