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

#include "critsense/fock.hpp"

#include <cmath>
#include <vector>

#include <unsupported/Eigen/KroneckerProduct>

#include "critsense/error.hpp"

namespace critsense {

FockSpace::FockSpace(int dim) : dim_(dim) {
    if (dim < 2) {
        throw Error(ErrorCode::InvalidArgument, "Fock truncation must be >= 2, got " + std::to_string(dim));
    }
}

PhysicalParams PhysicalParams::overcoupled(double delta, double G, double U, double kappa) {
    return PhysicalParams{delta, G, U, kappa, 0.0, kappa / 2.0};
}

void PhysicalParams::validate() const {
    if (!(kappa > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "kappa must be positive");
    }
    if (G < 0.0) {
        throw Error(ErrorCode::InvalidArgument, "G must be non-negative");
    }
    if (kappa_int < 0.0 || kappa_ext < 0.0) {
        throw Error(ErrorCode::InvalidArgument, "loss rates must be non-negative");
    }
    if (std::abs(kappa - (kappa_int + 2.0 * kappa_ext)) > 1e-12 * kappa) {
        throw Error(ErrorCode::InvalidArgument, "kappa must equal kappa_int + 2 kappa_ext");
    }
    if (!std::isfinite(delta) || !std::isfinite(U) || !std::isfinite(G)) {
        throw Error(ErrorCode::InvalidArgument, "non-finite rate");
    }
}

ComplexOperator annihilation(FockSpace space) {
    const int n = space.dim();
    std::vector<Eigen::Triplet<cplx>> entries;
    entries.reserve(n - 1);
    for (int k = 1; k < n; ++k) {
        entries.emplace_back(k - 1, k, std::sqrt(static_cast<double>(k)));
    }
    SparseMatrix a(n, n);
    a.setFromTriplets(entries.begin(), entries.end());
    return {space, std::move(a), "a"};
}

ComplexOperator creation(FockSpace space) {
    SparseMatrix ad = annihilation(space).matrix.adjoint();
    return {space, std::move(ad), "a_dag"};
}

ComplexOperator number_operator(FockSpace space) {
    const int n = space.dim();
    SparseMatrix num(n, n);
    num.reserve(Eigen::VectorXi::Constant(n, 1));
    for (int k = 1; k < n; ++k) {
        num.insert(k, k) = static_cast<double>(k);
    }
    num.makeCompressed();
    return {space, std::move(num), "n"};
}

ComplexOperator hamiltonian(const PhysicalParams& params, FockSpace space) {
    const int n = space.dim();
    std::vector<Eigen::Triplet<cplx>> entries;
    entries.reserve(3 * n);
    for (int k = 0; k < n; ++k) {
        const double kd = k;
        const double diag = params.delta * kd + 0.5 * params.U * kd * (kd - 1.0);
        if (diag != 0.0) {
            entries.emplace_back(k, k, diag);
        }
        if (k + 2 < n && params.G != 0.0) {
            const double pair = 0.5 * params.G * std::sqrt((kd + 1.0) * (kd + 2.0));
            entries.emplace_back(k + 2, k, pair);
            entries.emplace_back(k, k + 2, pair);
        }
    }
    SparseMatrix h(n, n);
    h.setFromTriplets(entries.begin(), entries.end());
    return {space, std::move(h), "H"};
}

DenseVector vec(const DenseMatrix& rho) {
    return Eigen::Map<const DenseVector>(rho.data(), rho.size());
}

DenseMatrix unvec(const DenseVector& v, FockSpace space) {
    if (v.size() != space.liouville_dim()) {
        throw Error(ErrorCode::InvalidArgument, "vector length does not match the Fock space");
    }
    return Eigen::Map<const DenseMatrix>(v.data(), space.dim(), space.dim());
}

double Liouvillian::norm_inf() const {
    Eigen::VectorXd row_sums = Eigen::VectorXd::Zero(matrix.rows());
    for (Eigen::Index col = 0; col < matrix.outerSize(); ++col) {
        for (SparseMatrix::InnerIterator it(matrix, col); it; ++it) {
            row_sums[it.row()] += std::abs(it.value());
        }
    }
    return row_sums.size() > 0 ? row_sums.maxCoeff() : 0.0;
}

DenseMatrix Liouvillian::apply(const DenseMatrix& rho) const {
    return unvec(matrix * vec(rho), space);
}

Liouvillian liouvillian(const PhysicalParams& params, FockSpace space) {
    params.validate();
    const int n = space.dim();
    const SparseMatrix a = annihilation(space).matrix;
    const SparseMatrix num = number_operator(space).matrix;
    const SparseMatrix h = hamiltonian(params, space).matrix;
    SparseMatrix id(n, n);
    id.setIdentity();

    const SparseMatrix h_t = h.transpose();
    const SparseMatrix num_t = num.transpose();
    const SparseMatrix a_conj = a.conjugate();

    // -i (I kron H - H^T kron I)
    SparseMatrix coherent = Eigen::kroneckerProduct(id, h).eval();
    coherent -= Eigen::kroneckerProduct(h_t, id).eval();
    coherent *= cplx(0.0, -1.0);

    // kappa (conj(a) kron a - (I kron n)/2 - (n^T kron I)/2)
    SparseMatrix loss = Eigen::kroneckerProduct(a_conj, a).eval();
    loss -= 0.5 * SparseMatrix(Eigen::kroneckerProduct(id, num).eval());
    loss -= 0.5 * SparseMatrix(Eigen::kroneckerProduct(num_t, id).eval());
    loss *= params.kappa;

    SparseMatrix total = coherent + loss;
    total.prune(cplx(0.0, 0.0));
    total.makeCompressed();
    return {space, std::move(total), params};
}

}  // namespace critsense
