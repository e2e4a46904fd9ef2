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

#include "critsense/classical.hpp"

#include <cmath>
#include <numbers>

#include "critsense/error.hpp"

namespace critsense {

namespace {

double lorentz_factor(const ClassicalSetup& s) {
    const double den = s.kappa_ext * s.kappa_ext + 4.0 * s.delta_p * s.delta_p;
    return 64.0 * s.kappa_ext * s.kappa_ext / (den * den);
}

}  // namespace

void ClassicalSetup::validate() const {
    if (!(kappa_ext > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "kappa_ext must be positive");
    }
    if (!(alpha2 >= 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "alpha2 must be non-negative");
    }
    if (!(bandwidth * time >= 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "bandwidth * time must be non-negative");
    }
}

double ClassicalSetup::n_out() const { return bandwidth * time * alpha2 / (2.0 * std::numbers::pi); }

std::complex<double> reflection(double delta_p, double kappa_ext) {
    if (!(kappa_ext > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "kappa_ext must be positive");
    }
    const std::complex<double> num(kappa_ext / 2.0, delta_p);
    return num / std::conj(num);
}

double homodyne_slope(const ClassicalSetup& setup) {
    setup.validate();
    const double k = setup.kappa_ext;
    return -4.0 * k * std::sqrt(setup.alpha2) / (k * k + 4.0 * setup.delta_p * setup.delta_p);
}

double classical_precision(const ClassicalSetup& setup) {
    setup.validate();
    return lorentz_factor(setup) * setup.alpha2;
}

double classical_precision_timed(const ClassicalSetup& setup) {
    setup.validate();
    return lorentz_factor(setup) * setup.n_out();
}

}  // namespace critsense
