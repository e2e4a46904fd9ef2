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

namespace critsense {

/// Coherently driven lossless linear resonator probed in reflection.
/// Vacuum quadrature variance is 1/4.
struct ClassicalSetup {
    double kappa_ext = 0.0;  ///< rad/s
    double delta_p = 0.0;    ///< drive-to-resonator detuning, rad/s
    double alpha2 = 0.0;     ///< input photon number |alpha|^2
    double bandwidth = 0.0;  ///< rad/s
    double time = 0.0;       ///< s

    /// Throws InvalidArgument unless kappa_ext > 0, alpha2 >= 0, bandwidth*time >= 0.
    void validate() const;
    /// Output photon number B T alpha2 / (2 pi).
    [[nodiscard]] double n_out() const;
};

/// (kappa_ext/2 + i delta) / (kappa_ext/2 - i delta); unimodular.
[[nodiscard]] std::complex<double> reflection(double delta_p, double kappa_ext);

/// Derivative of the reflected p quadrature with respect to the resonator detuning:
/// -4 kappa_ext sqrt(alpha2) / (kappa_ext^2 + 4 delta_p^2).
[[nodiscard]] double homodyne_slope(const ClassicalSetup& setup);

/// 64 kappa_ext^2 alpha2 / (kappa_ext^2 + 4 delta_p^2)^2.
[[nodiscard]] double classical_precision(const ClassicalSetup& setup);

/// classical_precision with alpha2 replaced by the output photon number.
[[nodiscard]] double classical_precision_timed(const ClassicalSetup& setup);

}  // namespace critsense
