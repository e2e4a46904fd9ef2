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
#include <span>
#include <vector>

#include "critsense/fock.hpp"

namespace critsense {

/// Quarter-wave resonator terminated by a flux-tunable SQUID.
/// Zero in an optional field means "not provided".
struct DeviceModel {
    double gamma0 = 0.0;      ///< L_J(F=0) / L_cav
    double omega_bare = 0.0;  ///< bare quarter-wave frequency, rad/s
    double l_cav = 0.0;       ///< H
    double c_cav = 0.0;       ///< F
    double c_j = 0.0;         ///< F
    double l_j0 = 0.0;        ///< H, SQUID inductance at F=0
    double d = 0.0;           ///< m

    /// Throws InvalidArgument on negative fields or gamma0 != l_j0/l_cav.
    void validate() const;
    /// SQUID inductance L_J(F) = L_J(0)/|cos F|. Throws FluxSingularity for |cos F| <= 1e-6.
    [[nodiscard]] double l_j(double F) const;
    /// Copy with gamma0 and l_j0 replaced by their values at flux F.
    [[nodiscard]] DeviceModel at_flux(double F) const;
};

/// omega_bare / (1 + gamma0/|cos F|), valid for small participation ratio.
[[nodiscard]] double flux_resonance(const DeviceModel& dm, double F);

/// Smallest positive root x = k0 d of L_cav/L_J - C_J x^2/C_cav = x tan x on
/// (0, pi/2); returns k0 in 1/m. Throws RootNotBracketed when no sign change is found.
[[nodiscard]] double eigenmode_k0(const DeviceModel& dm, double F);
/// |lhs - rhs| of the eigenmode equation divided by the largest term magnitude.
[[nodiscard]] double eigenmode_residual(const DeviceModel& dm, double F, double k0);

/// Kerr shift of the fundamental mode (negative, rad/s). dm must already be at
/// the operating flux (see DeviceModel::at_flux) so that gamma0 is gamma(F).
[[nodiscard]] double kerr_from_mode(const DeviceModel& dm, double k0, double omega0);

/// Hanger resonance parameters; frequencies in Hz.
struct ResonanceFit {
    double f_r = 0.0;
    double q_l = 0.0;
    double q_c_abs = 0.0;
    double phi = 0.0;
    double a = 1.0;
    double alpha = 0.0;
    double tau = 0.0;  ///< s

    /// Total loss rate omega_r / Q_l in rad/s.
    [[nodiscard]] double kappa() const;
};

/// a e^{i alpha} e^{-2 pi i f tau} [1 - (Q_l/|Q_c|) e^{i phi} / (1 + 2 i Q_l (f/f_r - 1))].
[[nodiscard]] std::complex<double> s21_model(double f, const ResonanceFit& fit);

/// Circle fit (delay removal, algebraic circle, phase-angle fit) polished by
/// Levenberg-Marquardt; falls back to plain least squares seeded from the |S21|
/// minimum and 3 dB width. Throws InsufficientSpan for fewer than 20 points or a
/// span under 3 linewidths, FitDiverged when no resonance is present.
[[nodiscard]] ResonanceFit s21_fit(std::span<const double> freqs, std::span<const std::complex<double>> s21);

/// Bright-branch mean-field photon number max(0, (delta + sqrt(G^2 - kappa^2))/|U|);
/// 0 when G <= kappa. Throws InvalidArgument for U = 0.
[[nodiscard]] double meanfield_n(const PhysicalParams& pp);

struct PumpEstimate {
    double G = 0.0;
    double delta0 = 0.0;  ///< x-intercept of the bright-phase line
};

/// Line through (delta, <n>) in the bright phase; G = sqrt(delta0^2 + kappa^2).
/// Throws DegenerateFit for fewer than 3 points, constant delta or zero slope.
[[nodiscard]] PumpEstimate extract_g(std::span<const double> detunings, std::span<const double> n_mean,
                                     double kappa);

}  // namespace critsense
