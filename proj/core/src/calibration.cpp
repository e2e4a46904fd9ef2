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

#include "critsense/calibration.hpp"

#include <cmath>
#include <numbers>

#include "critsense/error.hpp"
#include "critsense/linear_fit.hpp"
#include "critsense/units.hpp"

namespace critsense {

namespace {

constexpr double kFluxCosFloor = 1e-6;
constexpr int kScanSteps = 10'000;

double abs_cos(double F) {
    const double c = std::abs(std::cos(F));
    if (!(c > kFluxCosFloor)) {
        throw Error(ErrorCode::FluxSingularity, "|cos F| <= 1e-6: SQUID inductance diverges");
    }
    return c;
}

struct EigenTerms {
    double inductive;
    double capacitive;
    double tangent;

    [[nodiscard]] double value() const { return inductive - capacitive - tangent; }
    [[nodiscard]] double scale() const {
        return std::max({std::abs(inductive), std::abs(capacitive), std::abs(tangent)});
    }
};

EigenTerms eigen_terms(const DeviceModel& dm, double lj, double x) {
    return {dm.l_cav / lj, dm.c_j * x * x / dm.c_cav, x * std::tan(x)};
}

void require_circuit(const DeviceModel& dm) {
    dm.validate();
    if (!(dm.l_cav > 0.0 && dm.c_cav > 0.0 && dm.l_j0 > 0.0 && dm.d > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "eigenmode needs l_cav, c_cav, l_j0 and d");
    }
}

}  // namespace

void DeviceModel::validate() const {
    for (double v : {gamma0, omega_bare, l_cav, c_cav, c_j, l_j0, d}) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw Error(ErrorCode::InvalidArgument, "device fields must be finite and non-negative");
        }
    }
    if (gamma0 > 0.0 && l_cav > 0.0 && l_j0 > 0.0 && std::abs(gamma0 - l_j0 / l_cav) > 1e-9 * gamma0) {
        throw Error(ErrorCode::InvalidArgument, "gamma0 disagrees with l_j0 / l_cav");
    }
}

double DeviceModel::l_j(double F) const { return l_j0 / abs_cos(F); }

DeviceModel DeviceModel::at_flux(double F) const {
    const double c = abs_cos(F);
    DeviceModel out = *this;
    out.gamma0 = gamma0 / c;
    out.l_j0 = l_j0 / c;
    return out;
}

double flux_resonance(const DeviceModel& dm, double F) {
    dm.validate();
    return dm.omega_bare / (1.0 + dm.gamma0 / abs_cos(F));
}

double eigenmode_k0(const DeviceModel& dm, double F) {
    require_circuit(dm);
    const double lj = dm.l_j(F);
    const double upper = std::numbers::pi / 2.0;
    // The equation times cos x has the same sign on (0, pi/2) and no pole, so
    // roots arbitrarily close to pi/2 (small L_J) stay bracketed.
    auto f = [&](double x) {
        const EigenTerms t = eigen_terms(dm, lj, x);
        return (t.inductive - t.capacitive) * std::cos(x) - x * std::sin(x);
    };

    // f(0) = L_cav/L_J > 0 and f(pi/2) = -pi/2; take the first sign change.
    double lo = 0.0;
    double flo = f(0.0);
    double hi = 0.0;
    bool found = false;
    for (int k = 1; k <= kScanSteps; ++k) {
        const double x = upper * k / kScanSteps;
        const double fx = f(x);
        if ((flo > 0.0) != (fx > 0.0)) {
            hi = x;
            found = true;
            break;
        }
        lo = x;
        flo = fx;
    }
    if (!found) {
        throw Error(ErrorCode::RootNotBracketed, "no sign change of the eigenmode equation below pi/2");
    }
    // Bisect down to adjacent doubles.
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) {
            break;
        }
        if ((f(mid) > 0.0) == (flo > 0.0)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    const double x = std::abs(f(lo)) <= std::abs(f(hi)) ? lo : hi;
    return x / dm.d;
}

double eigenmode_residual(const DeviceModel& dm, double F, double k0) {
    require_circuit(dm);
    const EigenTerms t = eigen_terms(dm, dm.l_j(F), k0 * dm.d);
    return std::abs(t.value()) / t.scale();
}

double kerr_from_mode(const DeviceModel& dm, double k0, double omega0) {
    dm.validate();
    if (!(dm.gamma0 > 0.0 && dm.l_cav > 0.0 && dm.c_cav > 0.0 && dm.d > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "Kerr formula needs gamma0, l_cav, c_cav and d");
    }
    const double x = k0 * dm.d;
    const double c2 = std::cos(x) * std::cos(x);
    const double m0 = 1.0 + std::sin(2.0 * x) / (2.0 * x) + 2.0 * dm.c_j / dm.c_cav * c2;
    const double shape = c2 / (x * x * m0);
    const double phi0 = units::kReducedFluxQuantum;
    return -(units::kHbar * omega0 * omega0 * dm.l_cav) / (2.0 * dm.gamma0 * phi0 * phi0) * shape * shape;
}

double ResonanceFit::kappa() const { return units::hz(f_r) / q_l; }

std::complex<double> s21_model(double f, const ResonanceFit& fit) {
    using namespace std::complex_literals;
    const std::complex<double> env = fit.a * std::exp(1i * fit.alpha) * std::exp(-2.0i * std::numbers::pi * f * fit.tau);
    const std::complex<double> dip =
        (fit.q_l / fit.q_c_abs) * std::exp(1i * fit.phi) / (1.0 + 2.0i * fit.q_l * (f / fit.f_r - 1.0));
    return env * (1.0 - dip);
}

double meanfield_n(const PhysicalParams& pp) {
    if (pp.U == 0.0) {
        throw Error(ErrorCode::InvalidArgument, "mean-field photon number needs U != 0");
    }
    if (!(pp.G > pp.kappa)) {
        return 0.0;
    }
    return std::max(0.0, (pp.delta + std::sqrt(pp.G * pp.G - pp.kappa * pp.kappa)) / std::abs(pp.U));
}

PumpEstimate extract_g(std::span<const double> detunings, std::span<const double> n_mean, double kappa) {
    if (detunings.size() < 3) {
        throw Error(ErrorCode::DegenerateFit, "need at least 3 bright-phase points");
    }
    const LineFit fit = fit_line(detunings, n_mean);
    if (!(std::abs(fit.slope) > 0.0)) {
        throw Error(ErrorCode::DegenerateFit, "photon number does not vary with detuning");
    }
    const double delta0 = fit.x_intercept();
    return {std::sqrt(delta0 * delta0 + kappa * kappa), delta0};
}

}  // namespace critsense
