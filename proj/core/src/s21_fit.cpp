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

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/tools/minima.hpp>
#include <unsupported/Eigen/LevenbergMarquardt>
#include <unsupported/Eigen/NumericalDiff>

#include "critsense/calibration.hpp"
#include "critsense/error.hpp"

namespace critsense {

namespace {

using cd = std::complex<double>;
constexpr double kPi = std::numbers::pi;
constexpr int kMinPoints = 20;
constexpr double kMinSpanLinewidths = 3.0;
/// Normalized circle radius below which the data carry no resonance.
constexpr double kMinRelativeRadius = 1e-3;

double wrap(double angle) { return std::remainder(angle, 2.0 * kPi); }

struct Circle {
    cd center;
    double radius = 0.0;
    double rms = 0.0;
};

/// Algebraic (Kasa) circle fit: x^2 + y^2 + D x + E y + F = 0 in least squares.
std::optional<Circle> fit_circle(const std::vector<cd>& z) {
    const auto n = static_cast<Eigen::Index>(z.size());
    Eigen::MatrixXd a(n, 3);
    Eigen::VectorXd b(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        a(i, 0) = z[i].real();
        a(i, 1) = z[i].imag();
        a(i, 2) = 1.0;
        b(i) = -std::norm(z[i]);
    }
    const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
    if (qr.rank() < 3) {
        return std::nullopt;
    }
    const Eigen::Vector3d s = qr.solve(b);
    Circle c;
    c.center = {-s(0) / 2.0, -s(1) / 2.0};
    const double r2 = std::norm(c.center) - s(2);
    if (!(r2 > 0.0)) {
        return std::nullopt;
    }
    c.radius = std::sqrt(r2);
    double ss = 0.0;
    for (const cd& p : z) {
        const double d = std::abs(p - c.center) - c.radius;
        ss += d * d;
    }
    c.rms = std::sqrt(ss / static_cast<double>(z.size()));
    return c;
}

std::vector<cd> remove_delay(std::span<const double> f, std::span<const cd> s, double tau) {
    std::vector<cd> out(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        out[i] = s[i] * std::polar(1.0, 2.0 * kPi * f[i] * tau);
    }
    return out;
}

/// Phase slope of the outer tenth on each side, as a delay.
double edge_delay(std::span<const double> f, std::span<const cd> s) {
    const std::size_t n = f.size();
    const std::size_t k = std::max<std::size_t>(3, n / 10);
    auto slope = [&](std::size_t begin) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        double prev = std::arg(s[begin]);
        double unwrapped = prev;
        for (std::size_t i = begin; i < begin + k; ++i) {
            const double ph = std::arg(s[i]);
            unwrapped += wrap(ph - prev);
            prev = ph;
            const double x = f[i] - f[begin];
            sx += x;
            sy += unwrapped;
            sxx += x * x;
            sxy += x * unwrapped;
        }
        const double m = static_cast<double>(k);
        const double den = m * sxx - sx * sx;
        return den > 0.0 ? (m * sxy - sx * sy) / den : 0.0;
    };
    const double mean_slope = 0.5 * (slope(0) + slope(n - k));
    return -mean_slope / (2.0 * kPi);
}

struct Functor {
    using Scalar = double;
    enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };
    using InputType = Eigen::VectorXd;
    using ValueType = Eigen::VectorXd;
    using JacobianType = Eigen::MatrixXd;
    using QRSolver = Eigen::ColPivHouseholderQR<JacobianType>;

    int n_inputs;
    int n_values;
    [[nodiscard]] int inputs() const { return n_inputs; }
    [[nodiscard]] int values() const { return n_values; }
};

/// theta(f) = theta0 + 2 atan(2 Q_l (1 - f/f_r)) about the circle center.
struct PhaseFunctor : Functor {
    std::span<const double> f;
    std::vector<double> angle;
    double f0;
    double width0;

    int operator()(const Eigen::VectorXd& p, Eigen::VectorXd& r) const {
        const double theta0 = p(0);
        const double fr = f0 + p(1) * width0;
        const double ql = (f0 / width0) * std::exp(p(2));
        for (std::size_t i = 0; i < f.size(); ++i) {
            r(static_cast<Eigen::Index>(i)) = wrap(angle[i] - theta0 - 2.0 * std::atan(2.0 * ql * (1.0 - f[i] / fr)));
        }
        return 0;
    }
};

/// Full complex model in scaled coordinates around a reference fit.
struct ModelFunctor : Functor {
    std::span<const double> f;
    std::span<const cd> s;
    ResonanceFit ref;
    double span;

    [[nodiscard]] ResonanceFit unpack(const Eigen::VectorXd& p) const {
        ResonanceFit fit = ref;
        const double width = ref.f_r / ref.q_l;
        fit.f_r = ref.f_r + p(0) * width;
        fit.q_l = ref.q_l * std::exp(p(1));
        fit.q_c_abs = ref.q_c_abs * std::exp(p(2));
        fit.phi = ref.phi + p(3);
        fit.a = ref.a * std::exp(p(4));
        fit.alpha = ref.alpha + p(5);
        fit.tau = ref.tau + p(6) / (2.0 * kPi * span);
        return fit;
    }

    int operator()(const Eigen::VectorXd& p, Eigen::VectorXd& r) const {
        const ResonanceFit fit = unpack(p);
        for (std::size_t i = 0; i < f.size(); ++i) {
            const cd d = (s21_model(f[i], fit) - s[i]) / ref.a;
            r(static_cast<Eigen::Index>(2 * i)) = d.real();
            r(static_cast<Eigen::Index>(2 * i + 1)) = d.imag();
        }
        return 0;
    }
};

double cost(std::span<const double> f, std::span<const cd> s, const ResonanceFit& fit) {
    double ss = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        ss += std::norm(s21_model(f[i], fit) - s[i]);
    }
    return ss;
}

bool plausible(const ResonanceFit& fit) {
    return std::isfinite(fit.f_r) && fit.f_r > 0.0 && std::isfinite(fit.q_l) && fit.q_l > 0.0 &&
           std::isfinite(fit.q_c_abs) && fit.q_c_abs > 0.0 && std::isfinite(fit.a) && fit.a > 0.0 &&
           std::isfinite(fit.phi) && std::isfinite(fit.alpha) && std::isfinite(fit.tau);
}

ResonanceFit polish(std::span<const double> f, std::span<const cd> s, const ResonanceFit& start) {
    ModelFunctor fn;
    fn.n_inputs = 7;
    fn.n_values = static_cast<int>(2 * f.size());
    fn.f = f;
    fn.s = s;
    fn.ref = start;
    fn.span = f.back() - f.front();
    Eigen::NumericalDiff<ModelFunctor, Eigen::Central> numdiff(fn, 1e-9);
    Eigen::LevenbergMarquardt<Eigen::NumericalDiff<ModelFunctor, Eigen::Central>> lm(numdiff);
    lm.setXtol(1e-14);
    lm.setFtol(1e-14);
    lm.setMaxfev(4000);
    Eigen::VectorXd p = Eigen::VectorXd::Zero(7);
    lm.minimize(p);
    const ResonanceFit out = fn.unpack(p);
    if (plausible(out) && cost(f, s, out) <= cost(f, s, start)) {
        return out;
    }
    return start;
}

/// Center frequency and 3 dB width of the deviation from the off-resonant baseline.
struct DipEstimate {
    std::size_t index;
    double f_r;
    double width;
};

DipEstimate dip_from_deviation(std::span<const double> f, const std::vector<double>& dev2) {
    const auto it = std::max_element(dev2.begin(), dev2.end());
    const auto k = static_cast<std::size_t>(it - dev2.begin());
    const double half = 0.5 * *it;
    std::size_t lo = k;
    while (lo > 0 && dev2[lo - 1] >= half) {
        --lo;
    }
    std::size_t hi = k;
    while (hi + 1 < dev2.size() && dev2[hi + 1] >= half) {
        ++hi;
    }
    const double step = (f.back() - f.front()) / static_cast<double>(f.size() - 1);
    const double width = std::max(f[hi] - f[lo], step);
    return {k, f[k], width};
}

std::optional<ResonanceFit> circle_method(std::span<const double> f, std::span<const cd> s, double tau0) {
    const double span = f.back() - f.front();
    // Refine the delay by minimizing the circle residual around the edge estimate.
    const double half_window = 1.0 / (4.0 * span);
    auto residual = [&](double tau) {
        const auto c = fit_circle(remove_delay(f, s, tau));
        return c ? c->rms / c->radius : 1e300;
    };
    const auto [tau, best] =
        boost::math::tools::brent_find_minima(residual, tau0 - half_window, tau0 + half_window, 40);
    if (!(best < 1e299)) {
        return std::nullopt;
    }
    const std::vector<cd> z = remove_delay(f, s, tau);
    const auto circle = fit_circle(z);
    if (!circle) {
        return std::nullopt;
    }

    const cd baseline = 0.5 * (z.front() + z.back());
    std::vector<double> dev2(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
        dev2[i] = std::norm(z[i] - baseline);
    }
    const DipEstimate dip = dip_from_deviation(f, dev2);

    PhaseFunctor fn;
    fn.n_inputs = 3;
    fn.n_values = static_cast<int>(f.size());
    fn.f = f;
    fn.f0 = dip.f_r;
    fn.width0 = dip.width;
    fn.angle.resize(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        fn.angle[i] = std::arg(z[i] - circle->center);
    }
    Eigen::VectorXd p(3);
    p << fn.angle[dip.index], 0.0, 0.0;
    Eigen::NumericalDiff<PhaseFunctor, Eigen::Central> numdiff(fn, 1e-9);
    Eigen::LevenbergMarquardt<Eigen::NumericalDiff<PhaseFunctor, Eigen::Central>> lm(numdiff);
    lm.setXtol(1e-14);
    lm.setFtol(1e-14);
    lm.setMaxfev(2000);
    lm.minimize(p);

    const double theta0 = p(0);
    ResonanceFit fit;
    fit.f_r = fn.f0 + p(1) * fn.width0;
    fit.q_l = (fn.f0 / fn.width0) * std::exp(p(2));
    fit.tau = tau;
    const cd off = circle->center + std::polar(circle->radius, theta0 + kPi);
    fit.a = std::abs(off);
    fit.alpha = std::arg(off);
    const cd cn = circle->center / off;
    const double rn = circle->radius / fit.a;
    if (!(rn > kMinRelativeRadius)) {
        return std::nullopt;
    }
    fit.q_c_abs = fit.q_l / (2.0 * rn);
    fit.phi = std::arg(1.0 - cn);
    if (!plausible(fit)) {
        return std::nullopt;
    }
    return fit;
}

ResonanceFit plain_start(std::span<const double> f, std::span<const cd> s, double tau0) {
    const std::vector<cd> z = remove_delay(f, s, tau0);
    const double a = 0.5 * (std::abs(z.front()) + std::abs(z.back()));
    std::vector<double> dip2(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
        dip2[i] = a * a - std::norm(z[i]);
    }
    const DipEstimate dip = dip_from_deviation(f, dip2);
    ResonanceFit fit;
    fit.f_r = dip.f_r;
    fit.q_l = dip.f_r / dip.width;
    fit.a = a;
    fit.alpha = std::arg(0.5 * (z.front() + z.back()));
    fit.tau = tau0;
    const double depth = std::clamp(1.0 - std::abs(z[dip.index]) / a, 1e-3, 1.0);
    fit.q_c_abs = fit.q_l / depth;
    fit.phi = 0.0;
    return fit;
}

}  // namespace

ResonanceFit s21_fit(std::span<const double> freqs, std::span<const std::complex<double>> s21) {
    if (freqs.size() != s21.size()) {
        throw Error(ErrorCode::ShapeError, "frequency and S21 arrays differ in length");
    }
    if (freqs.size() < static_cast<std::size_t>(kMinPoints)) {
        throw Error(ErrorCode::InsufficientSpan, "need at least 20 frequency points");
    }
    for (std::size_t i = 1; i < freqs.size(); ++i) {
        if (!(freqs[i] > freqs[i - 1])) {
            throw Error(ErrorCode::InvalidArgument, "frequencies must be strictly ascending");
        }
    }
    const double tau0 = edge_delay(freqs, s21);

    // Points that all coincide after delay removal carry no resonance.
    {
        const std::vector<cd> z = remove_delay(freqs, s21, tau0);
        cd mean = 0.0;
        for (const cd& p : z) {
            mean += p;
        }
        mean /= static_cast<double>(z.size());
        double spread = 0.0;
        for (const cd& p : z) {
            spread = std::max(spread, std::abs(p - mean));
        }
        if (!(spread > kMinRelativeRadius * std::abs(mean))) {
            throw Error(ErrorCode::FitDiverged, "no resonance feature in the data");
        }
    }

    std::optional<ResonanceFit> fit = circle_method(freqs, s21, tau0);
    ResonanceFit result = fit ? polish(freqs, s21, *fit) : polish(freqs, s21, plain_start(freqs, s21, tau0));
    if (fit) {
        // Keep whichever start reaches the lower residual.
        const ResonanceFit alt = polish(freqs, s21, plain_start(freqs, s21, tau0));
        if (cost(freqs, s21, alt) < cost(freqs, s21, result)) {
            result = alt;
        }
    }
    if (!plausible(result) || result.q_l / result.q_c_abs < 2.0 * kMinRelativeRadius) {
        throw Error(ErrorCode::FitDiverged, "least squares did not settle on a resonance");
    }
    const double span = freqs.back() - freqs.front();
    if (span < kMinSpanLinewidths * result.f_r / result.q_l) {
        throw Error(ErrorCode::InsufficientSpan, "frequency span covers fewer than 3 linewidths");
    }
    return result;
}

}  // namespace critsense
