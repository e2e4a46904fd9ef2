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

#include "critsense_cli/runner.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include <Eigen/Core>
#include <boost/version.hpp>

#include "critsense/calibration.hpp"
#include "critsense/classical.hpp"
#include "critsense/error.hpp"
#include "critsense/measurement.hpp"
#include "critsense/metrology.hpp"
#include "critsense/units.hpp"

#ifndef CRITSENSE_VERSION
#define CRITSENSE_VERSION "unknown"
#endif

namespace critsense::cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        out += c == '"' ? "\"\"" : std::string(1, c == '\n' ? ' ' : c);
    }
    return out + "\"";
}

class CsvFile {
public:
    CsvFile(RunResult& result, const std::filesystem::path& path, const std::string& header)
        : out_(path, std::ios::binary) {
        if (!out_) {
            throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
        }
        result.files.push_back(path);
        out_ << header << '\n';
    }

    template <typename... Ts>
    void row(const Ts&... cells) {
        bool first = true;
        ((out_ << (first ? "" : ",") << cell(cells), first = false), ...);
        out_ << '\n';
    }

private:
    static std::string cell(double v) { return format_double(v); }
    static std::string cell(int v) { return std::to_string(v); }
    static std::string cell(std::size_t v) { return std::to_string(v); }
    static std::string cell(bool v) { return v ? "1" : "0"; }
    static std::string cell(const std::string& v) { return csv_escape(v); }

    std::ofstream out_;
};

struct PointError {
    std::string context;
    std::size_t index;
    double delta_hz;
    std::string code;
    std::string message;
};

void write_errors(RunResult& result, const std::filesystem::path& dir, const std::vector<PointError>& errors) {
    CsvFile csv(result, dir / "errors.csv", "context,index,delta_hz,code,message");
    for (const auto& e : errors) {
        csv.row(e.context, e.index, e.delta_hz, e.code, e.message);
    }
    result.point_errors = errors.size();
}

void write_manifest(RunResult& result, const std::filesystem::path& dir, const RunConfig& config) {
    const auto path = dir / "manifest.txt";
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
    }
    result.files.push_back(path);
    out << "# critsense " << CRITSENSE_VERSION << '\n';
    out << "# eigen " << EIGEN_WORLD_VERSION << '.' << EIGEN_MAJOR_VERSION << '.' << EIGEN_MINOR_VERSION << '\n';
    out << "# boost " << BOOST_VERSION / 100000 << '.' << BOOST_VERSION / 100 % 1000 << '.' << BOOST_VERSION % 100
        << '\n';
    out << "# threads " << config.threads << '\n';
    out << "# frequencies in rad/s, times in s\n";
    out << describe(config);
}

ReducedParams reduced_from(const RunConfig& cfg, double L) {
    ReducedParams rp;
    rp.tilde_G = cfg.real("G");
    rp.tilde_U = cfg.real("U");
    rp.tilde_kappa = cfg.real("kappa");
    rp.L = L;
    rp.scaling = cfg.text("scaling") == "II" ? Scaling::II : Scaling::I;
    rp.validate();
    return rp;
}

MeasurementModel model_from(const RunConfig& cfg, const ReducedParams& rp) {
    MeasurementModel model = MeasurementModel::experiment(to_physical(rp).kappa_ext, cfg.real_or("sigma2", 0.25));
    model.gain = cfg.real_or("gain", model.gain);
    model.noise_free = cfg.boolean_or("noise_free", false);
    model.delta_t = cfg.real_or("delta_t", model.delta_t);
    model.total_time = cfg.real_or("total_time", model.total_time);
    model.j_ss_time = cfg.real_or("j_ss_time", model.j_ss_time);
    model.validate();
    return model;
}

ErrorBarForm form_from(const RunConfig& cfg) {
    return cfg.has("error_form") && cfg.text("error_form") == "sum_of_deviations" ? ErrorBarForm::SumOfDeviations
                                                                                   : ErrorBarForm::AsPrinted;
}

SweepOptions sweep_options(const RunConfig& cfg) {
    SweepOptions opts;
    opts.threads = cfg.threads;
    opts.min_dim = static_cast<int>(cfg.integer_or("min_dim", opts.min_dim));
    opts.max_dim = static_cast<int>(cfg.integer_or("max_dim", opts.max_dim));
    opts.repetitions = cfg.real_or("repetitions", opts.repetitions);
    opts.epsilon_err = cfg.real_or("epsilon_err", opts.epsilon_err);
    opts.error_form = form_from(cfg);
    opts.compute_autocorr = cfg.boolean_or("autocorr", false);
    return opts;
}

std::vector<double> detuning_grid(const RunConfig& cfg) {
    return uniform_grid(cfg.real("delta_lo"), cfg.real("delta_hi"), cfg.real_or("delta_step", units::khz(10.0)));
}

void write_curve(RunResult& result, const std::filesystem::path& path, const PrecisionCurve& curve) {
    CsvFile csv(result, path, "delta_hz,n_mean,n_var,d2n,precision,precision_err");
    for (std::size_t i = 0; i < curve.size(); ++i) {
        csv.row(units::to_hz(curve.detunings[i]), curve.n_mean[i], curve.n_var[i], curve.d2n[i], curve.precision[i],
                curve.precision_err[i]);
    }
}

void collect_failures(std::vector<PointError>& errors, const std::string& context, const PrecisionCurve& curve) {
    for (const auto& f : curve.failures) {
        errors.push_back({context, f.index, units::to_hz(f.tilde_delta), f.code, f.message});
    }
}

std::vector<double> to_hz(const std::vector<double>& v) {
    std::vector<double> out(v.size());
    std::transform(v.begin(), v.end(), out.begin(), [](double x) { return units::to_hz(x); });
    return out;
}

void write_text(RunResult& result, const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
    }
    out << text;
    result.files.push_back(path);
}

void run_sweep(const RunConfig& cfg, RunResult& result, std::vector<PointError>& errors, std::ostream& log) {
    const ReducedParams rp = reduced_from(cfg, cfg.real("L"));
    const auto grid = detuning_grid(cfg);
    const PrecisionCurve curve = sweep(rp, grid, model_from(cfg, rp), sweep_options(cfg));
    write_curve(result, cfg.output_dir / "curve.csv", curve);
    collect_failures(errors, "sweep", curve);
    if (cfg.boolean_or("svg", false)) {
        write_text(result, cfg.output_dir / "curve.svg",
                   svg_plot("precision", "detuning / 2pi (Hz)", {{"precision", to_hz(curve.detunings), curve.precision}}));
    }
    log << "sweep: " << curve.size() << " points, delta_max/2pi = " << format_double(units::to_hz(curve.delta_max))
        << " Hz, p_max = " << format_double(curve.p_max) << '\n';
}

void run_scaling(const RunConfig& cfg, RunResult& result, std::vector<PointError>& errors, std::ostream& log) {
    const auto grid = detuning_grid(cfg);
    const SweepOptions opts = sweep_options(cfg);
    std::vector<double> ls;
    std::vector<double> pmax;
    std::vector<PrecisionCurve> curves;
    std::vector<ReducedParams> rps;
    std::vector<Series> series;
    for (const double L : cfg.list("L_values")) {
        const ReducedParams rp = reduced_from(cfg, L);
        PrecisionCurve curve = sweep(rp, grid, model_from(cfg, rp), opts);
        const std::string tag = "L" + format_double(L);
        write_curve(result, cfg.output_dir / ("curve_" + tag + ".csv"), curve);
        collect_failures(errors, "scaling_" + tag, curve);
        series.push_back({tag, to_hz(curve.detunings), curve.precision});
        if (std::isfinite(curve.p_max) && curve.p_max > 0.0) {
            ls.push_back(L);
            pmax.push_back(curve.p_max);
        }
        curves.push_back(std::move(curve));
        rps.push_back(rp);
        log << "scaling: L = " << format_double(L) << " done\n";
    }
    {
        CsvFile csv(result, cfg.output_dir / "beta.csv", "L,p_max,delta_max_hz,delta_c_hz");
        std::vector<double> tilde_c(curves.size(), kNaN);
        try {
            const auto gaps = delta_max_gap(curves, rps);
            for (std::size_t i = 0; i < gaps.size(); ++i) {
                tilde_c[i] = gaps[i].tilde_delta_c;
            }
        } catch (const Error& e) {
            errors.push_back({"delta_c", 0, kNaN, std::string(to_string(e.code())), e.what()});
        }
        for (std::size_t i = 0; i < curves.size(); ++i) {
            csv.row(rps[i].L, curves[i].p_max, units::to_hz(curves[i].delta_max), units::to_hz(tilde_c[i]));
        }
    }
    CsvFile fit_csv(result, cfg.output_dir / "beta_fit.csv", "beta,std_error,points");
    try {
        const BetaFit fit = fit_beta(ls, pmax);
        fit_csv.row(fit.beta, fit.std_error, ls.size());
        log << "scaling: beta = " << format_double(fit.beta) << " +- " << format_double(fit.std_error) << '\n';
    } catch (const Error& e) {
        fit_csv.row(kNaN, kNaN, ls.size());
        errors.push_back({"fit_beta", 0, kNaN, std::string(to_string(e.code())), e.what()});
    }
    if (cfg.boolean_or("svg", false)) {
        write_text(result, cfg.output_dir / "curves.svg", svg_plot("precision", "detuning / 2pi (Hz)", series));
    }
}

PowerMoments point_moments(const ReducedParams& rp, const MeasurementModel& model, const RunConfig& cfg) {
    const PhysicalParams pp = to_physical(rp);
    const auto ss = steady_state_adaptive(pp, {}, static_cast<int>(cfg.integer_or("min_dim", 30)),
                                          static_cast<int>(cfg.integer_or("max_dim", 400)));
    double s = 1.0;
    if (cfg.boolean_or("autocorr", false)) {
        s = autocorr_scale_factor(liouvillian(pp, ss.rho.space), ss.rho, model);
    }
    return output_moments(observables(ss.rho), s, model);
}

int trace_count(const RunConfig& cfg, std::int64_t fallback) {
    const auto m = cfg.integer_or("traces", fallback);
    if (m < 1 || m > std::numeric_limits<int>::max()) {
        throw Error(ErrorCode::InvalidArgument, "traces must be a positive count");
    }
    return static_cast<int>(m);
}

void run_precision(const RunConfig& cfg, RunResult& result, std::ostream& log) {
    const ReducedParams base = reduced_from(cfg, cfg.real("L"));
    const MeasurementModel model = model_from(cfg, base);
    const double delta = cfg.real("delta");
    const double eps = cfg.real_or("delta_step", units::khz(5.0));
    const int m = trace_count(cfg, 100000);

    const PowerMoments ma = point_moments(base.at_detuning(delta), model, cfg);
    const PowerMoments mb = point_moments(base.at_detuning(delta + eps), model, cfg);
    const double analytic = pair_precision(ma, mb, eps);

    const TraceEnsemble ta = synthesize_traces(ma, model, m, derive_seed(cfg.seed, 0));
    const TraceEnsemble tb = synthesize_traces(mb, model, m, derive_seed(cfg.seed, 1));
    const double eps_err = cfg.real_or("epsilon_err", units::khz(1.0)) / base.detuning_scale();
    const PairPrecision pp = estimate_precision_pair(ta, tb, eps, eps_err, form_from(cfg));

    {
        CsvFile csv(result, cfg.output_dir / "precision.csv", "bin,t_start_s,precision,precision_err,zero_signal");
        for (std::size_t j = 0; j < pp.precision.size(); ++j) {
            csv.row(j, static_cast<double>(j) * model.delta_t, pp.precision[j], pp.precision_err[j],
                    static_cast<bool>(pp.zero_signal[j]));
        }
    }
    CsvFile csv(result, cfg.output_dir / "precision_summary.csv",
                "delta_hz,epsilon_hz,analytic,aggregate,aggregate_err,first_steady_bin");
    csv.row(units::to_hz(delta), units::to_hz(eps), analytic, pp.aggregate, pp.aggregate_err, pp.first_steady_bin);
    log << "precision: analytic " << format_double(analytic) << ", estimated " << format_double(pp.aggregate)
        << " +- " << format_double(pp.aggregate_err) << '\n';
}

void write_moments(RunResult& result, const std::filesystem::path& path, const std::vector<PowerMoments>& moments) {
    CsvFile csv(result, path, "bin,n_out_mean,n_out_var");
    for (std::size_t j = 0; j < moments.size(); ++j) {
        csv.row(j, moments[j].n_out_mean, moments[j].n_out_var);
    }
}

void run_traces(const RunConfig& cfg, RunResult& result, std::ostream& log) {
    if (cfg.has("ingest")) {
        MeasurementModel model;
        model.kappa_ext = 1.0;
        const TraceEnsemble te = ingest_traces(cfg.text("ingest"), model);
        write_moments(result, cfg.output_dir / "moments.csv", estimate_moments(te));
        log << "traces: ingested m = " << te.m() << ", j = " << te.j() << '\n';
        return;
    }
    const ReducedParams rp = reduced_from(cfg, cfg.real("L")).at_detuning(cfg.real("delta"));
    const MeasurementModel model = model_from(cfg, rp);
    const PowerMoments target = point_moments(rp, model, cfg);
    const TraceEnsemble te = synthesize_traces(target, model, trace_count(cfg, 1000), derive_seed(cfg.seed, 0));
    const auto path = cfg.output_dir / "traces.csv";
    export_traces(path, te);
    result.files.push_back(path);
    write_moments(result, cfg.output_dir / "moments.csv", estimate_moments(te));
    log << "traces: m = " << te.m() << ", j = " << te.j() << ", target <N> = " << format_double(target.n_out_mean)
        << '\n';
}

std::vector<std::pair<double, std::complex<double>>> read_s21(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::IoError, "cannot open " + path.string());
    }
    std::vector<std::pair<double, std::complex<double>>> rows;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#' || line.rfind("f_hz", 0) == 0) {
            continue;
        }
        std::istringstream ss(line);
        double f = 0;
        double re = 0;
        double im = 0;
        char c1 = 0;
        char c2 = 0;
        if (!(ss >> f >> c1 >> re >> c2 >> im) || c1 != ',' || c2 != ',') {
            throw Error(ErrorCode::ParseError, "expected f_hz,re,im", line_no);
        }
        rows.emplace_back(f, std::complex<double>(re, im));
    }
    return rows;
}

void run_calibrate(const RunConfig& cfg, RunResult& result, std::vector<PointError>& errors, std::ostream& log) {
    if (cfg.has("flux")) {
        DeviceModel dm;
        dm.gamma0 = cfg.real("gamma0");
        dm.omega_bare = cfg.real("omega_bare");
        dm.l_cav = cfg.real_or("l_cav", 0.0);
        dm.c_cav = cfg.real_or("c_cav", 0.0);
        dm.c_j = cfg.real_or("c_j", 0.0);
        dm.d = cfg.real_or("d", 0.0);
        dm.l_j0 = dm.gamma0 * dm.l_cav;
        const bool circuit = dm.l_cav > 0.0 && dm.c_cav > 0.0 && dm.d > 0.0;
        CsvFile csv(result, cfg.output_dir / "flux.csv", "F,omega_r_hz,k0d,U_hz");
        const auto& flux = cfg.list("flux");
        for (std::size_t i = 0; i < flux.size(); ++i) {
            const double F = flux[i];
            double omega = kNaN;
            double k0d = kNaN;
            double U = kNaN;
            try {
                omega = flux_resonance(dm, F);
                if (circuit) {
                    const double k0 = eigenmode_k0(dm, F);
                    k0d = k0 * dm.d;
                    U = kerr_from_mode(dm.at_flux(F), k0, omega);
                }
            } catch (const Error& e) {
                errors.push_back({"flux", i, kNaN, std::string(to_string(e.code())), e.what()});
            }
            csv.row(F, units::to_hz(omega), k0d, units::to_hz(U));
        }
        log << "calibrate: " << flux.size() << " flux points\n";
    }
    if (cfg.has("s21_file")) {
        const auto rows = read_s21(cfg.text("s21_file"));
        std::vector<double> f(rows.size());
        std::vector<std::complex<double>> s(rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            f[i] = rows[i].first;
            s[i] = rows[i].second;
        }
        const ResonanceFit fit = s21_fit(f, s);
        CsvFile csv(result, cfg.output_dir / "s21_fit.csv", "f_r_hz,q_l,q_c_abs,phi,a,alpha,tau_s,kappa_hz");
        csv.row(fit.f_r, fit.q_l, fit.q_c_abs, fit.phi, fit.a, fit.alpha, fit.tau, units::to_hz(fit.kappa()));
        log << "calibrate: f_r = " << format_double(fit.f_r) << " Hz, Q_l = " << format_double(fit.q_l) << '\n';
    }
}

void run_classical(const RunConfig& cfg, RunResult& result, std::ostream& log) {
    ClassicalSetup setup;
    setup.kappa_ext = cfg.real("kappa_ext");
    setup.alpha2 = cfg.real("alpha2");
    // Without an explicit bandwidth-time product the timed bound reduces to the single-mode one.
    setup.time = cfg.real_or("time", 1.0);
    setup.bandwidth = cfg.real_or("bandwidth", units::kTwoPi / setup.time);
    const auto grid = uniform_grid(cfg.real("delta_p_lo"), cfg.real("delta_p_hi"), cfg.real("delta_p_step"));
    CsvFile csv(result, cfg.output_dir / "classical.csv", "delta_p_hz,precision,precision_timed,homodyne_slope");
    std::vector<double> p(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        setup.delta_p = grid[i];
        p[i] = classical_precision(setup);
        csv.row(units::to_hz(grid[i]), p[i], classical_precision_timed(setup), homodyne_slope(setup));
    }
    const auto best = static_cast<std::size_t>(std::max_element(p.begin(), p.end()) - p.begin());
    log << "classical: maximum at delta_p/2pi = " << format_double(units::to_hz(grid[best])) << " Hz\n";
    if (cfg.boolean_or("svg", false)) {
        write_text(result, cfg.output_dir / "classical.svg",
                   svg_plot("classical bound", "drive detuning / 2pi (Hz)", {{"precision", to_hz(grid), p}}));
    }
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
    // splitmix64 finalizer over (seed, stream).
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

RunResult run(const RunConfig& config, std::ostream& log) {
    RunResult result;
    std::filesystem::create_directories(config.output_dir);
    write_manifest(result, config.output_dir, config);
    std::vector<PointError> errors;
    try {
        switch (config.command) {
            case Command::Sweep: run_sweep(config, result, errors, log); break;
            case Command::Scaling: run_scaling(config, result, errors, log); break;
            case Command::Precision: run_precision(config, result, log); break;
            case Command::Traces: run_traces(config, result, log); break;
            case Command::Calibrate: run_calibrate(config, result, errors, log); break;
            case Command::Classical: run_classical(config, result, log); break;
        }
    } catch (const Error& e) {
        errors.push_back({"run", 0, kNaN, std::string(to_string(e.code())), e.what()});
        write_errors(result, config.output_dir, errors);
        throw;
    }
    write_errors(result, config.output_dir, errors);
    result.exit_code = errors.empty() ? kExitSuccess : kExitDomainError;
    return result;
}

std::string svg_plot(const std::string& title, const std::string& x_label, const std::vector<Series>& series) {
    constexpr double kW = 720;
    constexpr double kH = 440;
    constexpr double kLeft = 70;
    constexpr double kRight = 20;
    constexpr double kTop = 40;
    constexpr double kBottom = 50;
    constexpr std::array<const char*, 6> kColors = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"};

    double x0 = std::numeric_limits<double>::infinity();
    double x1 = -x0;
    double y0 = x0;
    double y1 = -x0;
    for (const auto& s : series) {
        for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
            if (std::isfinite(s.x[i]) && std::isfinite(s.y[i])) {
                x0 = std::min(x0, s.x[i]);
                x1 = std::max(x1, s.x[i]);
                y0 = std::min(y0, s.y[i]);
                y1 = std::max(y1, s.y[i]);
            }
        }
    }
    if (!(x1 > x0)) {
        x0 -= 1.0;
        x1 += 1.0;
    }
    if (!(y1 > y0)) {
        y0 -= 1.0;
        y1 += 1.0;
    }
    auto px = [&](double x) { return kLeft + (x - x0) / (x1 - x0) * (kW - kLeft - kRight); };
    auto py = [&](double y) { return kH - kBottom - (y - y0) / (y1 - y0) * (kH - kTop - kBottom); };

    std::ostringstream out;
    out << R"(<svg xmlns="http://www.w3.org/2000/svg" width=")" << kW << R"(" height=")" << kH
        << R"(" font-family="sans-serif" font-size="12">)" << '\n';
    out << R"(<rect width="100%" height="100%" fill="white"/>)" << '\n';
    out << R"(<text x=")" << kW / 2 << R"(" y="20" text-anchor="middle">)" << title << "</text>\n";
    out << R"(<rect x=")" << kLeft << R"(" y=")" << kTop << R"(" width=")" << kW - kLeft - kRight
        << R"(" height=")" << kH - kTop - kBottom << R"(" fill="none" stroke="black"/>)" << '\n';
    out << R"(<text x=")" << kW / 2 << R"(" y=")" << kH - 12 << R"(" text-anchor="middle">)" << x_label
        << "</text>\n";
    out << R"(<text x=")" << kLeft << R"(" y=")" << kH - kBottom + 16 << R"(" text-anchor="middle">)"
        << format_double(x0) << "</text>\n";
    out << R"(<text x=")" << kW - kRight << R"(" y=")" << kH - kBottom + 16 << R"(" text-anchor="middle">)"
        << format_double(x1) << "</text>\n";
    out << R"(<text x=")" << kLeft - 4 << R"(" y=")" << kH - kBottom << R"(" text-anchor="end">)"
        << format_double(y0) << "</text>\n";
    out << R"(<text x=")" << kLeft - 4 << R"(" y=")" << kTop + 10 << R"(" text-anchor="end">)" << format_double(y1)
        << "</text>\n";
    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        const char* color = kColors[k % kColors.size()];
        std::string points;
        auto flush = [&] {
            if (!points.empty()) {
                out << R"(<polyline fill="none" stroke=")" << color << R"(" points=")" << points << R"("/>)" << '\n';
                points.clear();
            }
        };
        for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) {
                flush();
                continue;
            }
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px(s.x[i]), py(s.y[i]));
            points += buf;
        }
        flush();
        out << R"(<text x=")" << kW - kRight - 6 << R"(" y=")" << kTop + 16 + 14 * static_cast<double>(k)
            << R"(" text-anchor="end" fill=")" << color << R"(">)" << s.label << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace critsense::cli
