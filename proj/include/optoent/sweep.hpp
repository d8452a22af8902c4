#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "optoent/errors.hpp"
#include "optoent/gaussian.hpp"
#include "optoent/linmodel.hpp"
#include "optoent/lyapunov.hpp"
#include "optoent/params.hpp"
#include "optoent/steadystate.hpp"

namespace optoent {

enum class Axis { delta_norm, beta, n_th, power };

inline std::string_view to_string(Axis a) {
    switch (a) {
    case Axis::delta_norm: return "delta_norm";
    case Axis::beta: return "beta";
    case Axis::n_th: return "n_th";
    case Axis::power: return "power";
    }
    return "?";
}

inline Axis parse_axis(std::string_view name) {
    if (name == "delta_norm") return Axis::delta_norm;
    if (name == "beta") return Axis::beta;
    if (name == "n_th") return Axis::n_th;
    if (name == "power") return Axis::power;
    throw ConfigError("unknown axis '" + std::string(name) + "' (expected delta_norm, beta, n_th or power)");
}

/// Everything needed to evaluate one point: the physical parameters, the
/// effective detuning in units of Omega_m, and an optional direct thermal
/// occupation that overrides the one implied by the temperature.
struct PointInput {
    PhysicalParams params = default_params();
    double delta_norm = -1.0;
    std::optional<double> n_th;
};

inline void set_axis(PointInput& in, Axis axis, double value) {
    switch (axis) {
    case Axis::delta_norm: in.delta_norm = value; break;
    case Axis::beta: in.params.beta = value; break;
    case Axis::n_th: in.n_th = value; break;
    case Axis::power: in.params.power = value; break;
    }
}

enum class PointStatus { ok, unstable, marginal, error };

inline std::string_view to_string(PointStatus s) {
    switch (s) {
    case PointStatus::ok: return "ok";
    case PointStatus::unstable: return "unstable";
    case PointStatus::marginal: return "marginal";
    case PointStatus::error: return "error";
    }
    return "?";
}

inline constexpr double kMaxLyapunovResidual = 1e-8;

struct PointEvaluation {
    SteadyState steady;
    double n_th = 0.0;
    StabilityReport stability;
    PointStatus status = PointStatus::error;
    std::optional<CovarianceMatrix> covariance;
    double lyapunov_residual = std::numeric_limits<double>::quiet_NaN();
    /// Under the configured (eta_factor, cm_scale).
    std::optional<EntanglementReport> entanglement;
    /// Under the literal composition: unscaled V with f = 2.
    std::optional<EntanglementReport> entanglement_literal;
    std::string error;
};

/// steady state -> drift/diffusion -> stability gate -> Lyapunov -> E_N.
/// Numerical failures are captured in `status`/`error`; config errors throw.
inline PointEvaluation evaluate_point(const PointInput& in) {
    validate(in.params);
    if (in.n_th && !(*in.n_th >= 0.0)) throw ConfigError("n_th must be >= 0");
    const PhysicalParams& p = in.params;
    const DerivedParams d = derive(p);

    PointEvaluation out;
    out.n_th = in.n_th.value_or(d.n_th);
    out.steady = from_effective_detuning(in.delta_norm * p.omega_m, p, d);
    const DriftMatrix drift = build_drift(out.steady, p);
    out.stability = spectral_stability(drift, routh_hurwitz(out.steady, p));

    switch (classify(out.stability.spectral_abscissa, p.kappa)) {
    case StabilityClass::unstable: out.status = PointStatus::unstable; return out;
    case StabilityClass::marginal: out.status = PointStatus::marginal; return out;
    case StabilityClass::stable: break;
    }

    try {
        const DiffusionMatrix diffusion = build_diffusion(p, out.n_th);
        out.covariance = solve_lyapunov(drift, diffusion);
        out.lyapunov_residual = residual(drift.a, out.covariance->v, diffusion.d);
        if (!(out.lyapunov_residual < kMaxLyapunovResidual)) {
            out.status = PointStatus::error;
            out.error = "Lyapunov residual " + std::to_string(out.lyapunov_residual) + " exceeds 1e-8";
            return out;
        }
        out.entanglement = log_negativity(*out.covariance, p.eta_factor, p.cm_scale);
        out.entanglement_literal = log_negativity(*out.covariance, 2.0, 1.0);
        out.status = PointStatus::ok;
    } catch (const NumericalError& e) {
        out.status = PointStatus::error;
        out.error = e.what();
        out.entanglement.reset();
        out.entanglement_literal.reset();
    }
    return out;
}

struct Curve {
    double value = 0.0;
    /// Per-curve operating detuning; falls back to SweepSpec::base.delta_norm.
    std::optional<double> delta_norm;
};

struct SweepSpec {
    Axis axis = Axis::delta_norm;
    double start = -2.0;
    double stop = 0.0;
    int count = 201;
    PointInput base;
    std::optional<Axis> curve_axis;
    std::vector<Curve> curves;

    double grid_value(int i) const {
        if (i == count - 1) return stop;
        return start + (stop - start) * static_cast<double>(i) / static_cast<double>(count - 1);
    }
};

struct SweepRecord {
    double axis_value = 0.0;
    std::optional<double> curve_value;
    double n_s = 0.0;
    double g_eff = 0.0;
    double s1 = 0.0;
    double s2 = 0.0;
    bool routh_stable = false;
    bool spectral_stable = false;
    std::optional<double> eta;
    std::optional<double> log_negativity;
    PointStatus status = PointStatus::error;
    // Diagnostics kept in memory only; not part of the emitted schema.
    double lyapunov_residual = std::numeric_limits<double>::quiet_NaN();
    double eta_spectral = std::numeric_limits<double>::quiet_NaN();
};

inline void validate(const SweepSpec& spec) {
    if (!(spec.count >= 2)) throw ConfigError("sweep: count must be >= 2");
    if (!(std::isfinite(spec.start) && std::isfinite(spec.stop) && spec.start < spec.stop))
        throw ConfigError("sweep: require start < stop");
    if (spec.curve_axis && *spec.curve_axis == spec.axis)
        throw ConfigError("sweep: swept axis '" + std::string(to_string(spec.axis)) + "' duplicated in curves");
    if (!spec.curves.empty() && !spec.curve_axis) throw ConfigError("sweep: curves given without a curve axis");
    validate(spec.base.params);

    auto check_value = [](Axis axis, double v) {
        if (!std::isfinite(v)) throw ConfigError("sweep: non-finite axis value");
        if (axis == Axis::beta && !(v < 1.0)) throw ConfigError("sweep: beta values must be < 1");
        if (axis == Axis::n_th && !(v >= 0.0)) throw ConfigError("sweep: n_th values must be >= 0");
        if (axis == Axis::power && !(v >= 0.0)) throw ConfigError("sweep: power values must be >= 0");
    };
    check_value(spec.axis, spec.start);
    check_value(spec.axis, spec.stop);
    for (const Curve& c : spec.curves) check_value(*spec.curve_axis, c.value);
}

inline SweepRecord to_record(double axis_value, std::optional<double> curve_value, const PointEvaluation& ev) {
    SweepRecord r;
    r.axis_value = axis_value;
    r.curve_value = curve_value;
    r.n_s = ev.steady.n_s;
    r.g_eff = ev.steady.g_eff;
    r.s1 = ev.stability.s1;
    r.s2 = ev.stability.s2;
    r.routh_stable = ev.stability.routh_stable;
    r.spectral_stable = ev.stability.spectral_stable;
    r.status = ev.status;
    r.lyapunov_residual = ev.lyapunov_residual;
    if (ev.status == PointStatus::ok) {
        r.eta = ev.entanglement->eta;
        r.log_negativity = ev.entanglement->log_negativity;
        r.eta_spectral = ev.entanglement->eta_spectral;
    }
    return r;
}

/// One record per (curve, grid point), curves outer. Points are independent;
/// `workers` only changes wall time, never the result.
inline std::vector<SweepRecord> run_sweep(const SweepSpec& spec, unsigned workers = 1) {
    validate(spec);
    const std::size_t n_curves = spec.curves.empty() ? 1 : spec.curves.size();
    const std::size_t n_points = static_cast<std::size_t>(spec.count);
    const std::size_t total = n_curves * n_points;
    std::vector<SweepRecord> records(total);

    auto evaluate = [&](std::size_t index) {
        const std::size_t ci = index / n_points;
        const int point = static_cast<int>(index % n_points);
        PointInput in = spec.base;
        std::optional<double> curve_value;
        if (!spec.curves.empty()) {
            const Curve& c = spec.curves[ci];
            set_axis(in, *spec.curve_axis, c.value);
            if (c.delta_norm) in.delta_norm = *c.delta_norm;
            curve_value = c.value;
        }
        const double x = spec.grid_value(point);
        set_axis(in, spec.axis, x);
        records[index] = to_record(x, curve_value, evaluate_point(in));
    };

    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(total)));
    if (workers == 1) {
        for (std::size_t i = 0; i < total; ++i) evaluate(i);
        return records;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < total; i = next.fetch_add(1)) evaluate(i);
        });
    }
    for (auto& t : pool) t.join();
    return records;
}

/// Named sweeps matching the published figure panels. Power is in W.
inline SweepSpec figure_preset(std::string_view name) {
    SweepSpec s;
    s.base.params = default_params();
    s.count = 201;
    const std::vector<Curve> beta_curves = {{0.0, {}}, {0.2, {}}, {0.4, {}}, {0.6, {}}};

    if (name == "fig1a") {
        s.axis = Axis::delta_norm;
        s.start = -2.0;
        s.stop = 0.0;
        s.base.params.power = 0.7e-3;
        s.base.params.beta = 0.0;
    } else if (name == "fig1b") {
        s.axis = Axis::delta_norm;
        s.start = -2.0;
        s.stop = 0.0;
        s.base.params.power = 10e-3;
        s.base.params.beta = 0.0;
    } else if (name == "fig2a") {
        s.axis = Axis::delta_norm;
        s.start = -2.0;
        s.stop = 0.0;
        s.base.params.power = 10e-3;
        s.curve_axis = Axis::beta;
        s.curves = beta_curves;
    } else if (name == "fig2b") {
        s.axis = Axis::beta;
        s.start = 0.0;
        s.stop = 0.6;
        s.base.params.power = 10e-3;
        s.base.delta_norm = -0.5;
    } else if (name == "fig3") {
        s.axis = Axis::n_th;
        s.start = 0.0;
        s.stop = 3000.0;
        s.base.params.power = 10e-3;
        s.curve_axis = Axis::beta;
        // The linear curve sits at its own optimum (-1), nonlinear ones at -0.5.
        s.curves = {{0.0, -1.0}, {0.2, -0.5}, {0.4, -0.5}, {0.6, -0.5}};
    } else {
        throw ConfigError("unknown figure preset '" + std::string(name) + "'");
    }
    return s;
}

/// Sign-change bisection for the point where E_N reaches zero along `axis`,
/// between `lo` (entangled) and `hi` (not entangled or not stable). Returns
/// nothing when the endpoints do not bracket a crossing.
inline std::optional<double> locate_zero_crossing(const PointInput& base, Axis axis, double lo, double hi,
                                                  double rel_precision = 1e-3) {
    auto entangled = [&](double x) {
        PointInput in = base;
        set_axis(in, axis, x);
        const PointEvaluation ev = evaluate_point(in);
        return ev.status == PointStatus::ok && ev.entanglement->log_negativity > 0.0;
    };
    if (!entangled(lo) || entangled(hi)) return std::nullopt;
    while (std::abs(hi - lo) > rel_precision * std::max(std::abs(lo), std::abs(hi))) {
        const double mid = 0.5 * (lo + hi);
        (entangled(mid) ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

enum class OutputFormat { csv, jsonl };

inline OutputFormat parse_format(std::string_view name) {
    if (name == "csv") return OutputFormat::csv;
    if (name == "jsonl") return OutputFormat::jsonl;
    throw ConfigError("unknown output format '" + std::string(name) + "' (expected csv or jsonl)");
}

inline constexpr std::string_view kCsvHeader =
    "axis,curve,n_s,g_eff,s1,s2,routh_stable,spectral_stable,eta,log_negativity,status";

namespace detail {

inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string format_optional(const std::optional<double>& v, std::string_view missing) {
    return v ? format_double(*v) : std::string(missing);
}

inline std::string_view format_bool(bool b) { return b ? "true" : "false"; }

} // namespace detail

inline void emit(const std::vector<SweepRecord>& records, OutputFormat format, std::ostream& out) {
    using detail::format_bool;
    using detail::format_double;
    using detail::format_optional;
    if (format == OutputFormat::csv) {
        out << kCsvHeader << '\n';
        for (const SweepRecord& r : records) {
            out << format_double(r.axis_value) << ',' << format_optional(r.curve_value, "") << ','
                << format_double(r.n_s) << ',' << format_double(r.g_eff) << ',' << format_double(r.s1) << ','
                << format_double(r.s2) << ',' << format_bool(r.routh_stable) << ','
                << format_bool(r.spectral_stable) << ',' << format_optional(r.eta, "") << ','
                << format_optional(r.log_negativity, "") << ',' << to_string(r.status) << '\n';
        }
        return;
    }
    for (const SweepRecord& r : records) {
        out << "{\"axis\":" << format_double(r.axis_value) << ",\"curve\":" << format_optional(r.curve_value, "null")
            << ",\"n_s\":" << format_double(r.n_s) << ",\"g_eff\":" << format_double(r.g_eff)
            << ",\"s1\":" << format_double(r.s1) << ",\"s2\":" << format_double(r.s2)
            << ",\"routh_stable\":" << format_bool(r.routh_stable)
            << ",\"spectral_stable\":" << format_bool(r.spectral_stable)
            << ",\"eta\":" << format_optional(r.eta, "null")
            << ",\"log_negativity\":" << format_optional(r.log_negativity, "null") << ",\"status\":\""
            << to_string(r.status) << "\"}\n";
    }
}

inline void emit_to_file(const std::vector<SweepRecord>& records, OutputFormat format, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(path, "cannot open output file");
    emit(records, format, out);
    out.flush();
    if (!out) throw IoError(path, "write failed");
}

} // namespace optoent
