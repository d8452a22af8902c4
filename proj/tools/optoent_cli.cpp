// Command-line front end: single points, stability summaries, sweeps and
// figure presets.

#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "optoent.hpp"

namespace {

using namespace optoent;

enum ExitCode { kOk = 0, kConfig = 2, kNumerical = 3, kIo = 4 };

struct PointFlags {
    std::string config;
    std::optional<double> delta_norm;
    std::optional<double> beta;
    std::optional<double> power_mw;
    std::optional<double> temp_k;
    std::optional<double> nth;

    void attach(CLI::App& cmd) {
        cmd.add_option("--config", config, "key = value parameter file");
        cmd.add_option("--delta-norm", delta_norm, "effective detuning in units of Omega_m");
        cmd.add_option("--beta", beta, "dimensionless geometrical nonlinearity (< 1)");
        cmd.add_option("--power-mw", power_mw, "input laser power in mW");
        auto* t = cmd.add_option("--temp-k", temp_k, "bath temperature in K");
        auto* n = cmd.add_option("--nth", nth, "mean thermal occupation (overrides temperature)");
        t->excludes(n);
    }

    PointInput resolve() const {
        PointInput in;
        if (!config.empty()) in.params = load_config(config);
        if (delta_norm) in.delta_norm = *delta_norm;
        if (beta) in.params.beta = *beta;
        if (power_mw) in.params.power = *power_mw * 1e-3;
        if (temp_k) in.params.temperature = *temp_k;
        if (nth) in.n_th = *nth;
        validate(in.params);
        return in;
    }
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

void print_kv(const char* key, double v) { std::cout << key << '=' << fmt(v) << '\n'; }
void print_kv(const char* key, bool v) { std::cout << key << '=' << (v ? "true" : "false") << '\n'; }
void print_kv(const char* key, std::string_view v) { std::cout << key << '=' << v << '\n'; }

int run_point(const PointFlags& flags) {
    const PointInput in = flags.resolve();
    const PointEvaluation ev = evaluate_point(in);
    print_kv("delta_norm", in.delta_norm);
    print_kv("beta", in.params.beta);
    print_kv("power_w", in.params.power);
    print_kv("kappa_convention", to_string(in.params.kappa_convention));
    print_kv("n_th", ev.n_th);
    print_kv("n_s", ev.steady.n_s);
    print_kv("alpha_s", ev.steady.alpha_s);
    print_kv("g_eff", ev.steady.g_eff);
    print_kv("delta_eff", ev.steady.delta_eff);
    print_kv("delta_bare", ev.steady.delta_bare);
    print_kv("s1", ev.stability.s1);
    print_kv("s2", ev.stability.s2);
    print_kv("routh_stable", ev.stability.routh_stable);
    print_kv("spectral_abscissa", ev.stability.spectral_abscissa);
    print_kv("spectral_stable", ev.stability.spectral_stable);
    print_kv("status", to_string(ev.status));
    if (ev.status == PointStatus::error) {
        std::cerr << "error: " << ev.error << '\n';
        return kNumerical;
    }
    if (ev.status != PointStatus::ok) return kOk;

    const EntanglementReport& r = *ev.entanglement;
    print_kv("lyapunov_residual", ev.lyapunov_residual);
    print_kv("sigma_v", r.sigma_v);
    print_kv("det_v", r.det_v);
    print_kv("eta", r.eta);
    print_kv("eta_spectral", r.eta_spectral);
    print_kv("eta_factor", in.params.eta_factor);
    print_kv("cm_scale", in.params.cm_scale);
    print_kv("log_negativity", r.log_negativity);
    print_kv("entangled", r.entangled);
    const EntanglementReport& lit = *ev.entanglement_literal;
    if (lit.log_negativity != r.log_negativity || lit.eta != r.eta) {
        print_kv("eta_literal", lit.eta);
        print_kv("log_negativity_literal", lit.log_negativity);
    }
    return kOk;
}

int run_stability(const PointFlags& flags) {
    const PointInput in = flags.resolve();
    const DerivedParams d = derive(in.params);
    const SteadyState s = from_effective_detuning(in.delta_norm * in.params.omega_m, in.params, d);
    const StabilityReport r = assess_stability(s, in.params);
    const SidebandThresholds t = sideband_thresholds(in.params);
    print_kv("delta_norm", in.delta_norm);
    print_kv("g_eff", s.g_eff);
    print_kv("s1", r.s1);
    print_kv("s2", r.s2);
    print_kv("routh_stable", r.routh_stable);
    print_kv("spectral_abscissa", r.spectral_abscissa);
    print_kv("spectral_stable", r.spectral_stable);
    print_kv("agree", r.agree);
    print_kv("g_blue", t.g_blue);
    print_kv("g_red", t.g_red);
    return kOk;
}

// "beta=0,0.3,0.6" -> (beta, {0, 0.3, 0.6})
std::pair<Axis, std::vector<Curve>> parse_curves(const std::string& text) {
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw ConfigError("--curves expects key=v1,v2,...");
    const Axis axis = parse_axis(text.substr(0, eq));
    std::vector<Curve> curves;
    std::stringstream list(text.substr(eq + 1));
    std::string item;
    while (std::getline(list, item, ',')) {
        try {
            curves.push_back({std::stod(item), {}});
        } catch (const std::exception&) {
            throw ConfigError("--curves: bad value '" + item + "'");
        }
    }
    if (curves.empty()) throw ConfigError("--curves: no values");
    return {axis, curves};
}

void write_records(const std::vector<SweepRecord>& records, OutputFormat format, const std::string& out) {
    if (out.empty() || out == "-") {
        emit(records, format, std::cout);
    } else {
        emit_to_file(records, format, out);
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stationary optomechanical entanglement with geometrical nonlinearity"};
    app.require_subcommand(1);

    PointFlags point_flags;
    auto* point = app.add_subcommand("point", "evaluate one operating point");
    point_flags.attach(*point);

    PointFlags stab_flags;
    auto* stability = app.add_subcommand("stability", "stability conditions and sideband thresholds");
    stab_flags.attach(*stability);

    PointFlags sweep_flags;
    std::string axis_name = "delta_norm", curves_text, sweep_out, sweep_format = "csv";
    double start = -2.0, stop = 0.0;
    int count = 201;
    unsigned sweep_workers = 1;
    auto* sweep = app.add_subcommand("sweep", "uniform one-dimensional parameter sweep");
    sweep_flags.attach(*sweep);
    sweep->add_option("--axis", axis_name, "delta_norm | beta | n_th | power (W)");
    sweep->add_option("--start", start, "first grid value")->capture_default_str();
    sweep->add_option("--stop", stop, "last grid value (inclusive)")->capture_default_str();
    sweep->add_option("--count", count, "number of grid points (>= 2)")->capture_default_str();
    sweep->add_option("--curves", curves_text, "second parameter, e.g. beta=0,0.3,0.6");
    sweep->add_option("--out", sweep_out, "output path (default stdout)");
    sweep->add_option("--format", sweep_format, "csv | jsonl");
    sweep->add_option("--workers", sweep_workers, "worker threads");

    std::string figure_name, figure_out, figure_format = "csv";
    unsigned figure_workers = 1;
    auto* figure = app.add_subcommand("figure", "run a named figure preset");
    figure->add_option("--name", figure_name, "fig1a | fig1b | fig2a | fig2b | fig3")->required();
    figure->add_option("--out", figure_out, "output path (default stdout)");
    figure->add_option("--format", figure_format, "csv | jsonl");
    figure->add_option("--workers", figure_workers, "worker threads");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfig;
    }

    try {
        if (*point) return run_point(point_flags);
        if (*stability) return run_stability(stab_flags);
        if (*sweep) {
            SweepSpec spec;
            spec.base = sweep_flags.resolve();
            spec.axis = parse_axis(axis_name);
            spec.start = start;
            spec.stop = stop;
            spec.count = count;
            if (!curves_text.empty()) {
                auto [axis, curves] = parse_curves(curves_text);
                spec.curve_axis = axis;
                spec.curves = std::move(curves);
            }
            const OutputFormat format = parse_format(sweep_format);
            write_records(run_sweep(spec, sweep_workers), format, sweep_out);
            return kOk;
        }
        if (*figure) {
            const SweepSpec spec = figure_preset(figure_name);
            const OutputFormat format = parse_format(figure_format);
            write_records(run_sweep(spec, figure_workers), format, figure_out);
            return kOk;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfig;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kNumerical;
    } catch (const IoError& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return kIo;
    }
    return kOk;
}
