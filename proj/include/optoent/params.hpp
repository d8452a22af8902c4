#pragma once

#include <cmath>
#include <fstream>
#include <istream>
#include <string>
#include <string_view>

#include "optoent/constants.hpp"
#include "optoent/errors.hpp"

namespace optoent {

/// How a tabulated cavity linewidth in Hz maps onto the decay rate in rad/s.
/// `pi` reads the table entry as κ/π, `two_pi` as κ/2π.
enum class KappaConvention { two_pi, pi };

inline double kappa_factor(KappaConvention c) {
    return c == KappaConvention::two_pi ? constants::two_pi : constants::pi;
}

inline std::string_view to_string(KappaConvention c) {
    return c == KappaConvention::two_pi ? "two_pi" : "pi";
}

/// Physical inputs of one optomechanical configuration. Rates are angular
/// frequencies (rad/s).
struct PhysicalParams {
    double omega_m = 0.0;
    double gamma_m = 0.0;
    double g_m = 0.0;
    double kappa = 0.0;
    KappaConvention kappa_convention = KappaConvention::pi;
    double power = 0.0;            // W
    double laser_wavelength = 0.0; // m
    double temperature = 0.0;      // K
    double beta = 0.0;
    /// f in E_N = max(0, -ln(f * eta)).
    double eta_factor = 2.0;
    /// Scale applied to the solved covariance matrix before the symplectic
    /// analysis. 0.5 maps the unit-vacuum-variance solution onto the
    /// half-variance convention in which f = 2 is the entanglement threshold.
    double cm_scale = 0.5;

    double q_factor() const { return omega_m / gamma_m; }
    double omega_laser() const { return constants::two_pi * constants::speed_of_light / laser_wavelength; }
};

struct DerivedParams {
    double e0 = 0.0;
    double n_th = 0.0;
    double q_factor = 0.0;
    double omega_laser = 0.0;
};

inline double kappa_from_hz(double hz, KappaConvention c) { return kappa_factor(c) * hz; }

/// Bose occupation of a mode at angular frequency omega_m; exactly 0 at T = 0.
inline double thermal_occupation(double temperature, double omega_m) {
    if (temperature <= 0.0) return 0.0;
    const double x = constants::hbar * omega_m / (constants::k_boltzmann * temperature);
    return 1.0 / std::expm1(x);
}

/// Temperature at which the Bose occupation equals n_th.
inline double inverse_thermal_occupation(double n_th, double omega_m) {
    if (!(n_th > 0.0)) throw ConfigError("inverse_thermal_occupation: n_th must be > 0");
    if (!(omega_m > 0.0)) throw ConfigError("inverse_thermal_occupation: omega_m must be > 0");
    return constants::hbar * omega_m / (constants::k_boltzmann * std::log1p(1.0 / n_th));
}

/// |E0| = sqrt(2 P kappa / (hbar omega_laser)).
inline double drive_amplitude(double power, double kappa, double omega_laser) {
    return std::sqrt(2.0 * power * kappa / (constants::hbar * omega_laser));
}

inline void validate(const PhysicalParams& p) {
    auto require = [](bool ok, const char* what) {
        if (!ok) throw ConfigError(what);
    };
    require(std::isfinite(p.omega_m) && p.omega_m > 0.0, "omega_m must be > 0");
    require(std::isfinite(p.gamma_m) && p.gamma_m > 0.0, "gamma_m must be > 0");
    require(std::isfinite(p.g_m) && p.g_m >= 0.0, "g_m must be >= 0");
    require(std::isfinite(p.kappa) && p.kappa > 0.0, "kappa must be > 0");
    require(std::isfinite(p.power) && p.power >= 0.0, "power must be >= 0");
    require(std::isfinite(p.temperature) && p.temperature >= 0.0, "temperature must be >= 0");
    require(std::isfinite(p.laser_wavelength) && p.laser_wavelength > 0.0, "laser_wavelength must be > 0");
    require(std::isfinite(p.beta) && p.beta < 1.0, "beta must be < 1 (restoring force required)");
    require(std::isfinite(p.eta_factor) && p.eta_factor > 0.0, "eta_factor must be > 0");
    require(std::isfinite(p.cm_scale) && p.cm_scale > 0.0, "cm_scale must be > 0");
}

/// Default operating point of the photonic-crystal device, with a 1550 nm
/// drive and the linewidth read as kappa/pi = 529 MHz.
inline PhysicalParams default_params() {
    using constants::hz_to_rad;
    PhysicalParams p;
    p.omega_m = hz_to_rad(3.6e9);
    p.gamma_m = hz_to_rad(35e3);
    p.g_m = hz_to_rad(910e3);
    p.kappa_convention = KappaConvention::pi;
    p.kappa = kappa_from_hz(529e6, p.kappa_convention);
    p.power = 0.7e-3;
    p.laser_wavelength = 1.55e-6;
    p.temperature = 0.270;
    p.beta = 0.0;
    p.eta_factor = 2.0;
    p.cm_scale = 0.5;
    return p;
}

inline DerivedParams derive(const PhysicalParams& p) {
    DerivedParams d;
    d.omega_laser = p.omega_laser();
    d.e0 = drive_amplitude(p.power, p.kappa, d.omega_laser);
    d.n_th = thermal_occupation(p.temperature, p.omega_m);
    d.q_factor = p.q_factor();
    return d;
}

namespace detail {

inline std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

inline double parse_double(const std::string& key, const std::string& text) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config: key '" + key + "' expects a number, got '" + text + "'");
    }
}

} // namespace detail

/// Applies `key = value` lines onto `base`. Frequencies are in Hz; '#' starts
/// a comment. Unknown keys are rejected.
inline PhysicalParams parse_config(std::istream& in, PhysicalParams base = default_params()) {
    using constants::hz_to_rad;
    double kappa_hz = base.kappa / kappa_factor(base.kappa_convention);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        const std::string line = detail::trim(raw);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
        const std::string key = detail::trim(std::string_view(line).substr(0, eq));
        const std::string value = detail::trim(std::string_view(line).substr(eq + 1));

        if (key == "kappa_convention") {
            if (value == "two_pi") base.kappa_convention = KappaConvention::two_pi;
            else if (value == "pi") base.kappa_convention = KappaConvention::pi;
            else throw ConfigError("config: kappa_convention must be two_pi or pi, got '" + value + "'");
            continue;
        }
        const double v = detail::parse_double(key, value);
        if (key == "omega_m_hz") base.omega_m = hz_to_rad(v);
        else if (key == "gamma_m_hz") base.gamma_m = hz_to_rad(v);
        else if (key == "g0_hz") base.g_m = hz_to_rad(v);
        else if (key == "kappa_hz") kappa_hz = v;
        else if (key == "power_w") base.power = v;
        else if (key == "wavelength_m") base.laser_wavelength = v;
        else if (key == "temperature_k") base.temperature = v;
        else if (key == "beta") base.beta = v;
        else if (key == "eta_factor") base.eta_factor = v;
        else if (key == "cm_scale") base.cm_scale = v;
        else throw ConfigError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    base.kappa = kappa_from_hz(kappa_hz, base.kappa_convention);
    validate(base);
    return base;
}

inline PhysicalParams load_config(const std::string& path, PhysicalParams base = default_params()) {
    std::ifstream in(path);
    if (!in) throw IoError(path, "cannot open config file");
    return parse_config(in, base);
}

} // namespace optoent
