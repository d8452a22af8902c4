#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "optoent/errors.hpp"
#include "optoent/params.hpp"
#include "optoent/steadystate.hpp"

namespace optoent {

using Matrix4 = Eigen::Matrix4d;

/// Generator of the linearized fluctuations in quadrature order
/// (dx_m, dp_m, dI, dphi).
struct DriftMatrix {
    Matrix4 a = Matrix4::Zero();
};

/// Markovian noise strengths; always diagonal.
struct DiffusionMatrix {
    Matrix4 d = Matrix4::Zero();
};

struct StabilityReport {
    double s1 = std::numeric_limits<double>::quiet_NaN();
    double s2 = std::numeric_limits<double>::quiet_NaN();
    bool routh_stable = false;
    double spectral_abscissa = std::numeric_limits<double>::quiet_NaN();
    bool spectral_stable = false;
    bool agree = false;
};

inline DriftMatrix build_drift(double g_eff, double delta_eff, double beta, const PhysicalParams& p) {
    if (!(beta < 1.0)) throw ConfigError("build_drift: beta must be < 1");
    DriftMatrix m;
    Matrix4& a = m.a;
    a(0, 1) = p.omega_m;
    a(1, 0) = p.omega_m * (beta - 1.0);
    a(1, 1) = -p.gamma_m;
    a(1, 2) = g_eff;
    a(2, 2) = -0.5 * p.kappa;
    a(2, 3) = -delta_eff;
    a(3, 2) = delta_eff;
    a(3, 3) = -0.5 * p.kappa;
    a(3, 0) = g_eff;
    return m;
}

inline DriftMatrix build_drift(const SteadyState& s, const PhysicalParams& p) {
    return build_drift(s.g_eff, s.delta_eff, s.beta, p);
}

inline DiffusionMatrix build_diffusion(const PhysicalParams& p, double n_th) {
    if (!(n_th >= 0.0)) throw ConfigError("build_diffusion: n_th must be >= 0");
    DiffusionMatrix m;
    m.d.diagonal() << 0.0, p.gamma_m * (2.0 * n_th + 1.0), p.kappa, p.kappa;
    return m;
}

/// Routh-Hurwitz conditions of the beta = 0 drift matrix, evaluated from the
/// operating point (G, Delta). Both must be positive for stability.
inline StabilityReport routh_hurwitz(double g_eff, double delta, const PhysicalParams& p) {
    const double gam = p.gamma_m;
    const double kap = p.kappa;
    const double om = p.omega_m;
    const double q = 0.25 * kap * kap;
    const double g2 = g_eff * g_eff;

    StabilityReport r;
    r.s1 = gam * kap *
               ((q + (om - delta) * (om - delta)) * (q + (om + delta) * (om + delta)) +
                gam * ((gam + kap) * (q + delta * delta) + kap * om * om)) -
           delta * om * g2 * (gam + kap) * (gam + kap);
    r.s2 = om * (delta * delta + q) + g2 * delta;
    r.routh_stable = r.s1 > 0.0 && r.s2 > 0.0;
    return r;
}

inline StabilityReport routh_hurwitz(const SteadyState& s, const PhysicalParams& p) {
    return routh_hurwitz(s.g_eff, s.delta_eff, p);
}

inline double spectral_abscissa(const Matrix4& a) {
    const Eigen::Vector4cd ev = Eigen::EigenSolver<Matrix4>(a, false).eigenvalues();
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& z : ev) best = std::max(best, z.real());
    return best;
}

/// Fills the spectral fields of `report` from the eigenvalues of A. When the
/// Routh-Hurwitz fields are populated, `agree` compares the two verdicts.
inline StabilityReport spectral_stability(const DriftMatrix& a, StabilityReport report = {}) {
    report.spectral_abscissa = spectral_abscissa(a.a);
    report.spectral_stable = report.spectral_abscissa < 0.0;
    report.agree = !std::isnan(report.s1) && report.routh_stable == report.spectral_stable;
    return report;
}

/// Both routes at one operating point. Routh-Hurwitz ignores beta.
inline StabilityReport assess_stability(const SteadyState& s, const PhysicalParams& p) {
    return spectral_stability(build_drift(s, p), routh_hurwitz(s, p));
}

enum class StabilityClass { stable, marginal, unstable };

/// Points whose abscissa lies in (-1e-6 kappa, 0) are marginal: the stationary
/// covariance diverges there and is not computed.
inline StabilityClass classify(double abscissa, double kappa) {
    if (!(abscissa < 0.0)) return StabilityClass::unstable;
    if (abscissa > -1e-6 * kappa) return StabilityClass::marginal;
    return StabilityClass::stable;
}

/// Largest stable effective coupling at the blue (Delta = -Omega_m) and red
/// (Delta = +Omega_m) sidebands, from the zero crossings of s2 and s1.
struct SidebandThresholds {
    double g_blue = 0.0;
    double g_red = 0.0;
};

inline SidebandThresholds sideband_thresholds(const PhysicalParams& p) {
    SidebandThresholds t;
    const double om = p.omega_m;
    const double q = 0.25 * p.kappa * p.kappa;
    // s2(G) = Omega (Delta^2 + kappa^2/4) + G^2 Delta with Delta = -Omega.
    t.g_blue = std::sqrt(om * (om * om + q) / om);
    // s1(G) = s1(0) - Delta Omega G^2 (Gamma + kappa)^2 with Delta = +Omega.
    const double s1_0 = routh_hurwitz(0.0, om, p).s1;
    const double gk = p.gamma_m + p.kappa;
    t.g_red = std::sqrt(s1_0 / (om * om * gk * gk));
    return t;
}

} // namespace optoent
