#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "optoent/params.hpp"

namespace optoent {

/// Classical operating point around which the fluctuations are linearized.
struct SteadyState {
    double n_s = 0.0;
    double alpha_s = 0.0;
    double x_s = 0.0;
    double p_s = 0.0;
    double delta_eff = 0.0;
    double delta_bare = 0.0;
    double g_eff = 0.0;
    double beta = 0.0;
};

/// Radiation-pressure shift per photon: Delta = Delta_0 + shift * n_s.
inline double detuning_shift_per_photon(const PhysicalParams& p) {
    return 2.0 * p.g_m * p.g_m / p.omega_m;
}

namespace detail {

inline SteadyState expand(double n_s, double delta_eff, double delta_bare, const PhysicalParams& p) {
    SteadyState s;
    s.n_s = n_s;
    s.alpha_s = std::sqrt(n_s);
    s.x_s = 2.0 * (p.g_m / p.omega_m) * n_s;
    s.p_s = 0.0;
    s.delta_eff = delta_eff;
    s.delta_bare = delta_bare;
    s.g_eff = p.g_m * s.alpha_s;
    s.beta = p.beta;
    return s;
}

} // namespace detail

/// Operating point at a given effective detuning; n_s follows in closed form.
inline SteadyState from_effective_detuning(double delta_eff, const PhysicalParams& p, const DerivedParams& d) {
    if (!(p.kappa > 0.0)) throw ConfigError("from_effective_detuning: kappa must be > 0");
    const double n_s = d.e0 * d.e0 / (delta_eff * delta_eff + 0.25 * p.kappa * p.kappa);
    const double delta_bare = delta_eff - detuning_shift_per_photon(p) * n_s;
    return detail::expand(n_s, delta_eff, delta_bare, p);
}

/// One real root of the bare-detuning self-consistency cubic.
struct CubicBranch {
    SteadyState state;
    /// |f(n_s)| / |E0|^2 with f(n) = n((Delta_0 + k n)^2 + kappa^2/4) - |E0|^2.
    double relative_residual = 0.0;
    /// f'(n_s); positive on the outer branches of a bistable window.
    double slope = 0.0;
    bool candidate_stable = false;
};

struct BareDetuningSolution {
    std::vector<CubicBranch> branches; // ascending n_s
    bool degenerate = false;
};

/// Solves |E0|^2 = n ((Delta_0 + k n)^2 + kappa^2/4), k = 2 g_m^2 / Omega_m,
/// for every admissible (real, non-negative) photon number.
inline BareDetuningSolution from_bare_detuning(double delta_bare, const PhysicalParams& p, const DerivedParams& d) {
    if (!(p.kappa > 0.0)) throw ConfigError("from_bare_detuning: kappa must be > 0");
    const double e2 = d.e0 * d.e0;
    const double k = detuning_shift_per_photon(p);
    const double quarter_k2 = 0.25 * p.kappa * p.kappa;

    auto f = [&](double n) {
        const double det = delta_bare + k * n;
        return n * (det * det + quarter_k2) - e2;
    };
    auto fprime = [&](double n) {
        const double det = delta_bare + k * n;
        return det * det + quarter_k2 + 2.0 * k * n * det;
    };

    std::vector<double> roots;
    if (e2 == 0.0) {
        roots.push_back(0.0);
    } else if (k == 0.0) {
        roots.push_back(e2 / (delta_bare * delta_bare + quarter_k2));
    } else {
        // Monic cubic in m = n / n0 with n0 chosen so the coefficients stay O(1).
        const double n0 = std::cbrt(e2 / (k * k));
        const double c2 = 2.0 * delta_bare / (k * n0);
        const double c1 = (delta_bare * delta_bare + quarter_k2) / (k * k * n0 * n0);
        const double c0 = -e2 / (k * k * n0 * n0 * n0);
        Eigen::Matrix3d companion = Eigen::Matrix3d::Zero();
        companion(0, 0) = -c2;
        companion(0, 1) = -c1;
        companion(0, 2) = -c0;
        companion(1, 0) = 1.0;
        companion(2, 1) = 1.0;
        const Eigen::Vector3cd eig = Eigen::EigenSolver<Eigen::Matrix3d>(companion, false).eigenvalues();
        for (const std::complex<double>& z : eig) {
            if (std::abs(z.imag()) > 1e-8 * std::max(std::abs(z.real()), 1e-300)) continue;
            if (z.real() < 0.0) continue;
            double n = z.real() * n0;
            for (int it = 0; it < 3; ++it) {
                const double fp = fprime(n);
                if (fp == 0.0) break;
                const double step = f(n) / fp;
                n -= step;
                if (std::abs(step) <= 1e-16 * std::abs(n)) break;
            }
            if (n >= 0.0) roots.push_back(n);
        }
        std::sort(roots.begin(), roots.end());
    }

    BareDetuningSolution out;
    for (std::size_t i = 0; i + 1 < roots.size(); ++i) {
        if (std::abs(roots[i + 1] - roots[i]) <= 1e-6 * std::max(std::abs(roots[i + 1]), 1e-300))
            out.degenerate = true;
    }
    for (double n : roots) {
        CubicBranch b;
        b.state = detail::expand(n, delta_bare + k * n, delta_bare, p);
        b.relative_residual = e2 > 0.0 ? std::abs(f(n)) / e2 : std::abs(f(n));
        b.slope = fprime(n);
        b.candidate_stable = b.slope > 0.0;
        out.branches.push_back(b);
    }
    return out;
}

/// beta = 3 beta' x_s^2 / Omega_m^2. `x_zpf` is accepted for interface parity;
/// the dimensionless displacement x_s already carries the zero-point scale.
inline double nonlinearity_from_betaprime(double beta_prime, [[maybe_unused]] double x_zpf, double x_s,
                                          double omega_m) {
    if (!(omega_m > 0.0)) throw ConfigError("nonlinearity_from_betaprime: omega_m must be > 0");
    return 3.0 * beta_prime * x_s * x_s / (omega_m * omega_m);
}

} // namespace optoent
