#pragma once

// Test-only generators and brute-force oracles, independent of the library's
// solution paths.

#include <cmath>
#include <functional>
#include <random>
#include <utility>

#include <Eigen/Dense>

namespace optoent::testing {

/// Two-mode squeezed vacuum in the half-variance convention.
inline Eigen::Matrix4d two_mode_squeezed(double r) {
    const double c = 0.5 * std::cosh(2.0 * r);
    const double s = 0.5 * std::sinh(2.0 * r);
    Eigen::Matrix4d v = Eigen::Matrix4d::Zero();
    v.diagonal().setConstant(c);
    v(0, 2) = v(2, 0) = s;
    v(1, 3) = v(3, 1) = -s;
    return v;
}

inline Eigen::Matrix2d rotation(double theta) {
    Eigen::Matrix2d r;
    r << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
    return r;
}

/// Independent phase-space rotations on the two modes (local symplectic).
inline Eigen::Matrix4d local_rotation(double theta_m, double theta_c) {
    Eigen::Matrix4d s = Eigen::Matrix4d::Zero();
    s.topLeftCorner<2, 2>() = rotation(theta_m);
    s.bottomRightCorner<2, 2>() = rotation(theta_c);
    return s;
}

/// Shifted Ginibre matrix with spectral abscissa in [-margin - 1, -margin].
inline Eigen::Matrix4d random_stable_drift(std::mt19937_64& rng, double margin = 0.1) {
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    Eigen::Matrix4d g;
    for (int i = 0; i < 16; ++i) g(i) = normal(rng) / 2.0;
    const Eigen::Vector4cd ev = Eigen::EigenSolver<Eigen::Matrix4d>(g, false).eigenvalues();
    double abscissa = ev.real().maxCoeff();
    return g - (abscissa + margin + uni(rng)) * Eigen::Matrix4d::Identity();
}

inline Eigen::Matrix4d random_psd(std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::Matrix4d b;
    for (int i = 0; i < 16; ++i) b(i) = normal(rng);
    return b * b.transpose();
}

/// Number of sign changes of f on a uniform grid of `samples` points.
inline int count_sign_changes(const std::function<double(double)>& f, double lo, double hi, int samples) {
    int changes = 0;
    double prev = f(lo);
    for (int i = 1; i < samples; ++i) {
        const double x = lo + (hi - lo) * i / (samples - 1);
        const double cur = f(x);
        if ((prev < 0.0) != (cur < 0.0)) ++changes;
        prev = cur;
    }
    return changes;
}

inline double rel_diff(double a, double b) {
    const double s = std::max(std::abs(a), std::abs(b));
    return s > 0.0 ? std::abs(a - b) / s : 0.0;
}

} // namespace optoent::testing
