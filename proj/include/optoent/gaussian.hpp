#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "optoent/errors.hpp"
#include "optoent/lyapunov.hpp"

namespace optoent {

struct EntanglementReport {
    double sigma_v = 0.0;
    double det_v = 0.0;
    double eta = 0.0;
    /// Same eigenvalue from the spectrum of i Omega V~ (partial transpose).
    double eta_spectral = 0.0;
    double log_negativity = 0.0;
    bool entangled = false;
};

/// det V_m + det V_cav - 2 det V_corr.
inline double sigma(const Matrix4& v) {
    return v.topLeftCorner<2, 2>().determinant() + v.bottomRightCorner<2, 2>().determinant() -
           2.0 * v.topRightCorner<2, 2>().determinant();
}

inline double sigma(const CovarianceMatrix& cm) { return sigma(cm.v); }

/// Partial transpose: flips the sign of the optical phase quadrature.
inline Matrix4 partial_transpose(const Matrix4& v) {
    const Eigen::Vector4d flip(1.0, 1.0, 1.0, -1.0);
    return flip.asDiagonal() * v * flip.asDiagonal();
}

/// Smallest symplectic eigenvalue of the partial transpose as the smallest
/// |lambda| over eig(Omega V~), with Omega = J (+) J, J = [[0, 1], [-1, 0]].
inline double symplectic_eta_spectral(const Matrix4& v) {
    Matrix4 omega = Matrix4::Zero();
    omega(0, 1) = omega(2, 3) = 1.0;
    omega(1, 0) = omega(3, 2) = -1.0;
    const Eigen::Vector4cd ev = Eigen::EigenSolver<Matrix4>(omega * partial_transpose(v), false).eigenvalues();
    double best = std::numeric_limits<double>::infinity();
    for (const auto& z : ev) best = std::min(best, std::abs(z));
    return best;
}

/// eta = sqrt((Sigma - sqrt(Sigma^2 - 4 det V)) / 2), evaluated as
/// sqrt(2 det V / (Sigma + sqrt(Sigma^2 - 4 det V))) to avoid cancellation.
/// Round-off negative radicands within 1e-10 max(1, Sigma^2) are clamped.
inline double symplectic_eta(const Matrix4& v) {
    const double s = sigma(v);
    const double det = v.determinant();
    double radicand = s * s - 4.0 * det;
    if (radicand < 0.0) {
        if (radicand < -1e-10 * std::max(1.0, s * s))
            throw NegativeRadicand("symplectic_eta: Sigma^2 - 4 det V = " + std::to_string(radicand) +
                                   " (non-physical covariance matrix)");
        radicand = 0.0;
    }
    const double denom = s + std::sqrt(radicand);
    if (!(det > 0.0) || !(denom > 0.0))
        throw NegativeRadicand("symplectic_eta: covariance matrix is not positive definite");
    return std::sqrt(2.0 * det / denom);
}

inline double symplectic_eta(const CovarianceMatrix& cm) { return symplectic_eta(cm.v); }

/// E_N = max(0, -ln(f eta)) for the covariance matrix `v` as given.
inline EntanglementReport log_negativity(const Matrix4& v, double eta_factor) {
    EntanglementReport r;
    r.sigma_v = sigma(v);
    r.det_v = v.determinant();
    r.eta = symplectic_eta(v);
    r.eta_spectral = symplectic_eta_spectral(v);
    r.log_negativity = std::max(0.0, -std::log(eta_factor * r.eta));
    r.entangled = r.log_negativity > 0.0;
    return r;
}

/// Applies the covariance normalization `cm_scale` before the analysis.
inline EntanglementReport log_negativity(const CovarianceMatrix& cm, double eta_factor, double cm_scale = 1.0) {
    return log_negativity(Matrix4(cm_scale * cm.v), eta_factor);
}

inline double relative_difference(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale > 0.0 ? std::abs(a - b) / scale : 0.0;
}

} // namespace optoent
