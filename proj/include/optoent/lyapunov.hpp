#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "optoent/errors.hpp"
#include "optoent/linmodel.hpp"

namespace optoent {

using Matrix2 = Eigen::Matrix2d;

/// Stationary second moments of (dx_m, dp_m, dI, dphi).
struct CovarianceMatrix {
    Matrix4 v = Matrix4::Zero();
    /// 2-norm condition number of the linear system that produced v (0 if n/a).
    double condition_estimate = 0.0;
    bool ill_conditioned = false;

    Matrix2 v_m() const { return v.topLeftCorner<2, 2>(); }
    Matrix2 v_cav() const { return v.bottomRightCorner<2, 2>(); }
    Matrix2 v_corr() const { return v.topRightCorner<2, 2>(); }
};

inline constexpr double kIllConditionedThreshold = 1e12;

/// ||A V + V A^T + D||_F / ||D||_F.
inline double residual(const Matrix4& a, const Matrix4& v, const Matrix4& d) {
    const double scale = std::max(d.norm(), std::numeric_limits<double>::min());
    return (a * v + v * a.transpose() + d).norm() / scale;
}

namespace detail {

// Packed index of the upper-triangular entry (i, j) of a symmetric 4x4 matrix.
inline constexpr int sym_index(int i, int j) {
    if (i > j) std::swap(i, j);
    return i * 4 - i * (i - 1) / 2 + (j - i);
}

using Matrix10 = Eigen::Matrix<double, 10, 10>;
using Vector10 = Eigen::Matrix<double, 10, 1>;

inline Matrix10 lyapunov_operator(const Matrix4& a) {
    Matrix10 op = Matrix10::Zero();
    for (int i = 0; i < 4; ++i) {
        for (int j = i; j < 4; ++j) {
            const int row = sym_index(i, j);
            for (int k = 0; k < 4; ++k) {
                op(row, sym_index(k, j)) += a(i, k);
                op(row, sym_index(i, k)) += a(j, k);
            }
        }
    }
    return op;
}

inline Vector10 pack(const Matrix4& m) {
    Vector10 out;
    for (int i = 0; i < 4; ++i)
        for (int j = i; j < 4; ++j) out(sym_index(i, j)) = m(i, j);
    return out;
}

inline Matrix4 unpack(const Vector10& x) {
    Matrix4 m;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) m(i, j) = x(sym_index(i, j));
    return m;
}

} // namespace detail

/// Solves A V + V A^T = -D through the 10-unknown symmetric vectorization.
inline CovarianceMatrix solve_lyapunov(const DriftMatrix& drift, const DiffusionMatrix& diffusion) {
    const double abscissa = spectral_abscissa(drift.a);
    if (!(abscissa < 0.0))
        throw UnstableDrift("solve_lyapunov: drift matrix is not Hurwitz (spectral abscissa " +
                            std::to_string(abscissa) + ")");

    // V is invariant under (A, D) -> (cA, cD); work with entries of order one.
    const double scale = drift.a.cwiseAbs().maxCoeff();
    const Matrix4 a = drift.a / scale;
    const Matrix4 d = diffusion.d / scale;

    const detail::Matrix10 op = detail::lyapunov_operator(a);
    const detail::Vector10 rhs = -detail::pack(d);
    const Eigen::FullPivLU<detail::Matrix10> lu(op);
    detail::Vector10 x = lu.solve(rhs);
    x += lu.solve(rhs - op * x); // one step of iterative refinement

    CovarianceMatrix cm;
    cm.v = detail::unpack(x);
    cm.v = 0.5 * (cm.v + cm.v.transpose()).eval();

    const Eigen::JacobiSVD<detail::Matrix10> svd(op);
    const auto& sv = svd.singularValues();
    cm.condition_estimate = sv(9) > 0.0 ? sv(0) / sv(9) : std::numeric_limits<double>::infinity();
    cm.ill_conditioned = cm.condition_estimate > kIllConditionedThreshold;
    return cm;
}

/// exp(A) by scaling and squaring with a diagonal [6/6] Pade approximant;
/// the argument is scaled until its 1-norm is at most 1/2.
inline Matrix4 expm(const Matrix4& a) {
    constexpr int order = 6;
    // c_k = (2q-k)! q! / ((2q)! k! (q-k)!)
    constexpr std::array<double, order + 1> c = {
        1.0, 1.0 / 2.0, 5.0 / 44.0, 1.0 / 66.0, 1.0 / 792.0, 1.0 / 15840.0, 1.0 / 665280.0};

    const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
    int squarings = 0;
    if (norm1 > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm1 / 0.5)));
    const Matrix4 x = a / std::ldexp(1.0, squarings);

    Matrix4 power = Matrix4::Identity();
    Matrix4 num = Matrix4::Identity();
    Matrix4 den = Matrix4::Identity();
    for (int k = 1; k <= order; ++k) {
        power = power * x;
        num += c[k] * power;
        den += ((k % 2) ? -c[k] : c[k]) * power;
    }
    Matrix4 result = den.partialPivLu().solve(num);
    for (int i = 0; i < squarings; ++i) result = result * result;
    return result;
}

struct OracleResult {
    CovarianceMatrix cm;
    double horizon = 0.0;        // s, actual integration length
    double tail_estimate = 0.0;  // relative bound on the truncated tail
    double doubling_change = 0.0; // relative change under one more horizon doubling
};

namespace detail {

struct SimpsonIntegrand {
    const Matrix4& a;
    const Matrix4& d;

    Matrix4 operator()(double s) const {
        const Matrix4 m = expm(a * s);
        return m * d * m.transpose();
    }
};

inline Matrix4 adaptive_simpson(const SimpsonIntegrand& f, double lo, double hi, const Matrix4& f_lo,
                                const Matrix4& f_mid, const Matrix4& f_hi, const Matrix4& whole, double abs_tol,
                                int depth) {
    const double mid = 0.5 * (lo + hi);
    const double h = hi - lo;
    const Matrix4 f_lm = f(0.5 * (lo + mid));
    const Matrix4 f_mh = f(0.5 * (mid + hi));
    const Matrix4 left = (h / 12.0) * (f_lo + 4.0 * f_lm + f_mid);
    const Matrix4 right = (h / 12.0) * (f_mid + 4.0 * f_mh + f_hi);
    const Matrix4 delta = left + right - whole;
    if (depth <= 0 || delta.norm() <= 15.0 * abs_tol) return left + right + delta / 15.0;
    return adaptive_simpson(f, lo, mid, f_lo, f_lm, f_mid, left, 0.5 * abs_tol, depth - 1) +
           adaptive_simpson(f, mid, hi, f_mid, f_mh, f_hi, right, 0.5 * abs_tol, depth - 1);
}

} // namespace detail

/// Independent check of solve_lyapunov: V = int_0^T e^{As} D e^{A^T s} ds.
///
/// The integrand is integrated by adaptive Simpson over a base panel of length
/// h ~ 1/||A||, then extended to the horizon through the exact semigroup
/// identity I(2T) = I(T) + e^{AT} I(T) e^{A^T T}. Pass horizon = 0 to let the
/// tail bound choose it. `tol` bounds both the tail estimate and the change
/// under one extra horizon doubling.
inline OracleResult lyapunov_oracle(const DriftMatrix& drift, const DiffusionMatrix& diffusion, double horizon,
                                    double tol) {
    const Matrix4& a = drift.a;
    const Matrix4& d = diffusion.d;
    const double abscissa = spectral_abscissa(a);
    if (!(abscissa < 0.0)) throw UnstableDrift("lyapunov_oracle: drift matrix is not Hurwitz");

    const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
    const double h = 1.0 / norm1;
    const detail::SimpsonIntegrand f{a, d};
    const Matrix4 f0 = f(0.0), fm = f(0.5 * h), fh = f(h);
    const Matrix4 coarse = (h / 6.0) * (f0 + 4.0 * fm + fh);
    const double panel_tol = 1e-3 * tol * std::max(coarse.norm(), std::numeric_limits<double>::min());
    Matrix4 integral = detail::adaptive_simpson(f, 0.0, h, f0, fm, fh, coarse, panel_tol, 40);
    Matrix4 propagator = expm(a * h);
    double length = h;

    const bool automatic = horizon <= 0.0;
    const double target = automatic ? 10.0 / std::abs(abscissa) : horizon;

    auto tail_bound = [&]() {
        const double q = propagator.operatorNorm();
        const double q2 = q * q;
        if (q2 >= 1.0) return std::numeric_limits<double>::infinity();
        return q2 / (1.0 - q2);
    };
    auto double_once = [&]() {
        integral += propagator * integral * propagator.transpose();
        propagator = propagator * propagator;
        length *= 2.0;
    };

    constexpr int max_doublings = 200;
    int doublings = 0;
    while ((length < target || (automatic && tail_bound() > tol)) && doublings < max_doublings) {
        double_once();
        ++doublings;
    }

    OracleResult out;
    out.tail_estimate = tail_bound();
    if (!(out.tail_estimate <= tol))
        throw HorizonTooShort("lyapunov_oracle: tail estimate " + std::to_string(out.tail_estimate) +
                              " exceeds tolerance at horizon " + std::to_string(length) + " s");

    const Matrix4 at_horizon = integral;
    out.horizon = length;
    double_once();
    out.doubling_change = (integral - at_horizon).norm() / std::max(at_horizon.norm(), std::numeric_limits<double>::min());
    out.cm.v = 0.5 * (at_horizon + at_horizon.transpose());
    return out;
}

} // namespace optoent
