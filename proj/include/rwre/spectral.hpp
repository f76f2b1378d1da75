#pragma once

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "rwre/environment.hpp"

namespace rwre {

struct PerronOptions {
    double tolerance = 1e-13;   ///< relative width of the Collatz-Wielandt bracket
    int max_iterations = 100000;
    double shift = 0.5;         ///< applied to the norm-scaled matrix
};

template <typename Scalar> struct PerronEstimate {
    Scalar value;
    Scalar lower;
    Scalar upper;
    int iterations;
};

/// Diagonal similarity D^{-1} M D with power-of-two entries that equalizes
/// off-diagonal row and column sums (Osborne sweeps). The spectrum is
/// unchanged and the rescaling itself is exact.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>
balanced(const Eigen::MatrixBase<Derived> &m) {
    using Scalar = typename Derived::Scalar;
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> a = m.cwiseAbs();
    const Eigen::Index n = a.rows();
    for (int sweep = 0; sweep < 100; ++sweep) {
        bool changed = false;
        for (Eigen::Index i = 0; i < n; ++i) {
            const Scalar c = a.col(i).sum() - a(i, i);
            const Scalar r = a.row(i).sum() - a(i, i);
            if (c == Scalar(0) || r == Scalar(0)) {
                continue;
            }
            Scalar f(1);
            Scalar cc = c;
            while (cc < r / Scalar(2)) {
                cc *= Scalar(4);
                f *= Scalar(2);
            }
            while (cc > r * Scalar(2)) {
                cc /= Scalar(4);
                f /= Scalar(2);
            }
            if (f != Scalar(1) && cc + r < Scalar(0.95) * (c + r) * f) {
                a.col(i) *= f;
                a.row(i) /= f;
                changed = true;
            }
        }
        if (!changed) {
            break;
        }
    }
    return a;
}

/**
 * Perron root of a nonnegative irreducible matrix by power iteration.
 *
 * The matrix is balanced first, then iterated as B = M / s + c I with s the
 * largest row sum, so B is primitive even when M is periodic. Without the
 * balancing a badly scaled M (PD at extreme sigma) squeezes the spectrum
 * towards 0 and the shift stops separating +-rho. Every iterate x stays
 * strictly positive, and min_i (Bx)_i / x_i <= rho(B) <= max_i (Bx)_i / x_i
 * brackets the root; iteration stops once the bracket is relatively narrower
 * than the tolerance.
 */
template <typename Derived>
PerronEstimate<typename Derived::Scalar> perron_root(const Eigen::MatrixBase<Derived> &m,
                                                     const PerronOptions &options = {}) {
    using Scalar = typename Derived::Scalar;
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
    eigen_assert(m.rows() == m.cols());

    const auto b = balanced(m);
    const Scalar scale = b.rowwise().sum().maxCoeff();
    if (scale == Scalar(0)) {
        return {Scalar(0), Scalar(0), Scalar(0), 0};
    }
    const Scalar shift(options.shift);
    const auto shifted = (b / scale).eval();

    Vector x = Vector::Constant(m.rows(), Scalar(1) / Scalar(m.rows()));
    Scalar lower(0);
    Scalar upper(0);
    for (int it = 1; it <= options.max_iterations; ++it) {
        Vector y = shifted * x + shift * x;
        const auto ratios = (y.array() / x.array()).eval();
        lower = ratios.minCoeff();
        upper = ratios.maxCoeff();
        if (upper - lower <= Scalar(options.tolerance) * upper) {
            const Scalar lo = (lower - shift) * scale;
            const Scalar hi = (upper - shift) * scale;
            return {(lo + hi) / Scalar(2), lo, hi, it};
        }
        x = y / y.sum();
    }
    throw ConvergenceError("power iteration did not converge in " +
                               std::to_string(options.max_iterations) + " iterations",
                           static_cast<double>(((lower + upper) / Scalar(2) - shift) * scale));
}

/// pi (I - M)^{-1} 1 via a linear solve; the inverse is never formed.
template <typename RowDerived, typename MatDerived>
typename MatDerived::Scalar geometric_series_value(const Eigen::MatrixBase<RowDerived> &pi,
                                                   const Eigen::MatrixBase<MatDerived> &m) {
    using Scalar = typename MatDerived::Scalar;
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
    const Eigen::Index n = m.rows();
    const Eigen::PartialPivLU<Matrix> lu(Matrix::Identity(n, n) - m);
    const Vector x = lu.solve(Vector::Ones(n));
    return pi.dot(x.transpose());
}

/// sum_{k=0}^{terms} pi M^k 1 by repeated matrix-vector products.
template <typename RowDerived, typename MatDerived>
typename MatDerived::Scalar truncated_geometric_series(const Eigen::MatrixBase<RowDerived> &pi,
                                                       const Eigen::MatrixBase<MatDerived> &m,
                                                       long terms) {
    using Scalar = typename MatDerived::Scalar;
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
    Vector v = Vector::Ones(m.rows());
    Scalar total = pi.dot(v.transpose());
    for (long k = 1; k <= terms; ++k) {
        v = (m * v).eval();
        total += pi.dot(v.transpose());
    }
    return total;
}

/// det(I - M) through a pivoted LU factorization.
template <typename Derived>
typename Derived::Scalar det_identity_minus(const Eigen::MatrixBase<Derived> &m) {
    using Scalar = typename Derived::Scalar;
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    const Matrix a = Matrix::Identity(m.rows(), m.cols()) - m;
    return Eigen::FullPivLU<Matrix>(a).determinant();
}

/// P D with D = diag(sigma^{g(y)}).
struct PDMatrix {
    Eigen::MatrixXd entries;
    double sigma;
    std::string source; ///< label of the originating environment
};

/// Value of sum_n pi (PD)^n 1, or +infinity when Sp(PD) >= 1.
struct SeriesValue {
    double value;
    double spectral_radius;
    bool converged;
    bool boundary;          ///< Sp(PD) within 1e-12 of 1, or the solve broke down
    std::string diagnostic;
};

/// Slack used to decide Sp(PD) < 1.
inline constexpr double kSpectralSlack = 1e-12;

PDMatrix build_pd(const EnvironmentSpec &spec, double sigma);

double spectral_radius(const Eigen::MatrixXd &m, const PerronOptions &options = {});
double spectral_radius(const PDMatrix &pd);

SeriesValue series_sum(const EnvironmentSpec &spec, double sigma);
SeriesValue series_sum(const EnvironmentSpec &spec, const StationaryDistribution &pi, double sigma);

double truncated_series(const EnvironmentSpec &spec, double sigma, long terms);

double det_i_minus_pd(const EnvironmentSpec &spec, double sigma);

} // namespace rwre
