#include "rwre/drift.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rwre {

namespace {

constexpr double kSigmaMin = 1e-9;
constexpr double kSigmaMax = 1e9;
constexpr double kBracketStart = 1e-6;
constexpr double kRelativeWidth = 1e-13;
constexpr double kFiniteDifferenceStep = 1e-6;

void require_p(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw InvalidArgument("p must lie in the open interval (0, 1)");
    }
}

void require_closed_p(double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw InvalidArgument("p must lie in [0, 1]");
    }
}

bool degenerate_p(double p) { return p < kDegenerateP || p > 1.0 - kDegenerateP; }

double sigma_of(double p) { return (1.0 - p) / p; }

Regime zero_drift_regime(double e_log_sigma0) {
    if (e_log_sigma0 < 0.0) {
        return Regime::TransientPlusZeroDrift;
    }
    return Regime::TransientMinusZeroDrift;
}

DriftResult drift_generic_impl(const EnvironmentSpec &spec, const StationaryDistribution &pi,
                               double p) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    const Eigen::VectorXi &g = spec.signs();
    if (g.minCoeff() == g.maxCoeff()) {
        // Every site has the same sign: a plain biased walk.
        const double v = g(0) * (2.0 * p - 1.0) + 0.0;
        return {v, DriftMethod::Generic, std::pow(sigma_of(p), g(0)), inf, '-', false,
                "constant environment"};
    }
    if (degenerate_p(p)) {
        return {0.0, DriftMethod::Generic, inf, inf, '-', false, "degenerate p: sign-only decision"};
    }
    const double sigma = sigma_of(p);
    const SeriesValue forward = series_sum(spec, pi, sigma);
    if (forward.converged) {
        return {1.0 / (2.0 * forward.value - 1.0), DriftMethod::Generic, forward.spectral_radius,
                forward.value, 'S', false, {}};
    }
    const SeriesValue backward = series_sum(spec, pi, 1.0 / sigma);
    if (backward.converged) {
        return {-1.0 / (2.0 * backward.value - 1.0), DriftMethod::Generic,
                backward.spectral_radius, backward.value, 'F', false, {}};
    }
    const bool boundary = forward.boundary || backward.boundary;
    return {0.0, DriftMethod::Generic, forward.spectral_radius, inf, '-', boundary,
            boundary ? "Sp(PD) at the convergence boundary" : "E[S] and E[F] both infinite"};
}

double bisect(const std::function<double(double)> &f, double lo, double hi, double f_lo,
              int &iterations) {
    iterations = 0;
    while (hi - lo > kRelativeWidth * hi && iterations < 400) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) {
            break;
        }
        const double f_mid = f(mid);
        ++iterations;
        if (f_mid == 0.0) {
            return mid;
        }
        if ((f_mid < 0.0) == (f_lo < 0.0)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace

std::string_view regime_code(Regime regime) {
    switch (regime) {
    case Regime::TransientPlusWithDrift:
        return "1a";
    case Regime::TransientMinusWithDrift:
        return "1b";
    case Regime::TransientPlusZeroDrift:
        return "2a";
    case Regime::TransientMinusZeroDrift:
        return "2b";
    case Regime::Recurrent:
        return "3";
    }
    return "?";
}

std::string_view regime_name(Regime regime) {
    switch (regime) {
    case Regime::TransientPlusWithDrift:
        return "TransientPlusWithDrift";
    case Regime::TransientMinusWithDrift:
        return "TransientMinusWithDrift";
    case Regime::TransientPlusZeroDrift:
        return "TransientPlusZeroDrift";
    case Regime::TransientMinusZeroDrift:
        return "TransientMinusZeroDrift";
    case Regime::Recurrent:
        return "Recurrent";
    }
    return "?";
}

std::string_view method_name(DriftMethod method) {
    switch (method) {
    case DriftMethod::Generic:
        return "generic";
    case DriftMethod::ClosedForm:
        return "closed";
    case DriftMethod::MonteCarlo:
        return "mc";
    }
    return "?";
}

RegimeReport classify(const EnvironmentSpec &spec, double p) {
    require_p(p);
    const StationaryDistribution pi = stationary_distribution(spec);
    const double e_u0 = mean_sign(spec, pi);
    const double clamped = std::clamp(p, kDegenerateP, 1.0 - kDegenerateP);
    const double sigma = sigma_of(clamped);

    RegimeReport report{};
    report.e_u0 = e_u0;
    // 0 * log(inf) would be NaN at p in {0, 1}; +0.0 also clears a negative zero.
    report.e_log_sigma0 = e_u0 == 0.0 ? 0.0 : e_u0 * std::log(sigma_of(p)) + 0.0;
    report.sp_forward = spectral_radius(build_pd(spec, sigma));
    report.sp_backward = spectral_radius(build_pd(spec, 1.0 / sigma));

    if (std::abs(e_u0) < kRecurrenceTolerance || std::abs(p - 0.5) < kRecurrenceTolerance) {
        report.regime = Regime::Recurrent;
        report.drift = 0.0;
        return report;
    }
    const DriftResult drift = drift_generic_impl(spec, pi, p);
    const bool towards_plus = report.e_log_sigma0 < 0.0;
    if (towards_plus && drift.value > 0.0) {
        report.regime = Regime::TransientPlusWithDrift;
        report.drift = drift.value;
    } else if (!towards_plus && drift.value < 0.0) {
        report.regime = Regime::TransientMinusWithDrift;
        report.drift = drift.value;
    } else {
        report.regime = zero_drift_regime(report.e_log_sigma0);
        report.drift = 0.0;
    }
    return report;
}

DriftResult drift_generic(const EnvironmentSpec &spec, double p) {
    require_p(p);
    return drift_generic_impl(spec, stationary_distribution(spec), p);
}

ClosedFormDrift piecewise_drift(double e_u0, double p_cutoff, double p,
                                const std::function<double(double)> &positive_branch) {
    require_closed_p(p);
    if (std::abs(e_u0) < kRecurrenceTolerance || std::abs(p - 0.5) < kRecurrenceTolerance) {
        return {Regime::Recurrent, 0.0, p_cutoff};
    }
    // E[log sigma_0] = E[U0] log((1-p)/p) < 0 sends the walk to +inf.
    const bool towards_plus = (e_u0 > 0.0) == (p > 0.5);
    // Drift is nonzero only strictly between 1/2 and p_cutoff (or its mirror 1 - p_cutoff).
    // The zero-drift side is closed, so p within rounding of the cutoff lands on it.
    if (std::abs(p - 0.5) >= std::abs(p_cutoff - 0.5) - kRecurrenceTolerance) {
        return {towards_plus ? Regime::TransientPlusZeroDrift : Regime::TransientMinusZeroDrift, 0.0,
                p_cutoff};
    }
    if (towards_plus) {
        return {Regime::TransientPlusWithDrift, std::max(0.0, positive_branch(p)), p_cutoff};
    }
    return {Regime::TransientMinusWithDrift, std::min(0.0, -positive_branch(1.0 - p)), p_cutoff};
}

ClosedFormDrift closed_form_iid(double alpha, double p) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw InvalidArgument("alpha must lie in [0, 1]");
    }
    if (alpha == 0.0 || alpha == 1.0) {
        // Constant environment: a plain biased walk, including p in {0, 1}.
        require_closed_p(p);
        const double v = (2.0 * alpha - 1.0) * (2.0 * p - 1.0) + 0.0;
        const Regime regime = v > 0.0   ? Regime::TransientPlusWithDrift
                              : v < 0.0 ? Regime::TransientMinusWithDrift
                                        : Regime::Recurrent;
        return {regime, v, alpha};
    }
    const auto branch = [alpha](double q) {
        return (2.0 * q - 1.0) * (alpha - q) / (alpha * (1.0 - q) + (1.0 - alpha) * q);
    };
    return piecewise_drift(2.0 * alpha - 1.0, alpha, p, branch);
}

double p_cutoff_markov(const MarkovParams &params) {
    return (1.0 - params.b) / ((1.0 - params.a) + (1.0 - params.b));
}

ClosedFormDrift closed_form_markov(const MarkovParams &params, double p) {
    const double a = params.a;
    const double b = params.b;
    if (!(a > 0.0 && a < 1.0 && b > 0.0 && b < 1.0)) {
        throw InvalidArgument("Markov parameters a, b must lie in (0, 1)");
    }
    const double k = (a - b) / (a + b);
    const auto branch = [a, b, k](double q) {
        return (2.0 * q - 1.0) * ((1.0 - b) * (1.0 - q) - (1.0 - a) * q) /
               ((b + k) * (1.0 - q) + (a - k) * q);
    };
    return piecewise_drift(k, p_cutoff_markov(params), p, branch);
}

ClosedFormDrift closed_form_markov_corr(double alpha, double rho, double p) {
    const MarkovParams params = markov_from_correlation(alpha, rho);
    const auto branch = [alpha, rho](double q) {
        const double mix = alpha * (1.0 - q) + (1.0 - alpha) * q;
        return (2.0 * q - 1.0) * (alpha - q + rho * (1.0 - alpha - q)) / (mix * (1.0 + rho) - rho);
    };
    return piecewise_drift(2.0 * alpha - 1.0, p_cutoff_markov(params), p, branch);
}

double p_cutoff_two_dep(const TwoDepParams &params) {
    const auto &[am, ap, bm, bp] = params;
    const double A = am + ap * bm - am * bm;
    const double B = bp + ap * bm - ap * bp;
    return (1.0 - B) / ((1.0 - A) + (1.0 - B));
}

ClosedFormDrift closed_form_two_dep(const TwoDepParams &params, double p) {
    const MomentParams2Dep moments = moments_two_dep(params);
    const auto &[am, ap, bm, bp] = params;
    const double A = am + ap * bm - am * bm;
    const double B = bp + ap * bm - ap * bp;
    const double d = am * (bm - bp - 1.0) + bp * (ap - am - 1.0);
    const double c0 = 2.0 * am * bp * (bm - bp);
    const double c3 = (B - A) * (2.0 - A - B);
    const double c1 = (B - A) * (1.0 - B) - c0 * (2.0 + ap - am) - 2.0 * am * bp;
    const double c2 = -c0 - c1 - c3 + 2.0 * am * bp * (ap - am);
    const auto branch = [=](double q) {
        const double numerator = (2.0 * q - 1.0) * d * q * (1.0 - q) * ((1.0 - B) * (1.0 - q) - (1.0 - A) * q);
        return numerator / (c0 + q * (c1 + q * (c2 + q * c3)));
    };
    return piecewise_drift(2.0 * moments.alpha - 1.0, p_cutoff_two_dep(params), p, branch);
}

double movavg_det_closed(double alpha, double sigma) {
    const double a = alpha;
    const double c = 1.0 - alpha;
    const double s = sigma;
    return -a * c * c / (s * s * s) + a * a * c * c / (s * s) - c * (1.0 - a + a * a) / s + 1.0 -
           2.0 * a * a * c * c - a * a * c * s * s * s + a * a * c * c * s * s -
           a * (1.0 - a + a * a) * s;
}

double sigma_cutoff_movavg(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw InvalidArgument("alpha must lie in (0, 1)");
    }
    if (std::abs(alpha - 0.5) < kRecurrenceTolerance) {
        throw InvalidArgument("no cutoff: E[U0]=0 for alpha = 1/2");
    }
    CutoffResult found{};
    const int direction = alpha > 0.5 ? -1 : 1;
    if (!bracket_root_away_from_one([alpha](double s) { return movavg_det_closed(alpha, s); },
                                    direction, found)) {
        // Root beyond the search window: the cutoff sits at the p boundary.
        return direction < 0 ? 0.0 : std::numeric_limits<double>::infinity();
    }
    return found.sigma_cutoff;
}

ClosedFormDrift closed_form_movavg(double alpha, double p) {
    if (alpha == 0.0 || alpha == 1.0) {
        return closed_form_iid(alpha, p);
    }
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw InvalidArgument("alpha must lie in [0, 1]");
    }
    const double e_u0 = (2.0 * alpha - 1.0) * (-2.0 * alpha * alpha + 2.0 * alpha + 1.0);
    double p_cut = 0.5;
    if (std::abs(e_u0) >= kRecurrenceTolerance) {
        p_cut = 1.0 / (1.0 + sigma_cutoff_movavg(alpha));
    }
    const double a = alpha;
    const auto branch = [a](double q) {
        const double a2 = a * a;
        const double a3 = a2 * a;
        const double a4 = a3 * a;
        const double a5 = a4 * a;
        const double t = 2.0 * q - 1.0;
        const double numerator =
            a4 * (-(1.0 - 2.0 * q) * (1.0 - 2.0 * q)) * (q - 1.0) * q +
            a3 * (1.0 - 2.0 * q * ((q - 2.0) * q * (q * (2.0 * q - 5.0) + 6.0) + 4.0)) +
            a2 * t * (q * (3.0 * q * ((q - 2.0) * q + 3.0) - 5.0) + 1.0) -
            a * t * t * q * q - (q - 1.0) * (q - 1.0) * q * q * q * t;
        const double denominator =
            -2.0 * a5 * t * t * t - a4 * t * t * ((q - 11.0) * q + 6.0) +
            a3 * t * (2.0 * q * (q * q * q - 9.0 * q + 10.0) - 5.0) -
            a2 * (q + 1.0) * t * (q * (q * (3.0 * q - 7.0) + 6.0) - 1.0) + a * q * q * t +
            (q - 1.0) * (q - 1.0) * q * q * q;
        return numerator / denominator;
    };
    return piecewise_drift(e_u0, p_cut, p, branch);
}

double drift_closed_iid(double alpha, double p) { return closed_form_iid(alpha, p).drift; }

double drift_closed_markov(const MarkovParams &params, double p) {
    return closed_form_markov(params, p).drift;
}

double drift_closed_markov_corr(double alpha, double rho, double p) {
    return closed_form_markov_corr(alpha, rho, p).drift;
}

double drift_closed_two_dep(const TwoDepParams &params, double p) {
    return closed_form_two_dep(params, p).drift;
}

double drift_closed_movavg(double alpha, double p) { return closed_form_movavg(alpha, p).drift; }

bool bracket_root_away_from_one(const std::function<double(double)> &f, int direction,
                                CutoffResult &result) {
    const double factor = direction > 0 ? 2.0 : 0.5;
    double near = direction > 0 ? 1.0 + kBracketStart : 1.0 - kBracketStart;
    double f_near = f(near);
    if (f_near == 0.0) {
        result = {near, 1.0 / (1.0 + near), near, near, 0};
        return true;
    }
    while (true) {
        double far = near * factor;
        far = std::clamp(far, kSigmaMin, kSigmaMax);
        if (far == near) {
            return false;
        }
        const double f_far = f(far);
        if (f_far == 0.0 || (f_far < 0.0) != (f_near < 0.0)) {
            double lo = std::min(near, far);
            double hi = std::max(near, far);
            const double f_lo = lo == near ? f_near : f_far;
            int iterations = 0;
            const double root = f_far == 0.0 ? far : bisect(f, lo, hi, f_lo, iterations);
            result = {root, 1.0 / (1.0 + root), lo, hi, iterations};
            return true;
        }
        near = far;
        f_near = f_far;
    }
}

CutoffResult cutoff(const EnvironmentSpec &spec) {
    const double e_u0 = mean_sign(spec);
    if (std::abs(e_u0) < kRecurrenceTolerance) {
        throw InvalidArgument("no cutoff: E[U0]=0");
    }
    const double h = kFiniteDifferenceStep;
    const double slope = (spectral_radius(build_pd(spec, 1.0 + h)) -
                          spectral_radius(build_pd(spec, 1.0 - h))) /
                         (2.0 * h);
    // Sp(PD) falls below 1 on the side where it decreases away from sigma = 1.
    int direction = slope < 0.0 ? 1 : -1;
    if (slope == 0.0) {
        direction = e_u0 > 0.0 ? -1 : 1;
    }
    const auto det = [&spec](double sigma) { return det_i_minus_pd(spec, sigma); };
    CutoffResult result{};
    if (bracket_root_away_from_one(det, direction, result)) {
        return result;
    }
    // A root closer to 1 than the first bracket point means E[U0] is nearly 0.
    const double start = direction > 0 ? 1.0 + kBracketStart : 1.0 - kBracketStart;
    if (spectral_radius(build_pd(spec, start)) < 1.0) {
        // det(I - PD) never crosses zero: the series converges all the way out,
        // so the positive-drift interval runs to p = 1 (or p = 0).
        constexpr double inf = std::numeric_limits<double>::infinity();
        return direction > 0 ? CutoffResult{inf, 0.0, kSigmaMax, inf, 0}
                             : CutoffResult{0.0, 1.0, 0.0, kSigmaMin, 0};
    }
    throw ConvergenceError("no sign change of det(I - PD) for sigma in [1e-9, 1e9]", e_u0);
}

} // namespace rwre
