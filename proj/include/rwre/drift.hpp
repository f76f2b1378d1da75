#pragma once

#include <functional>
#include <string>
#include <string_view>

#include "rwre/environment.hpp"
#include "rwre/spectral.hpp"

namespace rwre {

/// Transience/recurrence classes shared by all swap-model environments.
/// Codes follow the theorem case labels: 1a, 1b, 2a, 2b, 3.
enum class Regime {
    TransientPlusWithDrift,  // 1a
    TransientMinusWithDrift, // 1b
    TransientPlusZeroDrift,  // 2a
    TransientMinusZeroDrift, // 2b
    Recurrent,               // 3
};

std::string_view regime_code(Regime regime);
std::string_view regime_name(Regime regime);

struct RegimeReport {
    Regime regime;
    double drift;
    double e_log_sigma0;
    double e_u0;
    double sp_forward;  ///< Sp(PD(sigma))
    double sp_backward; ///< Sp(PD(1/sigma))
};

enum class DriftMethod { Generic, ClosedForm, MonteCarlo };
std::string_view method_name(DriftMethod method);

struct DriftResult {
    double value;
    DriftMethod method;
    double spectral_radius; ///< Sp of the series that produced the value (forward if none did)
    double series_value;    ///< E[S] or E[F]; +infinity when neither converged
    char series;            ///< 'S', 'F' or '-'
    bool boundary;
    std::string diagnostic;
};

struct CutoffResult {
    double sigma_cutoff;
    double p_cutoff;
    double bracket_lo;
    double bracket_hi;
    int iterations;
};

/// Outside this band p is treated as degenerate: sigma is not evaluated.
inline constexpr double kDegenerateP = 1e-9;
/// |E[U0]| or |p - 1/2| below this counts as exactly zero.
inline constexpr double kRecurrenceTolerance = 1e-12;

RegimeReport classify(const EnvironmentSpec &spec, double p);

/// V = 1/(2E[S]-1) when E[S] < inf, else -1/(2E[F]-1) when E[F] < inf, else 0.
/// E[F] is evaluated as the forward series at 1/sigma.
DriftResult drift_generic(const EnvironmentSpec &spec, double p);

// ---------------------------------------------------------------------------
// Closed forms
// ---------------------------------------------------------------------------

struct ClosedFormDrift {
    Regime regime;
    double drift;
    double p_cutoff;
};

/**
 * Five-case regime engine shared by every closed-form family.
 *
 * `e_u0` fixes the direction of transience and `p_cutoff` is the end of the
 * positive-drift interval (on the same side of 1/2 as sign(e_u0)).
 * `positive_branch(q)` is the family's drift formula, valid for q between
 * 1/2 and p_cutoff; the negative branch is -positive_branch(1 - p).
 */
ClosedFormDrift piecewise_drift(double e_u0, double p_cutoff, double p,
                                const std::function<double(double)> &positive_branch);

ClosedFormDrift closed_form_iid(double alpha, double p);
ClosedFormDrift closed_form_markov(const MarkovParams &params, double p);
ClosedFormDrift closed_form_markov_corr(double alpha, double rho, double p);
ClosedFormDrift closed_form_two_dep(const TwoDepParams &params, double p);
ClosedFormDrift closed_form_movavg(double alpha, double p);

double drift_closed_iid(double alpha, double p);
double drift_closed_markov(const MarkovParams &params, double p);
double drift_closed_markov_corr(double alpha, double rho, double p);
double drift_closed_two_dep(const TwoDepParams &params, double p);
double drift_closed_movavg(double alpha, double p);

/// (1-b) / ((1-a) + (1-b)).
double p_cutoff_markov(const MarkovParams &params);
/// (1-B) / ((1-A) + (1-B)) with A = a- + a+ b- - a- b-, B = b+ + a+ b- - a+ b+.
double p_cutoff_two_dep(const TwoDepParams &params);
/// Closed-form det(I - PD) of the moving-average chain as a Laurent polynomial in sigma.
double movavg_det_closed(double alpha, double sigma);
/// Root != 1 of movavg_det_closed, found by bisection.
double sigma_cutoff_movavg(double alpha);

// ---------------------------------------------------------------------------
// Cutoff
// ---------------------------------------------------------------------------

/// Root finder used by `cutoff`: walks away from sigma = 1 on the given side
/// (direction +1 upward, -1 downward) in factors of 2 until f changes sign,
/// then bisects. Returns false when no sign change exists in [1e-9, 1e9].
bool bracket_root_away_from_one(const std::function<double(double)> &f, int direction,
                                CutoffResult &result);

/// sigma_cutoff != 1 with det(I - PD(sigma_cutoff)) = 0 and p_cutoff = 1/(1+sigma_cutoff).
CutoffResult cutoff(const EnvironmentSpec &spec);

} // namespace rwre
