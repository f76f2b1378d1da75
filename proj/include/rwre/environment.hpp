#pragma once

#include <map>
#include <string>

#include <Eigen/Dense>

#include "rwre/error.hpp"

namespace rwre {

/// Row vector of stationary probabilities, indexed like the chain states.
using StationaryDistribution = Eigen::RowVectorXd;

/// Two-state environment: a = P(-1 -> +1), b = P(+1 -> -1).
struct MarkovParams {
    double a;
    double b;
};

/// 2-dependent environment. The subscript is U_{i-2}; a_* are the
/// -1 -> +1 probabilities, b_* the +1 -> -1 probabilities.
///
/// Entries live in the closed interval [0, 1]: the boundary of the
/// moment-parameterized family is reachable through two_dep_from_moments.
/// build_two_dep only accepts the open interval.
struct TwoDepParams {
    double a_minus;
    double a_plus;
    double b_minus;
    double b_plus;
};

/// Marginal and correlation summary of (U0, U1, U2) for a 2-dependent chain.
struct MomentParams2Dep {
    double alpha; ///< P(U0 = +1)
    double rho01; ///< corr(U0, U1)
    double rho02; ///< corr(U0, U2)
    double e012;  ///< E[U0 U1 U2]
};

/// Histories are strings of '-' / '+' of length k-1, oldest site first.
using KDepTable = std::map<std::string, MarkovParams>;

/**
 * Finite-state Markov chain driving a +-1 environment: U_i = g(Y_i).
 *
 * Immutable; construction validates row-stochasticity, the sign map and
 * irreducibility of P.
 */
class EnvironmentSpec {
public:
    static EnvironmentSpec create(Eigen::MatrixXd transition, Eigen::VectorXi signs,
                                  std::string label);

    Eigen::Index states() const { return transition_.rows(); }
    const Eigen::MatrixXd &transition() const { return transition_; }
    const Eigen::VectorXi &signs() const { return signs_; }
    const std::string &label() const { return label_; }

    /// Same chain with every sign flipped (relabels +1 <-> -1).
    EnvironmentSpec mirrored() const;

private:
    EnvironmentSpec(Eigen::MatrixXd transition, Eigen::VectorXi signs, std::string label)
        : transition_(std::move(transition)), signs_(std::move(signs)), label_(std::move(label)) {}

    Eigen::MatrixXd transition_;
    Eigen::VectorXi signs_;
    std::string label_;
};

/// True when every state reaches every other along positive entries.
bool is_irreducible(const Eigen::MatrixXd &transition);

EnvironmentSpec build_iid(double alpha);
EnvironmentSpec build_markov(const MarkovParams &params);
EnvironmentSpec build_two_dep(const TwoDepParams &params);
EnvironmentSpec build_k_dep(int k, const KDepTable &table);
EnvironmentSpec build_moving_average(double alpha);

/// Solves pi (P - I) = 0, sum(pi) = 1 with the last balance equation
/// replaced by the normalization row.
StationaryDistribution stationary_distribution(const EnvironmentSpec &spec);

/// E[U0] = sum_y pi_y g(y).
double mean_sign(const EnvironmentSpec &spec);
double mean_sign(const EnvironmentSpec &spec, const StationaryDistribution &pi);

MarkovParams markov_from_correlation(double alpha, double rho);

MomentParams2Dep moments_two_dep(const TwoDepParams &params);
TwoDepParams two_dep_from_moments(const MomentParams2Dep &moments);

} // namespace rwre
