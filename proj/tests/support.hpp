#pragma once

#include <array>
#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "rwre/environment.hpp"

namespace rwre::testing {

inline double uniform(std::mt19937_64 &rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Random irreducible chain with 2..max_states states and both signs present.
/// A Hamiltonian cycle guarantees irreducibility; other entries are zeroed
/// at random to exercise sparse patterns.
inline EnvironmentSpec random_spec(std::mt19937_64 &rng, int max_states = 6) {
    const int m = std::uniform_int_distribution<int>(2, max_states)(rng);
    Eigen::MatrixXd P = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            if (j == (i + 1) % m || uniform(rng, 0.0, 1.0) < 0.6) {
                P(i, j) = uniform(rng, 0.05, 1.0);
            }
        }
        P.row(i) /= P.row(i).sum();
    }
    Eigen::VectorXi g(m);
    for (int i = 0; i < m; ++i) {
        g(i) = uniform(rng, 0.0, 1.0) < 0.5 ? -1 : 1;
    }
    g(0) = -1;
    g(m - 1) = 1;
    return EnvironmentSpec::create(P, g, "random");
}

inline TwoDepParams random_two_dep(std::mt19937_64 &rng, double lo = 0.05, double hi = 0.95) {
    return {uniform(rng, lo, hi), uniform(rng, lo, hi), uniform(rng, lo, hi), uniform(rng, lo, hi)};
}

inline TwoDepParams mirror(const TwoDepParams &t) {
    return {t.b_plus, t.b_minus, t.a_plus, t.a_minus};
}

/// 2-dependent A and B.
inline std::array<double, 2> two_dep_ab(const TwoDepParams &t) {
    const double A = t.a_minus + t.a_plus * t.b_minus - t.a_minus * t.b_minus;
    const double B = t.b_plus + t.a_plus * t.b_minus - t.a_plus * t.b_plus;
    return {A, B};
}

/// Balance-equation solution for the 2-dependent chain, states (-,-), (-,+), (+,-), (+,+).
inline Eigen::RowVector4d two_dep_pi_by_hand(const TwoDepParams &t) {
    Eigen::RowVector4d w((1.0 - t.a_plus) / t.a_minus, 1.0, 1.0, (1.0 - t.b_minus) / t.b_plus);
    return w / w.sum();
}

/// Moments of (U0, U1, U2) by enumerating all eight outcomes.
inline MomentParams2Dep brute_force_moments(const TwoDepParams &t) {
    const Eigen::RowVector4d pi = two_dep_pi_by_hand(t);
    double m1 = 0.0, e01 = 0.0, e02 = 0.0, e012 = 0.0;
    for (int s = 0; s < 4; ++s) {
        const int u0 = (s & 2) ? 1 : -1;
        const int u1 = (s & 1) ? 1 : -1;
        const double a = u0 > 0 ? t.a_plus : t.a_minus;
        const double b = u0 > 0 ? t.b_plus : t.b_minus;
        const double up = u1 > 0 ? 1.0 - b : a;
        for (int u2 : {-1, 1}) {
            const double w = pi(s) * (u2 > 0 ? up : 1.0 - up);
            m1 += w * u0;
            e01 += w * u0 * u1;
            e02 += w * u0 * u2;
            e012 += w * u0 * u1 * u2;
        }
    }
    const double var = 1.0 - m1 * m1;
    return {(1.0 + m1) / 2.0, (e01 - m1 * m1) / var, (e02 - m1 * m1) / var, e012};
}

} // namespace rwre::testing
