#include "rwre/environment.hpp"

#include <cmath>
#include <sstream>
#include <vector>

namespace rwre {

namespace {

constexpr double kRowSumTolerance = 1e-12;
constexpr double kStationaryResidual = 1e-10;
constexpr double kBoundarySnap = 1e-12;

std::string format_value(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

void require_open_probability(const char *name, double x) {
    if (!(x > 0.0 && x < 1.0)) {
        throw InvalidArgument(std::string(name) + " = " + format_value(x) +
                              " must lie in the open interval (0, 1)");
    }
}

void require_closed_probability(const char *name, double x) {
    if (!(x >= 0.0 && x <= 1.0)) {
        throw InvalidArgument(std::string(name) + " = " + format_value(x) +
                              " must lie in [0, 1]");
    }
}

std::vector<bool> reachable(const Eigen::MatrixXd &adjacency, bool transpose) {
    const Eigen::Index m = adjacency.rows();
    std::vector<bool> seen(static_cast<std::size_t>(m), false);
    std::vector<Eigen::Index> stack{0};
    seen[0] = true;
    while (!stack.empty()) {
        const Eigen::Index y = stack.back();
        stack.pop_back();
        for (Eigen::Index z = 0; z < m; ++z) {
            const double w = transpose ? adjacency(z, y) : adjacency(y, z);
            if (w > 0.0 && !seen[static_cast<std::size_t>(z)]) {
                seen[static_cast<std::size_t>(z)] = true;
                stack.push_back(z);
            }
        }
    }
    return seen;
}

std::string history_key(unsigned bits, int length) {
    std::string key(static_cast<std::size_t>(length), '-');
    for (int i = 0; i < length; ++i) {
        if ((bits >> (length - 1 - i)) & 1U) {
            key[static_cast<std::size_t>(i)] = '+';
        }
    }
    return key;
}

// Snap values within rounding distance of [0, 1] onto the interval.
double snap_unit(double x) {
    if (x < 0.0 && x > -kBoundarySnap) {
        return 0.0;
    }
    if (x > 1.0 && x < 1.0 + kBoundarySnap) {
        return 1.0;
    }
    return x;
}

} // namespace

EnvironmentSpec EnvironmentSpec::create(Eigen::MatrixXd transition, Eigen::VectorXi signs,
                                        std::string label) {
    const Eigen::Index m = transition.rows();
    if (m < 1 || transition.cols() != m) {
        throw InvalidArgument("transition matrix must be square and non-empty");
    }
    if (signs.size() != m) {
        throw InvalidArgument("sign map has " + std::to_string(signs.size()) +
                              " entries, expected " + std::to_string(m));
    }
    if (!transition.allFinite() || (transition.array() < 0.0).any() ||
        (transition.array() > 1.0).any()) {
        throw InvalidArgument("transition matrix entries must lie in [0, 1]");
    }
    for (Eigen::Index y = 0; y < m; ++y) {
        const double row = transition.row(y).sum();
        if (std::abs(row - 1.0) > kRowSumTolerance) {
            throw InvalidArgument("row " + std::to_string(y) + " of the transition matrix sums to " +
                                  format_value(row));
        }
        if (signs(y) != -1 && signs(y) != 1) {
            throw InvalidArgument("sign map must take values -1 or +1 (state " +
                                  std::to_string(y) + ")");
        }
    }
    if (!is_irreducible(transition)) {
        throw InvalidArgument("transition matrix is reducible");
    }
    return EnvironmentSpec(std::move(transition), std::move(signs), std::move(label));
}

EnvironmentSpec EnvironmentSpec::mirrored() const {
    return EnvironmentSpec(transition_, -signs_, label_ + " (mirrored)");
}

bool is_irreducible(const Eigen::MatrixXd &transition) {
    for (bool b : reachable(transition, false)) {
        if (!b) {
            return false;
        }
    }
    for (bool b : reachable(transition, true)) {
        if (!b) {
            return false;
        }
    }
    return true;
}

EnvironmentSpec build_iid(double alpha) {
    require_open_probability("alpha", alpha);
    Eigen::MatrixXd P(2, 2);
    P << 1.0 - alpha, alpha, 1.0 - alpha, alpha;
    Eigen::VectorXi g(2);
    g << -1, 1;
    return EnvironmentSpec::create(std::move(P), std::move(g), "iid(" + format_value(alpha) + ")");
}

EnvironmentSpec build_markov(const MarkovParams &params) {
    require_open_probability("a", params.a);
    require_open_probability("b", params.b);
    Eigen::MatrixXd P(2, 2);
    P << 1.0 - params.a, params.a, params.b, 1.0 - params.b;
    Eigen::VectorXi g(2);
    g << -1, 1;
    return EnvironmentSpec::create(std::move(P), std::move(g),
                                   "markov(" + format_value(params.a) + "," +
                                       format_value(params.b) + ")");
}

EnvironmentSpec build_two_dep(const TwoDepParams &params) {
    require_open_probability("a_minus", params.a_minus);
    require_open_probability("a_plus", params.a_plus);
    require_open_probability("b_minus", params.b_minus);
    require_open_probability("b_plus", params.b_plus);
    const auto &[am, ap, bm, bp] = params;
    // States (U_{i-1}, U_i): (-,-), (-,+), (+,-), (+,+).
    Eigen::MatrixXd P(4, 4);
    P << 1.0 - am, am, 0.0, 0.0,
         0.0, 0.0, bm, 1.0 - bm,
         1.0 - ap, ap, 0.0, 0.0,
         0.0, 0.0, bp, 1.0 - bp;
    Eigen::VectorXi g(4);
    g << -1, 1, -1, 1;
    return EnvironmentSpec::create(std::move(P), std::move(g),
                                   "twodep(" + format_value(am) + "," + format_value(ap) + "," +
                                       format_value(bm) + "," + format_value(bp) + ")");
}

EnvironmentSpec build_k_dep(int k, const KDepTable &table) {
    if (k < 1 || k > 20) {
        throw InvalidArgument("k must lie in [1, 20], got " + std::to_string(k));
    }
    const unsigned histories = 1U << (k - 1);
    if (table.size() != histories) {
        for (const auto &[key, unused] : table) {
            (void)unused;
            if (key.size() != static_cast<std::size_t>(k - 1) ||
                key.find_first_not_of("+-") != std::string::npos) {
                throw InvalidArgument("unknown history key '" + key + "' for k = " +
                                      std::to_string(k));
            }
        }
    }
    std::vector<MarkovParams> by_history(histories);
    for (unsigned h = 0; h < histories; ++h) {
        const std::string key = history_key(h, k - 1);
        const auto it = table.find(key);
        if (it == table.end()) {
            throw InvalidArgument("missing k-dependent table entry for history '" + key + "'");
        }
        require_open_probability(("a[" + key + "]").c_str(), it->second.a);
        require_open_probability(("b[" + key + "]").c_str(), it->second.b);
        by_history[h] = it->second;
    }

    const Eigen::Index m = Eigen::Index{1} << k;
    const unsigned mask = static_cast<unsigned>(m) - 1U;
    Eigen::MatrixXd P = Eigen::MatrixXd::Zero(m, m);
    Eigen::VectorXi g(m);
    for (unsigned s = 0; s < static_cast<unsigned>(m); ++s) {
        const bool last_plus = (s & 1U) != 0;
        const MarkovParams &row = by_history[s >> 1];
        const unsigned to_minus = (s << 1) & mask;
        const unsigned to_plus = to_minus | 1U;
        P(s, to_minus) = last_plus ? row.b : 1.0 - row.a;
        P(s, to_plus) = last_plus ? 1.0 - row.b : row.a;
        g(s) = last_plus ? 1 : -1;
    }
    return EnvironmentSpec::create(std::move(P), std::move(g), "kdep(" + std::to_string(k) + ")");
}

EnvironmentSpec build_moving_average(double alpha) {
    require_open_probability("alpha", alpha);
    // States (u_i, u_{i+1}, u_{i+2}) in lexicographic order, -1 < +1.
    Eigen::MatrixXd P = Eigen::MatrixXd::Zero(8, 8);
    Eigen::VectorXi g(8);
    for (unsigned s = 0; s < 8; ++s) {
        const unsigned shifted = (s << 1) & 7U;
        P(s, shifted) = 1.0 - alpha;
        P(s, shifted | 1U) = alpha;
        const int plus_count = static_cast<int>((s & 1U) + ((s >> 1) & 1U) + ((s >> 2) & 1U));
        g(s) = plus_count >= 2 ? 1 : -1;
    }
    return EnvironmentSpec::create(std::move(P), std::move(g), "movavg(" + format_value(alpha) + ")");
}

StationaryDistribution stationary_distribution(const EnvironmentSpec &spec) {
    const Eigen::Index m = spec.states();
    Eigen::MatrixXd system = spec.transition().transpose() - Eigen::MatrixXd::Identity(m, m);
    system.row(m - 1).setOnes();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
    rhs(m - 1) = 1.0;

    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(system);
    if (!(lu.rcond() > 1e-14)) {
        throw InvalidArgument("stationary system is singular: chain is not irreducible");
    }
    Eigen::VectorXd pi = lu.solve(rhs);
    if (!pi.allFinite() || (pi.array() < -kStationaryResidual).any()) {
        throw InvalidArgument("stationary system has no probability solution");
    }
    pi = pi.cwiseMax(0.0);
    pi /= pi.sum();

    const double residual = (pi.transpose() * spec.transition() - pi.transpose()).cwiseAbs().maxCoeff();
    if (residual > kStationaryResidual) {
        throw InvalidArgument("stationary solve residual " + format_value(residual) +
                              " exceeds tolerance");
    }
    return pi.transpose();
}

double mean_sign(const EnvironmentSpec &spec, const StationaryDistribution &pi) {
    return pi.dot(spec.signs().cast<double>().transpose());
}

double mean_sign(const EnvironmentSpec &spec) {
    return mean_sign(spec, stationary_distribution(spec));
}

MarkovParams markov_from_correlation(double alpha, double rho) {
    require_open_probability("alpha", alpha);
    const double lower = std::max(1.0 - 1.0 / alpha, 1.0 - 1.0 / (1.0 - alpha));
    if (!(rho > lower && rho < 1.0)) {
        throw InvalidArgument("rho = " + format_value(rho) + " infeasible for alpha = " +
                              format_value(alpha) + ": need " + format_value(lower) +
                              " < rho < 1");
    }
    const MarkovParams params{(1.0 - rho) * alpha, (1.0 - rho) * (1.0 - alpha)};
    require_open_probability("a", params.a);
    require_open_probability("b", params.b);
    return params;
}

MomentParams2Dep moments_two_dep(const TwoDepParams &params) {
    require_closed_probability("a_minus", params.a_minus);
    require_closed_probability("a_plus", params.a_plus);
    require_closed_probability("b_minus", params.b_minus);
    require_closed_probability("b_plus", params.b_plus);
    const auto &[am, ap, bm, bp] = params;

    const double weight_plus = am * (1.0 - bm + bp);
    const double weight_minus = bp * (1.0 - ap + am);
    const double total = weight_plus + weight_minus;
    const double run_minus = am + 1.0 - ap;
    const double run_plus = bp + 1.0 - bm;
    if (!(total > 0.0 && run_minus > 0.0 && run_plus > 0.0)) {
        throw InvalidArgument("2-dependent parameters do not define an ergodic chain");
    }

    MomentParams2Dep out{};
    out.alpha = weight_plus / total;
    out.rho01 = 1.0 - am / run_minus - bp / run_plus;
    out.rho02 = 1.0 - (2.0 - ap - bm) * (1.0 - out.rho01);
    out.e012 = (4.0 * am * bp * (bm - ap) + weight_plus - weight_minus) / total;
    return out;
}

TwoDepParams two_dep_from_moments(const MomentParams2Dep &moments) {
    const auto &[alpha, r1, r2, e] = moments;
    require_open_probability("alpha", alpha);
    if (!(r1 >= -1.0 && r1 < 1.0)) {
        throw InvalidArgument("rho01 = " + format_value(r1) + " must lie in [-1, 1)");
    }
    if (!(r2 >= -1.0 && r2 <= 1.0)) {
        throw InvalidArgument("rho02 = " + format_value(r2) + " must lie in [-1, 1]");
    }
    if (!(e >= -1.0 && e <= 1.0)) {
        throw InvalidArgument("e012 = " + format_value(e) + " must lie in [-1, 1]");
    }
    const double den_am = 8.0 * (alpha - 1.0) * (alpha * (r1 - 1.0) + 1.0);
    const double den_mid = 8.0 * (alpha - 1.0) * alpha * (r1 - 1.0);
    const double den_bp = 8.0 * alpha * (alpha * (r1 - 1.0) - r1);
    if (den_am == 0.0 || den_mid == 0.0 || den_bp == 0.0) {
        throw InvalidArgument("moment tuple is degenerate (zero denominator)");
    }

    TwoDepParams out{};
    out.a_minus = -(2.0 * alpha * (2.0 * alpha * (r2 - 1.0) - 2.0 * r2 + 1.0) + e + 1.0) / den_am;
    out.b_minus = (2.0 * alpha * (alpha * (4.0 * r1 - 2.0 * (r2 + 1.0)) - 4.0 * r1 + 2.0 * r2 + 1.0) +
                   e + 1.0) /
                  den_mid;
    out.a_plus = -(2.0 * alpha * (2.0 * alpha * (-2.0 * r1 + r2 + 1.0) + 4.0 * r1 - 2.0 * r2 - 3.0) +
                   e + 1.0) /
                 den_mid;
    out.b_plus = (2.0 * alpha * (-2.0 * alpha * (r2 - 1.0) + 2.0 * r2 - 3.0) + e + 1.0) / den_bp;

    out.a_minus = snap_unit(out.a_minus);
    out.a_plus = snap_unit(out.a_plus);
    out.b_minus = snap_unit(out.b_minus);
    out.b_plus = snap_unit(out.b_plus);
    require_closed_probability("a_minus", out.a_minus);
    require_closed_probability("a_plus", out.a_plus);
    require_closed_probability("b_minus", out.b_minus);
    require_closed_probability("b_plus", out.b_plus);
    return out;
}

} // namespace rwre
