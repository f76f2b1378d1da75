#include "rwre/spectral.hpp"

#include <cmath>

namespace rwre {

namespace {

void require_positive_sigma(double sigma) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw InvalidArgument("sigma must be a positive finite number");
    }
}

} // namespace

PDMatrix build_pd(const EnvironmentSpec &spec, double sigma) {
    require_positive_sigma(sigma);
    const Eigen::RowVectorXd weights =
        spec.signs().cast<double>().transpose().unaryExpr([sigma](double g) { return std::pow(sigma, g); });
    Eigen::MatrixXd entries = spec.transition().array().rowwise() * weights.array();
    return PDMatrix{std::move(entries), sigma, spec.label()};
}

double spectral_radius(const Eigen::MatrixXd &m, const PerronOptions &options) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        throw InvalidArgument("spectral radius needs a non-empty square matrix");
    }
    if ((m.array() < 0.0).any()) {
        throw InvalidArgument("spectral radius expects a nonnegative matrix");
    }
    return perron_root(m, options).value;
}

double spectral_radius(const PDMatrix &pd) { return spectral_radius(pd.entries); }

SeriesValue series_sum(const EnvironmentSpec &spec, const StationaryDistribution &pi, double sigma) {
    const PDMatrix pd = build_pd(spec, sigma);
    const double sp = spectral_radius(pd);
    constexpr double inf = std::numeric_limits<double>::infinity();

    if (sp > 1.0 + kSpectralSlack) {
        return {inf, sp, false, false, "Sp(PD) > 1: series diverges"};
    }
    if (sp >= 1.0 - kSpectralSlack) {
        return {inf, sp, false, true, "Sp(PD) within 1e-12 of 1: boundary"};
    }
    const double value = geometric_series_value(pi, pd.entries);
    if (!std::isfinite(value) || value < 1.0 - 1e-9) {
        return {inf, sp, false, true, "linear solve broke down near Sp(PD) = 1"};
    }
    return {value, sp, true, false, {}};
}

SeriesValue series_sum(const EnvironmentSpec &spec, double sigma) {
    return series_sum(spec, stationary_distribution(spec), sigma);
}

double truncated_series(const EnvironmentSpec &spec, double sigma, long terms) {
    if (terms < 0) {
        throw InvalidArgument("number of terms must be nonnegative");
    }
    const PDMatrix pd = build_pd(spec, sigma);
    return truncated_geometric_series(stationary_distribution(spec), pd.entries, terms);
}

double det_i_minus_pd(const EnvironmentSpec &spec, double sigma) {
    return det_identity_minus(build_pd(spec, sigma).entries);
}

} // namespace rwre
