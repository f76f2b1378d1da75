#include "rwre/sweep.hpp"

#include <cmath>
#include <cstdio>

#include <json.hpp>

namespace rwre {

namespace {

// alpha = 1, 0.95, ..., 0.55 as exact hundredths.
std::vector<double> legend_alphas() {
    std::vector<double> out;
    for (int k = 0; k < 10; ++k) {
        out.push_back(static_cast<double>(100 - 5 * k) / 100.0);
    }
    return out;
}

std::string short_number(double x) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%g", x);
    return buffer;
}

bool correlation_feasible(double alpha, double rho) {
    if (!(rho < 1.0)) {
        return false;
    }
    if (alpha == 1.0) {
        return rho >= 0.0;
    }
    return rho > std::max(1.0 - 1.0 / alpha, 1.0 - 1.0 / (1.0 - alpha));
}

// The deterministic environment alpha = 1 has no correlation structure; its
// drift is the plain biased walk, which the iid form covers.
ClosedFormDrift markov_curve(double alpha, double rho, double p) {
    if (alpha == 1.0) {
        return closed_form_iid(1.0, p);
    }
    return closed_form_markov_corr(alpha, rho, p);
}

std::string csv_field(const std::string &s) {
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    return out + "\"";
}

void require_points(int points) {
    if (points < 2 || points > 1000000) {
        throw InvalidArgument("--points must lie in [2, 1000000]");
    }
}

std::vector<double> custom_grid(double p_min, double p_max, int points) {
    if (!(p_min > 0.0 && p_max < 1.0 && p_min <= p_max)) {
        throw InvalidArgument("custom sweep needs 0 < p-min <= p-max < 1");
    }
    if (points < 1 || points > 1000000) {
        throw InvalidArgument("--points must lie in [1, 1000000]");
    }
    return linspace(p_min, p_max, points);
}

} // namespace

std::string format_number(double x) {
    char buffer[40];
    std::snprintf(buffer, sizeof buffer, "%.17g", x);
    return buffer;
}

std::vector<double> linspace(double lo, double hi, int points) {
    if (points < 1) {
        throw InvalidArgument("grid needs at least one point");
    }
    if (points == 1) {
        return {lo};
    }
    std::vector<double> grid(static_cast<std::size_t>(points));
    const int last = points - 1;
    for (int i = 0; i <= last; ++i) {
        grid[static_cast<std::size_t>(i)] = (lo * (last - i) + hi * i) / last;
    }
    return grid;
}

void SweepTable::add_row(std::vector<Cell> row) {
    if (row.size() != columns_.size()) {
        throw InvalidArgument("row has " + std::to_string(row.size()) + " cells, table has " +
                              std::to_string(columns_.size()) + " columns");
    }
    rows_.push_back(std::move(row));
}

std::size_t SweepTable::column_index(std::string_view name) const {
    for (std::size_t i = 0; i < columns_.size(); ++i) {
        if (columns_[i] == name) {
            return i;
        }
    }
    throw InvalidArgument("no column named '" + std::string(name) + "'");
}

std::string SweepTable::to_csv() const {
    std::string out;
    for (std::size_t i = 0; i < columns_.size(); ++i) {
        out += (i ? "," : "") + csv_field(columns_[i]);
    }
    out += '\n';
    for (const auto &row : rows_) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) {
                out += ',';
            }
            if (const auto *x = std::get_if<double>(&row[i])) {
                out += format_number(*x);
            } else {
                out += csv_field(std::get<std::string>(row[i]));
            }
        }
        out += '\n';
    }
    return out;
}

std::string SweepTable::to_json() const {
    nlohmann::ordered_json doc = nlohmann::ordered_json::array();
    for (const auto &row : rows_) {
        nlohmann::ordered_json record = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < row.size(); ++i) {
            std::visit([&](const auto &v) { record[columns_[i]] = v; }, row[i]);
        }
        doc.push_back(std::move(record));
    }
    return doc.dump(1) + "\n";
}

SweepTable sweep_fig2(int points) {
    require_points(points);
    SweepTable table({"alpha", "p", "drift", "regime", "p_cutoff"});
    const auto grid = linspace(0.0, 1.0, points);
    for (double alpha : grid) {
        for (double p : grid) {
            const ClosedFormDrift r = closed_form_iid(alpha, p);
            table.add_row({alpha, p, r.drift, std::string(regime_code(r.regime)), r.p_cutoff});
        }
    }
    return table;
}

SweepTable sweep_fig3(int points) {
    require_points(points);
    struct Curve {
        double rho;
        double alpha;
    };
    std::vector<Curve> curves;
    std::vector<std::string> columns{"p"};
    for (double rho : {0.0, 0.3, -0.3}) {
        for (double alpha : legend_alphas()) {
            if (correlation_feasible(alpha, rho)) {
                curves.push_back({rho, alpha});
                columns.push_back("V_rho" + short_number(rho) + "_alpha" + short_number(alpha));
            }
        }
    }
    SweepTable table(std::move(columns));
    for (double p : linspace(0.0, 1.0, points)) {
        std::vector<Cell> row{p};
        for (const Curve &c : curves) {
            row.emplace_back(markov_curve(c.alpha, c.rho, p).drift);
        }
        table.add_row(std::move(row));
    }
    return table;
}

SweepTable sweep_fig4(int points) {
    require_points(points);
    SweepTable table({"p", "alpha", "rho", "drift", "regime", "p_cutoff"});
    const auto rhos = linspace(-1.0, 1.0, points);
    for (double p : {0.7, 0.9}) {
        for (double alpha : legend_alphas()) {
            for (double rho : rhos) {
                if (!correlation_feasible(alpha, rho)) {
                    continue;
                }
                const ClosedFormDrift r = markov_curve(alpha, rho, p);
                table.add_row({p, alpha, rho, r.drift, std::string(regime_code(r.regime)), r.p_cutoff});
            }
        }
    }
    return table;
}

SweepTable sweep_fig5(int points) {
    require_points(points);
    constexpr double alpha = 0.95;
    constexpr double rho01 = 0.3;
    std::vector<std::string> columns{"p", "iid", "markov", "maximal"};
    std::vector<TwoDepParams> family;
    family.push_back(two_dep_from_moments({alpha, rho01, -1.0 / 19.0, 417.0 / 500.0}));
    for (int i = 0; i <= 4; ++i) {
        const double e012 = (824.0 + 5.0 * i) / 1000.0;
        family.push_back(two_dep_from_moments({alpha, rho01, 0.0, e012}));
        columns.push_back("rho02_0_e012_" + short_number(e012));
    }
    const MarkovParams markov = markov_from_correlation(alpha, rho01);

    SweepTable table(std::move(columns));
    for (double p : linspace(0.0, 1.0, points)) {
        std::vector<Cell> row{p, drift_closed_iid(alpha, p), drift_closed_markov(markov, p)};
        for (const TwoDepParams &params : family) {
            row.emplace_back(drift_closed_two_dep(params, p));
        }
        table.add_row(std::move(row));
    }
    return table;
}

SweepTable sweep_fig6(int points) {
    require_points(points);
    SweepTable table({"alpha", "p_cutoff_movavg", "p_cutoff_iid"});
    for (int k = 1; k <= points; ++k) {
        const double alpha = static_cast<double>(k) / (points + 1);
        const double movavg = closed_form_movavg(alpha, 0.5).p_cutoff;
        table.add_row({alpha, movavg, alpha});
    }
    return table;
}

SweepTable sweep_fig7(int points) {
    require_points(points);
    std::vector<std::string> columns{"p"};
    for (double alpha : legend_alphas()) {
        columns.push_back("movavg_alpha" + short_number(alpha));
        columns.push_back("iid_alpha" + short_number(alpha));
    }
    SweepTable table(std::move(columns));
    for (double p : linspace(0.0, 1.0, points)) {
        std::vector<Cell> row{p};
        for (double alpha : legend_alphas()) {
            row.emplace_back(drift_closed_movavg(alpha, p));
            row.emplace_back(drift_closed_iid(alpha, p));
        }
        table.add_row(std::move(row));
    }
    return table;
}

SweepTable sweep_figure(std::string_view id, int points) {
    if (id == "fig2") {
        return sweep_fig2(points);
    }
    if (id == "fig3") {
        return sweep_fig3(points);
    }
    if (id == "fig4") {
        return sweep_fig4(points);
    }
    if (id == "fig5") {
        return sweep_fig5(points);
    }
    if (id == "fig6") {
        return sweep_fig6(points);
    }
    if (id == "fig7") {
        return sweep_fig7(points);
    }
    throw InvalidArgument("unknown figure '" + std::string(id) + "' (expected fig2 ... fig7)");
}

SweepTable sweep_custom(const EnvironmentSpec &spec, double p_min, double p_max, int points) {
    const auto grid = custom_grid(p_min, p_max, points);
    const double p_cut =
        std::abs(mean_sign(spec)) < kRecurrenceTolerance ? 0.5 : cutoff(spec).p_cutoff;
    SweepTable table({"p", "drift", "regime", "p_cutoff"});
    for (double p : grid) {
        const RegimeReport r = classify(spec, p);
        table.add_row({p, r.drift, std::string(regime_code(r.regime)), p_cut});
    }
    return table;
}

SweepTable sweep_custom(const std::function<ClosedFormDrift(double)> &closed_form, double p_min,
                        double p_max, int points) {
    const auto grid = custom_grid(p_min, p_max, points);
    SweepTable table({"p", "drift", "regime", "p_cutoff"});
    for (double p : grid) {
        const ClosedFormDrift r = closed_form(p);
        table.add_row({p, r.drift, std::string(regime_code(r.regime)), r.p_cutoff});
    }
    return table;
}

} // namespace rwre
