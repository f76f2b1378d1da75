#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "rwre/drift.hpp"
#include "rwre/environment.hpp"

namespace rwre {

using Cell = std::variant<double, std::string>;

/// Rectangular table of named columns. Numbers are written with 17
/// significant digits so CSV output round-trips doubles exactly.
class SweepTable {
public:
    explicit SweepTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

    void add_row(std::vector<Cell> row);

    const std::vector<std::string> &columns() const { return columns_; }
    const std::vector<std::vector<Cell>> &rows() const { return rows_; }
    std::size_t column_index(std::string_view name) const;

    std::string to_csv() const;
    std::string to_json() const;

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<Cell>> rows_;
};

std::string format_number(double x);
std::vector<double> linspace(double lo, double hi, int points);

/// fig2: long table alpha, p, drift, regime, p_cutoff over [0,1]^2 (iid).
SweepTable sweep_fig2(int points);
/// fig3: drift against p for each (rho, alpha) curve of the Markov comparison.
SweepTable sweep_fig3(int points);
/// fig4: long table p, alpha, rho, drift, regime, p_cutoff for p in {0.7, 0.9}.
SweepTable sweep_fig4(int points);
/// fig5: 2-dependent curves at alpha = 0.95, rho01 = 0.3.
SweepTable sweep_fig5(int points);
/// fig6: alpha, p_cutoff_movavg, p_cutoff_iid.
SweepTable sweep_fig6(int points);
/// fig7: moving-average and iid drift against p for alpha = 1, 0.95, ..., 0.55.
SweepTable sweep_fig7(int points);

SweepTable sweep_figure(std::string_view id, int points);

/// Drift over a p grid for one environment: p, drift, regime, p_cutoff.
SweepTable sweep_custom(const EnvironmentSpec &spec, double p_min, double p_max, int points);
/// Same table from a closed-form family.
SweepTable sweep_custom(const std::function<ClosedFormDrift(double)> &closed_form, double p_min,
                        double p_max, int points);

} // namespace rwre
