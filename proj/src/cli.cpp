#include "rwre/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <optional>
#include <utility>

#include <CLI11.hpp>
#include <json.hpp>

#include "rwre/drift.hpp"
#include "rwre/environment.hpp"
#include "rwre/environment_io.hpp"
#include "rwre/error.hpp"
#include "rwre/montecarlo.hpp"
#include "rwre/sweep.hpp"

namespace rwre {

namespace {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using ClosedForm = std::function<ClosedFormDrift(double)>;

struct EnvironmentFlags {
    std::optional<std::string> iid;
    std::optional<std::string> markov;
    std::optional<std::string> markov_corr;
    std::optional<std::string> twodep;
    std::optional<std::string> twodep_moments;
    std::optional<std::string> movavg;
    std::optional<std::string> kdep;
    std::optional<std::string> spec;

    std::vector<std::pair<std::string, const std::optional<std::string> *>> given() const {
        const std::vector<std::pair<std::string, const std::optional<std::string> *>> all{
            {"--iid", &iid},         {"--markov", &markov},
            {"--markov-corr", &markov_corr}, {"--twodep", &twodep},
            {"--twodep-moments", &twodep_moments}, {"--movavg", &movavg},
            {"--kdep", &kdep},       {"--spec", &spec}};
        std::vector<std::pair<std::string, const std::optional<std::string> *>> out;
        for (const auto &entry : all) {
            if (entry.second->has_value()) {
                out.push_back(entry);
            }
        }
        return out;
    }
};

// The environment is built lazily: boundary parameter sets have a closed form but no
// valid transition matrix.
struct EnvironmentChoice {
    std::string flag;
    std::function<EnvironmentSpec()> build;
    std::optional<ClosedForm> closed_form;
};

struct Options {
    EnvironmentFlags env;
    double p = std::nan("");
    std::string method = "generic";
    std::string format = "text";
    long steps = 100000;
    long reps = 200;
    std::uint64_t seed = 1;
    long burn_in = 0;
    std::string strategy = "reversal";
    unsigned threads = 0;
    std::string figure;
    int points = 200;
    std::string out_path;
    double p_min = 0.005;
    double p_max = 0.995;
};

std::vector<double> parse_numbers(const std::string &flag, const std::string &text, std::size_t count) {
    std::vector<double> values;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = text.find(',', start);
        const std::string item = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        char *end = nullptr;
        const double value = std::strtod(item.c_str(), &end);
        if (item.empty() || end != item.c_str() + item.size() || !std::isfinite(value)) {
            throw UsageError(flag + ": '" + item + "' is not a number");
        }
        values.push_back(value);
        if (comma == std::string::npos) {
            break;
        }
        start = comma + 1;
    }
    if (values.size() != count) {
        throw UsageError(flag + " expects " + std::to_string(count) + " comma-separated numbers, got '" +
                         text + "'");
    }
    return values;
}

EnvironmentChoice resolve_environment(const EnvironmentFlags &flags) {
    const auto given = flags.given();
    if (given.empty()) {
        throw UsageError("an environment is required: one of --iid, --markov, --markov-corr, --twodep, "
                         "--twodep-moments, --movavg, --kdep, --spec");
    }
    if (given.size() > 1) {
        throw UsageError(given[0].first + " and " + given[1].first + " cannot be combined");
    }
    const std::string &flag = given[0].first;
    const std::string &text = **given[0].second;

    if (flag == "--iid") {
        const double alpha = parse_numbers(flag, text, 1)[0];
        return {flag, [alpha] { return build_iid(alpha); },
                ClosedForm([alpha](double p) { return closed_form_iid(alpha, p); })};
    }
    if (flag == "--markov") {
        const auto v = parse_numbers(flag, text, 2);
        const MarkovParams params{v[0], v[1]};
        return {flag, [params] { return build_markov(params); },
                ClosedForm([params](double p) { return closed_form_markov(params, p); })};
    }
    if (flag == "--markov-corr") {
        const auto v = parse_numbers(flag, text, 2);
        const double alpha = v[0];
        const double rho = v[1];
        const MarkovParams params = markov_from_correlation(alpha, rho);
        return {flag, [params] { return build_markov(params); },
                ClosedForm([alpha, rho](double p) { return closed_form_markov_corr(alpha, rho, p); })};
    }
    if (flag == "--twodep" || flag == "--twodep-moments") {
        const auto v = parse_numbers(flag, text, 4);
        const TwoDepParams params = flag == "--twodep"
                                        ? TwoDepParams{v[0], v[1], v[2], v[3]}
                                        : two_dep_from_moments({v[0], v[1], v[2], v[3]});
        return {flag, [params] { return build_two_dep(params); },
                ClosedForm([params](double p) { return closed_form_two_dep(params, p); })};
    }
    if (flag == "--movavg") {
        const double alpha = parse_numbers(flag, text, 1)[0];
        return {flag, [alpha] { return build_moving_average(alpha); },
                ClosedForm([alpha](double p) { return closed_form_movavg(alpha, p); })};
    }
    const EnvironmentSpec spec =
        flag == "--kdep" ? k_dep_from_json(read_text_file(text)) : environment_from_json(read_text_file(text));
    return {flag, [spec] { return spec; }, std::nullopt};
}

const ClosedForm &require_closed_form(const EnvironmentChoice &choice) {
    if (!choice.closed_form) {
        throw InvalidArgument("no closed form for " + choice.flag + " environments; use --method generic");
    }
    return *choice.closed_form;
}

void require_p(double p) {
    if (std::isnan(p)) {
        throw UsageError("--p is required");
    }
    if (!(p >= 0.0 && p <= 1.0)) {
        throw UsageError("--p must lie in [0, 1]");
    }
}

SimConfig sim_config(const Options &o) {
    SimConfig config;
    config.steps = o.steps;
    config.replications = o.reps;
    config.seed = o.seed;
    config.burn_in = o.burn_in;
    config.strategy = o.strategy == "reflect" ? SamplingStrategy::Reflection : SamplingStrategy::Reversal;
    config.threads = o.threads;
    return config;
}

using Record = std::vector<std::pair<std::string, Cell>>;

nlohmann::ordered_json cell_json(const Cell &cell) {
    if (const auto *x = std::get_if<double>(&cell)) {
        if (std::isfinite(*x)) {
            return *x;
        }
        return *x > 0 ? "inf" : (*x < 0 ? "-inf" : "nan");
    }
    return std::get<std::string>(cell);
}

std::string cell_text(const Cell &cell) {
    if (const auto *x = std::get_if<double>(&cell)) {
        return format_number(*x);
    }
    return std::get<std::string>(cell);
}

void render(const Record &record, const std::string &format, std::ostream &out) {
    if (format == "json") {
        nlohmann::ordered_json doc = nlohmann::ordered_json::object();
        for (const auto &[key, value] : record) {
            doc[key] = cell_json(value);
        }
        out << doc.dump(2) << '\n';
        return;
    }
    if (format == "csv") {
        std::vector<std::string> columns;
        std::vector<Cell> row;
        for (const auto &[key, value] : record) {
            columns.push_back(key);
            row.push_back(value);
        }
        SweepTable table(std::move(columns));
        table.add_row(std::move(row));
        out << table.to_csv();
        return;
    }
    std::size_t width = 0;
    for (const auto &entry : record) {
        width = std::max(width, entry.first.size());
    }
    for (const auto &[key, value] : record) {
        out << key << ':' << std::string(width + 1 - key.size(), ' ') << cell_text(value) << '\n';
    }
}

int cmd_classify(const Options &o, std::ostream &out) {
    require_p(o.p);
    const EnvironmentChoice choice = resolve_environment(o.env);
    const RegimeReport r = classify(choice.build(), o.p);
    render({{"regime", std::string(regime_code(r.regime))},
            {"drift", r.drift},
            {"e_u0", r.e_u0},
            {"e_log_sigma0", r.e_log_sigma0},
            {"sp_forward", r.sp_forward},
            {"sp_backward", r.sp_backward}},
           o.format, out);
    return kExitOk;
}

int cmd_drift(const Options &o, std::ostream &out) {
    require_p(o.p);
    const EnvironmentChoice choice = resolve_environment(o.env);
    if (o.method == "closed") {
        const ClosedFormDrift r = require_closed_form(choice)(o.p);
        render({{"drift", r.drift},
                {"method", std::string(method_name(DriftMethod::ClosedForm))},
                {"regime", std::string(regime_code(r.regime))},
                {"p_cutoff", r.p_cutoff}},
               o.format, out);
    } else if (o.method == "mc") {
        const DriftEstimate e = estimate_drift(choice.build(), o.p, sim_config(o));
        render({{"drift", e.mean},
                {"method", std::string(method_name(DriftMethod::MonteCarlo))},
                {"standard_error", e.standard_error},
                {"replications", static_cast<double>(e.replications)},
                {"steps", static_cast<double>(e.steps)},
                {"positive_fraction", e.positive_fraction}},
               o.format, out);
    } else {
        const DriftResult r = drift_generic(choice.build(), o.p);
        Record record{{"drift", r.value},
                      {"method", std::string(method_name(r.method))},
                      {"series", std::string(1, r.series)},
                      {"series_value", r.series_value},
                      {"spectral_radius", r.spectral_radius},
                      {"boundary", std::string(r.boundary ? "true" : "false")}};
        if (!r.diagnostic.empty()) {
            record.emplace_back("diagnostic", r.diagnostic);
        }
        render(record, o.format, out);
    }
    return kExitOk;
}

int cmd_cutoff(const Options &o, std::ostream &out) {
    const EnvironmentChoice choice = resolve_environment(o.env);
    std::optional<EnvironmentSpec> spec;
    try {
        spec = choice.build();
    } catch (const InvalidArgument &) {
        // Boundary parameters: only the closed form is defined.
        if (!choice.closed_form) {
            throw;
        }
    }
    if (!spec) {
        const ClosedFormDrift r = (*choice.closed_form)(0.5);
        render({{"p_cutoff", r.p_cutoff}, {"method", std::string(method_name(DriftMethod::ClosedForm))}},
               o.format, out);
        return kExitOk;
    }
    const CutoffResult c = cutoff(*spec);
    Record record{{"sigma_cutoff", c.sigma_cutoff},
                  {"p_cutoff", c.p_cutoff},
                  {"bracket_lo", c.bracket_lo},
                  {"bracket_hi", c.bracket_hi},
                  {"iterations", static_cast<double>(c.iterations)}};
    if (choice.closed_form) {
        record.emplace_back("p_cutoff_closed", (*choice.closed_form)(0.5).p_cutoff);
    }
    render(record, o.format, out);
    return kExitOk;
}

int cmd_sweep(const Options &o, std::ostream &out) {
    SweepTable table({});
    if (o.figure == "custom") {
        const EnvironmentChoice choice = resolve_environment(o.env);
        if (o.method == "mc") {
            throw UsageError("--method mc is not available for sweeps");
        }
        if (o.method == "closed") {
            table = sweep_custom(require_closed_form(choice), o.p_min, o.p_max, o.points);
        } else {
            table = sweep_custom(choice.build(), o.p_min, o.p_max, o.points);
        }
    } else {
        if (const auto given = o.env.given(); !given.empty()) {
            throw UsageError(given[0].first + " is only valid with 'sweep custom'");
        }
        table = sweep_figure(o.figure, o.points);
    }
    const std::string text = o.format == "json" ? table.to_json() : table.to_csv();
    if (o.out_path.empty()) {
        out << text;
    } else {
        std::ofstream file(o.out_path, std::ios::binary);
        if (!file || !(file << text) || !file.flush()) {
            throw InvalidArgument("cannot write '" + o.out_path + "'");
        }
    }
    return kExitOk;
}

int cmd_simulate(const Options &o, std::ostream &out) {
    require_p(o.p);
    const EnvironmentChoice choice = resolve_environment(o.env);
    const DriftEstimate e = estimate_drift(choice.build(), o.p, sim_config(o));
    render({{"mean", e.mean},
            {"standard_error", e.standard_error},
            {"replications", static_cast<double>(e.replications)},
            {"steps", static_cast<double>(e.steps)},
            {"positive_fraction", e.positive_fraction},
            {"seed", std::to_string(o.seed)}},
           o.format, out);
    return kExitOk;
}

int cmd_compare(const Options &o, std::ostream &out) {
    require_p(o.p);
    const EnvironmentChoice choice = resolve_environment(o.env);
    const EnvironmentSpec spec = choice.build();
    const DriftResult generic = drift_generic(spec, o.p);
    const DriftEstimate mc = estimate_drift(spec, o.p, sim_config(o));

    Record record{{"generic", generic.value}};
    double analytic = generic.value;
    if (choice.closed_form) {
        analytic = (*choice.closed_form)(o.p).drift;
        record.emplace_back("closed", analytic);
    }
    const double band = 3.0 * mc.standard_error;
    const bool pass = std::abs(analytic - mc.mean) <= band;
    record.emplace_back("mc_mean", mc.mean);
    record.emplace_back("mc_standard_error", mc.standard_error);
    record.emplace_back("mc_lo", mc.mean - band);
    record.emplace_back("mc_hi", mc.mean + band);
    record.emplace_back("verdict", std::string(pass ? "PASS" : "FAIL"));
    render(record, o.format, out);
    return pass ? kExitOk : kExitCompareFailed;
}

void add_environment_options(CLI::App *cmd, EnvironmentFlags &env) {
    cmd->add_option("--iid", env.iid, "iid environment with P(U=1)=alpha")->type_name("ALPHA");
    cmd->add_option("--markov", env.markov, "two-state Markov chain")->type_name("A,B");
    cmd->add_option("--markov-corr", env.markov_corr, "Markov chain from marginal and correlation")
        ->type_name("ALPHA,RHO");
    cmd->add_option("--twodep", env.twodep, "2-dependent chain")->type_name("A-,A+,B-,B+");
    cmd->add_option("--twodep-moments", env.twodep_moments, "2-dependent chain from moments")
        ->type_name("ALPHA,RHO01,RHO02,E012");
    cmd->add_option("--movavg", env.movavg, "moving-average environment")->type_name("ALPHA");
    cmd->add_option("--kdep", env.kdep, "k-dependent chain from a JSON table")->type_name("FILE");
    cmd->add_option("--spec", env.spec, "custom environment JSON")->type_name("FILE");
}

void add_sim_options(CLI::App *cmd, Options &o) {
    cmd->add_option("--steps", o.steps, "walk length n")->check(CLI::PositiveNumber)->capture_default_str();
    cmd->add_option("--reps", o.reps, "independent replications")->check(CLI::PositiveNumber)->capture_default_str();
    cmd->add_option("--seed", o.seed, "master seed")->capture_default_str();
    cmd->add_option("--burn-in", o.burn_in, "environment warm-up steps")->check(CLI::NonNegativeNumber);
    cmd->add_option("--strategy", o.strategy, "negative half-line sampling")
        ->check(CLI::IsMember({"reversal", "reflect"}))
        ->capture_default_str();
    cmd->add_option("--threads", o.threads, "worker threads (0 = all cores)");
}

void add_format_option(CLI::App *cmd, Options &o) {
    cmd->add_option("--format", o.format, "output format")
        ->check(CLI::IsMember({"text", "json", "csv"}))
        ->capture_default_str();
}

} // namespace

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    Options o;
    CLI::App app{"Drift and regimes of random walks in dependent two-valued environments", "rwre"};
    app.require_subcommand(1);

    auto *classify_cmd = app.add_subcommand("classify", "regime, drift and spectral radii at p");
    add_environment_options(classify_cmd, o.env);
    classify_cmd->add_option("--p", o.p, "walk parameter");
    add_format_option(classify_cmd, o);

    auto *drift_cmd = app.add_subcommand("drift", "drift at p");
    add_environment_options(drift_cmd, o.env);
    drift_cmd->add_option("--p", o.p, "walk parameter");
    drift_cmd->add_option("--method", o.method, "evaluation method")
        ->check(CLI::IsMember({"generic", "closed", "mc"}))
        ->capture_default_str();
    add_sim_options(drift_cmd, o);
    add_format_option(drift_cmd, o);

    auto *cutoff_cmd = app.add_subcommand("cutoff", "end of the positive-drift interval");
    add_environment_options(cutoff_cmd, o.env);
    add_format_option(cutoff_cmd, o);

    auto *sweep_cmd = app.add_subcommand("sweep", "figure data or a custom p grid as a table");
    sweep_cmd->add_option("figure", o.figure, "fig2 ... fig7 or custom")
        ->required()
        ->check(CLI::IsMember({"fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "custom"}));
    add_environment_options(sweep_cmd, o.env);
    sweep_cmd->add_option("--points", o.points, "grid resolution")->capture_default_str();
    sweep_cmd->add_option("--out", o.out_path, "write to FILE instead of stdout");
    sweep_cmd->add_option("--method", o.method, "custom sweeps: generic or closed")
        ->check(CLI::IsMember({"generic", "closed"}))
        ->capture_default_str();
    sweep_cmd->add_option("--p-min", o.p_min, "custom sweeps: first p")->capture_default_str();
    sweep_cmd->add_option("--p-max", o.p_max, "custom sweeps: last p")->capture_default_str();
    std::string sweep_format = "csv";
    sweep_cmd->add_option("--format", sweep_format, "output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();

    auto *simulate_cmd = app.add_subcommand("simulate", "Monte Carlo drift estimate");
    add_environment_options(simulate_cmd, o.env);
    simulate_cmd->add_option("--p", o.p, "walk parameter");
    add_sim_options(simulate_cmd, o);
    add_format_option(simulate_cmd, o);

    auto *compare_cmd = app.add_subcommand("compare", "analytic drift against Monte Carlo; exit 1 on disagreement");
    add_environment_options(compare_cmd, o.env);
    compare_cmd->add_option("--p", o.p, "walk parameter");
    add_sim_options(compare_cmd, o);
    add_format_option(compare_cmd, o);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (classify_cmd->parsed()) {
            return cmd_classify(o, out);
        }
        if (drift_cmd->parsed()) {
            return cmd_drift(o, out);
        }
        if (cutoff_cmd->parsed()) {
            return cmd_cutoff(o, out);
        }
        if (sweep_cmd->parsed()) {
            o.format = sweep_format;
            return cmd_sweep(o, out);
        }
        if (simulate_cmd->parsed()) {
            return cmd_simulate(o, out);
        }
        return cmd_compare(o, out);
    } catch (const UsageError &e) {
        err << "usage error: " << e.what() << '\n';
    } catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
    }
    return kExitUsage;
}

} // namespace rwre
