#include "imlab/errors.hpp"
#include "imlab/harness/config.hpp"
#include "imlab/harness/experiments.hpp"
#include "imlab/harness/report.hpp"
#include "imlab/thresholds.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>

namespace {

using namespace imlab;
using namespace imlab::harness;

int run_command(const std::string& path, int parallel, bool plot) {
    const ExperimentConfig config = load_config(path);
    const auto rows = run_experiment(config, {parallel, true});
    const auto dir = resolve_output_dir(config);
    if (plot) {
        const auto kind = config.experiment == ExperimentKind::dispersive_decay ||
                                  config.experiment == ExperimentKind::scattering_cauchy ||
                                  config.experiment == ExperimentKind::morawetz_bound
                              ? PlotKind::series
                              : PlotKind::loglog;
        std::vector<ResultRow> plotted;
        for (const auto& r : rows)
            if (!r.x_axis.empty()) plotted.push_back(r);
        // Experiments with two axes (the commutator sweeps share N) stay in one file.
        emit_plotdata(plotted, kind, dir, std::string(to_string(config.experiment)));
    }
    for (const auto& r : rows) {
        if (r.status == RowStatus::ok) continue;
        std::cout << to_string(r.status) << "  " << r.metric << " = " << r.value;
        if (!r.criterion.empty()) std::cout << "  (" << r.criterion << ")";
        if (!r.message.empty()) std::cout << "  " << r.message;
        std::cout << '\n';
    }
    std::cout << rows.size() << " rows written to " << (dir / "results.csv").string() << '\n';
    return any_failed(rows) ? 2 : 0;
}

int thresholds_command(std::optional<int> n, std::optional<double> p, std::optional<double> s,
                       std::optional<double> sigma, bool table, bool csv, const ThresholdOptions& opts) {
    std::vector<RegularityReport> reports;
    if (table) {
        reports = table1();
    } else {
        if (!n || !p) throw ConfigError("thresholds needs --n and --p (or --table1)");
        if (s.has_value() != sigma.has_value()) throw ConfigError("--s and --sigma go together");
        reports.push_back(s ? s0(*n, *p, *s, *sigma, opts) : s0(*n, *p));
    }
    if (csv) {
        std::cout << report_csv_header() << '\n';
        for (const auto& r : reports) std::cout << report_csv_line(r) << '\n';
    } else {
        nlohmann::json out = nlohmann::json::array();
        for (const auto& r : reports) out.push_back(report_to_json(r));
        std::cout << (table ? out : out.front()).dump(2) << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"imethod-lab: I-method diagnostics for defocusing NLS"};
    app.require_subcommand(1);
    app.set_version_flag("--version", code_version());

    std::string run_path;
    int parallel = 1;
    bool plot = false;
    auto* run = app.add_subcommand("run", "run an experiment config");
    run->add_option("config", run_path, "experiment JSON")->required();
    run->add_option("--parallel", parallel, "concurrent sub-runs")->check(CLI::PositiveNumber);
    run->add_flag("--plot", plot, "also write <experiment>_<kind>.csv plot data");

    std::optional<int> n;
    std::optional<double> p, s, sigma;
    bool table = false, csv = false, json = false;
    ThresholdOptions topts;
    auto* th = app.add_subcommand("thresholds", "regularity thresholds");
    th->add_option("--n", n, "dimension");
    th->add_option("--p", p, "nonlinearity power");
    th->add_option("--s", s, "regularity");
    th->add_option("--sigma", sigma, "Morawetz interpolation index");
    th->add_option("--eta", topts.eta, "smallness threshold");
    th->add_option("--epsilon-plus", topts.epsilon_plus, "the + in N exponents");
    th->add_option("--data-norm", topts.data_norm, "||u0||_{H^s}");
    th->add_flag("--table1", table, "the three reference rows");
    auto* csv_flag = th->add_flag("--csv", csv, "CSV output");
    th->add_flag("--json", json, "JSON output (default)")->excludes(csv_flag);

    std::string validate_path;
    auto* val = app.add_subcommand("validate", "check a config without running it");
    val->add_option("config", validate_path, "experiment JSON")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (*run) return run_command(run_path, parallel, plot);
        if (*th) return thresholds_command(n, p, s, sigma, table, csv, topts);
        if (*val) {
            const auto config = load_config(validate_path);
            std::cout << "ok " << to_string(config.experiment) << " " << config_hash(config.canonical) << '\n';
            return 0;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
