#include "imlab/errors.hpp"
#include "imlab/harness/config.hpp"
#include "imlab/harness/experiments.hpp"
#include "imlab/harness/report.hpp"
#include "imlab/harness/results.hpp"
#include "imlab/thresholds.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace imlab;
using namespace imlab::harness;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path scratch_dir(const std::string& name) {
    const fs::path d = fs::temp_directory_path() / ("imlab_harness_" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

std::string error_of(const json& doc) {
    try {
        parse_config(doc);
    } catch (const std::invalid_argument& e) {
        return e.what();
    }
    return {};
}

ResultRow sample_row(const std::string& metric, double x, double y) {
    ResultRow r;
    r.experiment = "increment_scaling";
    r.parameters = {{"N", x}, {"seed", 7}};
    r.metric = metric;
    r.value = y;
    r.status = RowStatus::pass;
    r.criterion = "<= -0.1";
    r.message = "a, \"quoted\" note";
    r.code_version = code_version();
    r.config_hash = "0123456789abcdef";
    r.x_axis = "N";
    r.x = x;
    r.series = "increment";
    return r;
}

}  // namespace

TEST_CASE("experiment names") {
    for (ExperimentKind k : all_experiments()) CHECK(parse_experiment_kind(to_string(k)) == k);
    CHECK(all_experiments().size() == 8);
    CHECK_THROWS_AS(parse_experiment_kind("warp_drive"), ConfigError);
}

TEST_CASE("config parsing merges defaults and rejects bad input") {
    const ExperimentConfig c = parse_config(json{{"experiment", "increment_scaling"}, {"sweep", {{"N", {4, 8}}}}});
    CHECK(c.sweep.N == std::vector<double>{4.0, 8.0});
    CHECK(c.sim.M == 64);
    CHECK(c.param<double>("hs_norm") == 3.0);
    CHECK(c.canonical["sweep"]["N"].size() == 2);

    std::string e = error_of(json{{"experiment", "increment_scaling"}, {"sim", {{"grid_points", 32}}}});
    CHECK(e.find("grid_points") != std::string::npos);
    CHECK(e.find("M") != std::string::npos);  // known keys listed

    CHECK(error_of(json{{"experiment", "nope"}}).find("nope") != std::string::npos);
    CHECK_FALSE(error_of(json::array()).empty());
    CHECK_FALSE(error_of(json{{"experiment", "increment_scaling"}, {"sim", {{"M", "sixty-four"}}}}).empty());
    CHECK(error_of(json{{"experiment", "increment_scaling"}, {"problem", {{"p", 1.0}}}}).find("4/n") != std::string::npos);
    CHECK(error_of(json{{"experiment", "increment_scaling"}, {"sim", {{"M", 48}}}}).find("power of two") != std::string::npos);
    CHECK_FALSE(error_of(json{{"experiment", "commutator_scaling"}, {"params", {{"nu", 0.9}}}}).empty());
    CHECK_FALSE(error_of(json{{"experiment", "morawetz_bound"}, {"problem", {{"n", 2}, {"p", 3.0}}}}).empty());
    CHECK_FALSE(error_of(json{{"experiment", "increment_scaling"}, {"sweep", {{"seeds", json::array()}}}}).empty());
}

TEST_CASE("config hash") {
    const json a = json::parse(R"({"experiment": "table1", "params": {"x": 1, "y": 2}})");
    const json b = json::parse(R"({"params": {"y": 2, "x": 1}, "experiment": "table1"})");
    CHECK(config_hash(a) == config_hash(b));
    CHECK(config_hash(a).size() == 16);
    CHECK(config_hash(a) != config_hash(json::parse(R"({"experiment": "table1", "params": {"x": 1, "y": 3}})")));

    // FNV-1a 64 over the compact dump.
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char ch : a.dump()) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(h));
    CHECK(config_hash(a) == hex);
}

TEST_CASE("IMETHOD_OUT overrides the output directory") {
    ExperimentConfig c = parse_config(json{{"experiment", "table1"}, {"output_dir", "somewhere"}});
    unsetenv("IMETHOD_OUT");
    CHECK(resolve_output_dir(c) == fs::path("somewhere"));
    setenv("IMETHOD_OUT", "/tmp/elsewhere", 1);
    CHECK(resolve_output_dir(c) == fs::path("/tmp/elsewhere"));
    unsetenv("IMETHOD_OUT");
}

TEST_CASE("results CSV round trip") {
    const fs::path dir = scratch_dir("csv");
    std::vector<ResultRow> rows{sample_row("increment", 8, 1.0 / 3.0), sample_row("increment", 4, 2.5e-7)};
    rows[1].fit = FitArtifacts{-2.1, 0.3, 1e-17};
    rows[1].status = RowStatus::failed;
    rows[1].runtime_s = 12.5;
    sort_rows(rows);
    CHECK(rows[0].x == 4.0);
    write_csv(dir / "results.csv", rows);
    CHECK(slurp(dir / "results.csv").rfind(
              "experiment,config_hash,code_version,metric,value,slope,intercept,residual,status,criterion,x_axis,x,"
              "series,parameters,message\n",
              0) == 0);
    const auto back = read_csv(dir / "results.csv");
    REQUIRE(back.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(back[i].experiment == rows[i].experiment);
        CHECK(back[i].metric == rows[i].metric);
        CHECK(back[i].value == rows[i].value);
        CHECK(back[i].status == rows[i].status);
        CHECK(back[i].parameters == rows[i].parameters);
        CHECK(back[i].message == rows[i].message);
        CHECK(back[i].x == rows[i].x);
        CHECK(back[i].fit.has_value() == rows[i].fit.has_value());
    }
    CHECK(back[0].fit->slope == -2.1);
    CHECK(any_failed(back));

    write_json(dir / "results.json", rows);
    const json j = json::parse(slurp(dir / "results.json"));
    CHECK(j.size() == 2);
    CHECK(j[0]["runtime_s"] == 12.5);
    fs::remove_all(dir);
}

TEST_CASE("plot data") {
    const fs::path dir = scratch_dir("plot");
    std::vector<ResultRow> rows{sample_row("increment", 4, 1e-3), sample_row("increment", 8, 2e-4),
                                sample_row("increment", 16, 0.0)};
    ResultRow fit = sample_row("increment_slope", 0, -2.0);
    fit.x_axis.clear();
    rows.push_back(fit);

    const fs::path p = emit_plotdata(rows, PlotKind::loglog, dir);
    CHECK(p.filename() == "increment_scaling_loglog.csv");
    const auto pts = read_plotdata(p);
    REQUIRE(pts.size() == 2);  // the zero value is not plottable on log axes
    CHECK(pts[0].x == 4.0);
    CHECK(pts[0].y == 1e-3);
    CHECK(pts[1].y == 2e-4);
    CHECK(pts[0].series_label == "increment");

    const auto all = read_plotdata(emit_plotdata(rows, PlotKind::series, dir));
    CHECK(all.size() == 3);

    ResultRow other = sample_row("sup_norm", 0.5, 1.0);
    other.experiment = "dispersive_decay";
    other.x_axis = "t";
    rows.push_back(other);
    try {
        emit_plotdata(rows, PlotKind::loglog, dir);
        FAIL("mixed experiments accepted");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("dispersive_decay:t") != std::string::npos);
        CHECK(std::string(e.what()).find("increment_scaling:N") != std::string::npos);
    }

    const fs::path empty = emit_plotdata({}, PlotKind::series, dir, "nothing");
    CHECK(slurp(empty) == "x,y,series_label\n");
    fs::remove_all(dir);
}

TEST_CASE("threshold report rendering") {
    const RegularityReport r = s0(3, 2.0, 0.95, 0.5);
    const json j = report_to_json(r);
    CHECK(j["s_0"].get<double>() == r.s_0);
    CHECK(j["s_0_3dp"].get<double>() == 0.895);
    const auto count = [](const std::string& s) { return std::count(s.begin(), s.end(), ','); };
    CHECK(count(report_csv_header()) == count(report_csv_line(r)));
    CHECK(count(report_csv_header()) == count(report_csv_line(s0(4, 1.5))));
    CHECK(truncate3(0.8956439) == 0.895);
    CHECK(truncate3(0.99016) == 0.99);
    CHECK(truncate3(0.958) == 0.958);
}

TEST_CASE("table1 experiment") {
    const auto rows = run_experiment(parse_config(json{{"experiment", "table1"}}), {1, false});
    CHECK_FALSE(any_failed(rows));
    int s0_rows = 0;
    for (const auto& r : rows) {
        CHECK(r.code_version == code_version());
        CHECK(r.config_hash.size() == 16);
        if (r.metric == "s_0_3dp") {
            ++s0_rows;
            CHECK(r.status == RowStatus::pass);
        }
    }
    CHECK(s0_rows == 3);
}

TEST_CASE("conservation suite on zero data drifts by exactly zero") {
    const ExperimentConfig c = parse_config(
        json{{"experiment", "conservation_suite"}, {"params", {{"amplitude", 0.0}, {"steps", 50}}}});
    const auto rows = run_experiment(c, {1, false});
    CHECK_FALSE(any_failed(rows));
    int seen = 0;
    for (const auto& r : rows) {
        if (r.metric == "mass_drift" || r.metric == "energy_drift" || r.metric == "reversal_residual") {
            CHECK(r.value == 0.0);
            ++seen;
        }
    }
    CHECK(seen == 7);
}

TEST_CASE("results.csv is bit-identical across runs and schedules") {
    const json doc{{"experiment", "conservation_suite"}, {"params", {{"steps", 100}}}};
    std::vector<std::string> files;
    for (int parallel : {1, 1, 3}) {
        ExperimentConfig c = parse_config(doc);
        c.output_dir = scratch_dir("det" + std::to_string(files.size()));
        run_experiment(c, {parallel, true});
        files.push_back(slurp(c.output_dir / "results.csv"));
        CHECK(fs::exists(c.output_dir / "results.json"));
        fs::remove_all(c.output_dir);
    }
    CHECK(files[0] == files[1]);
    CHECK(files[0] == files[2]);
    CHECK(files[0].size() > 100);
}

TEST_CASE("increment scaling golden slope") {
    std::ifstream in(std::string(IMLAB_TEST_DATA) + "/golden.json");
    const json g = json::parse(in)["increment_scaling"];
    const ExperimentConfig c = load_config(fs::path(IMLAB_TEST_DATA) / ".." / g["config"].get<std::string>());
    CHECK(config_hash(c.canonical) == g["config_hash"].get<std::string>());
    const auto rows = run_experiment(c, {1, false});
    bool found = false;
    for (const auto& r : rows) {
        if (r.metric != "increment_slope") continue;
        found = true;
        CHECK(std::abs(r.value - g["slope"].get<double>()) <= g["tolerance"].get<double>());
    }
    CHECK(found);
}
