#include "imlab/harness/config.hpp"

#include "imlab/errors.hpp"
#include "imlab/grid.hpp"
#include "imlab/nls.hpp"
#include "imlab/thresholds.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>

namespace imlab::harness {
namespace {

using nlohmann::json;

constexpr std::pair<ExperimentKind, std::string_view> kNames[] = {
    {ExperimentKind::table1, "table1"},
    {ExperimentKind::increment_scaling, "increment_scaling"},
    {ExperimentKind::commutator_scaling, "commutator_scaling"},
    {ExperimentKind::morawetz_bound, "morawetz_bound"},
    {ExperimentKind::dispersive_decay, "dispersive_decay"},
    {ExperimentKind::scattering_cauchy, "scattering_cauchy"},
    {ExperimentKind::bernstein_sweep, "bernstein_sweep"},
    {ExperimentKind::conservation_suite, "conservation_suite"},
};

json base_document() {
    return {
        {"experiment", ""},
        {"output_dir", "out"},
        {"problem", {{"n", 3}, {"p", 2.0}, {"s", 0.8}, {"sigma", 0.5}}},
        {"sim",
         {{"M", 64}, {"L_box", 16.0}, {"dt", 0.0}, {"t_end", 1.0}, {"snapshot_stride", 1}, {"allow_any_p", false}}},
        {"sweep", {{"N", json::array()}, {"dt", json::array()}, {"lambda", json::array()}, {"seeds", {0}}}},
        {"params", json::object()},
    };
}

// Every key in `user` must exist in `reference`; nested objects are checked
// recursively except below "params" leaves that hold objects of their own.
void check_keys(const json& user, const json& reference, const std::string& where) {
    if (!user.is_object()) throw ConfigError(where + " must be a JSON object");
    for (const auto& [key, value] : user.items()) {
        if (!reference.contains(key)) {
            std::string known;
            for (const auto& [k, v] : reference.items()) known += (known.empty() ? "" : ", ") + k;
            throw ConfigError("unknown key '" + key + "' in " + where + " (known: " + known + ")");
        }
        if (value.is_object() && reference.at(key).is_object())
            check_keys(value, reference.at(key), where + "." + key);
    }
}

template <class T>
T read(const json& j, const char* key, const std::string& where) {
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(where + "." + key + ": " + e.what());
    }
}

void ensure_positive_list(const std::vector<double>& v, const char* what) {
    for (double x : v)
        if (!(x > 0.0)) throw ConfigError(std::string("sweep.") + what + " entries must be positive");
}

}  // namespace

std::string_view to_string(ExperimentKind kind) noexcept {
    for (const auto& [k, name] : kNames)
        if (k == kind) return name;
    return "unknown";
}

ExperimentKind parse_experiment_kind(std::string_view name) {
    for (const auto& [k, n] : kNames)
        if (n == name) return k;
    std::string known;
    for (const auto& [k, n] : kNames) known += (known.empty() ? "" : ", ") + std::string(n);
    throw ConfigError("unknown experiment '" + std::string(name) + "' (known: " + known + ")");
}

const std::vector<ExperimentKind>& all_experiments() {
    static const std::vector<ExperimentKind> kinds = [] {
        std::vector<ExperimentKind> v;
        for (const auto& [k, n] : kNames) v.push_back(k);
        return v;
    }();
    return kinds;
}

json default_config(ExperimentKind kind) {
    json d = base_document();
    d["experiment"] = std::string(to_string(kind));
    d["output_dir"] = "out/" + std::string(to_string(kind));
    switch (kind) {
        case ExperimentKind::table1:
            break;
        case ExperimentKind::increment_scaling:
            d["problem"] = {{"n", 3}, {"p", 2.0}, {"s", 0.8}, {"sigma", 0.5}};
            d["sim"].update({{"M", 64}, {"L_box", 1.0}, {"t_end", 0.005}, {"snapshot_stride", 1000000}});
            d["sweep"]["N"] = {4.0, 8.0, 16.0, 32.0};
            d["sweep"]["seeds"] = {7};
            d["params"] = {{"hs_norm", 3.0}, {"delta", 0.05}, {"slope_tolerance", 0.2}};
            break;
        case ExperimentKind::commutator_scaling:
            d["problem"] = {{"n", 3}, {"p", 2.0}, {"s", 0.8}, {"sigma", 0.5}};
            d["sweep"]["N"] = {4.0, 8.0, 16.0, 32.0, 64.0};
            d["sweep"]["seeds"] = {11};
            d["params"] = {{"nu", 0.3},
                           {"r", 2.0},
                           {"r1", 4.0},
                           {"r2", 4.0},
                           {"slope_tolerance", 0.15},
                           {"bilinear_n", 1},
                           {"bilinear_M", 4096},
                           {"bilinear_L_box", 1.0},
                           {"gradient_M", 128},
                           {"gradient_L_box", 1.0},
                           {"gradient_N", {2.0, 4.0, 8.0, 16.0}}};
            break;
        case ExperimentKind::morawetz_bound:
            d["problem"] = {{"n", 3}, {"p", 2.0}, {"s", 0.8}, {"sigma", 0.5}};
            d["sim"].update({{"M", 64}, {"L_box", 16.0}, {"t_end", 1.0}, {"snapshot_stride", 10}});
            d["sweep"]["seeds"] = {0, 1, 2, 3, 4};
            d["params"] = {{"T_multiples", {1.0, 2.0, 4.0}},
                           {"amplitude", 1.0},
                           {"width", 1.0},
                           {"amplitude_jitter", 0.2},
                           {"width_jitter", 0.15},
                           {"wavevector_jitter", 0.1},
                           {"ratio_bound", 1.5},
                           {"constant_spread", 4.0}};
            break;
        case ExperimentKind::dispersive_decay:
            d["problem"]["n"] = 3;
            d["sim"].update({{"M", 64}, {"L_box", 16.0}, {"dt", 0.05}, {"t_end", 0.8}});
            d["params"] = {{"width", 0.3}, {"fit_start", 0.3}, {"relative_tolerance", 0.05}};
            break;
        case ExperimentKind::scattering_cauchy:
            d["problem"] = {{"n", 3}, {"p", 2.0}, {"s", 0.9}, {"sigma", 0.5}};
            d["sim"].update({{"M", 64}, {"L_box", 32.0}, {"dt", 1.0 / 64.0}, {"t_end", 8.0}, {"snapshot_stride", 32}});
            d["params"] = {{"amplitude", 0.5}, {"width", 1.0}, {"times", {0.5, 1.0, 2.0, 4.0}}, {"final_fraction", 0.05}};
            break;
        case ExperimentKind::bernstein_sweep:
            d["problem"]["n"] = 2;
            d["sim"].update({{"M", 256}, {"L_box", 2.0}});
            d["sweep"]["N"] = {2.0, 4.0, 8.0, 16.0, 32.0};
            d["sweep"]["seeds"] = {1};
            d["params"] = {{"spikes", 64}, {"factor_bound", 4.0}};
            break;
        case ExperimentKind::conservation_suite:
            d["problem"] = {{"n", 1}, {"p", 2.0}, {"s", 0.8}, {"sigma", 0.5}};
            d["sim"].update({{"M", 1024}, {"L_box", 64.0}, {"dt", 0.004}, {"allow_any_p", true}});
            d["sweep"]["dt"] = json::array();
            d["params"] = {{"steps", 1000},
                           {"amplitude", 1.0},
                           {"width", 2.0},
                           {"wavevector", 0.3},
                           {"refinements", 3},
                           {"mass_tolerance", 1e-10},
                           {"order_min", 1.8},
                           {"order_max", 2.2},
                           {"reversal_tolerance", 1e-6}};
            break;
    }
    return d;
}

ExperimentConfig parse_config(const json& doc) {
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");
    if (!doc.contains("experiment") || !doc.at("experiment").is_string())
        throw ConfigError("config needs a string field 'experiment'");
    const ExperimentKind kind = parse_experiment_kind(doc.at("experiment").get<std::string>());

    json merged = default_config(kind);
    check_keys(doc, merged, "config");
    merged.merge_patch(doc);

    ExperimentConfig c;
    c.experiment = kind;
    c.output_dir = read<std::string>(merged, "output_dir", "config");

    const json& pj = merged.at("problem");
    c.problem = {read<int>(pj, "n", "problem"), read<double>(pj, "p", "problem"), read<double>(pj, "s", "problem"),
                 read<double>(pj, "sigma", "problem")};
    const json& sj = merged.at("sim");
    c.sim = {read<int>(sj, "M", "sim"),           read<double>(sj, "L_box", "sim"),
             read<double>(sj, "dt", "sim"),       read<double>(sj, "t_end", "sim"),
             read<int>(sj, "snapshot_stride", "sim"), read<bool>(sj, "allow_any_p", "sim")};
    const json& wj = merged.at("sweep");
    c.sweep = {read<std::vector<double>>(wj, "N", "sweep"), read<std::vector<double>>(wj, "dt", "sweep"),
               read<std::vector<double>>(wj, "lambda", "sweep"),
               read<std::vector<std::uint64_t>>(wj, "seeds", "sweep")};
    c.params = merged.at("params");
    c.canonical = merged;

    // Fail fast through the owning modules.
    ensure_positive_list(c.sweep.N, "N");
    ensure_positive_list(c.sweep.dt, "dt");
    ensure_positive_list(c.sweep.lambda, "lambda");
    if (c.sim.snapshot_stride < 1) throw ConfigError("sim.snapshot_stride must be >= 1");
    if (c.sim.t_end < 0.0) throw ConfigError("sim.t_end must be >= 0");
    if (c.sim.dt < 0.0) throw ConfigError("sim.dt must be >= 0");
    if (c.sweep.seeds.empty()) throw ConfigError("sweep.seeds must not be empty");

    switch (kind) {
        case ExperimentKind::table1:
            break;
        case ExperimentKind::increment_scaling:
        case ExperimentKind::morawetz_bound:
        case ExperimentKind::scattering_cauchy:
        case ExperimentKind::dispersive_decay:
        case ExperimentKind::conservation_suite: {
            SimConfig sim{Grid(c.problem.n, c.sim.M, c.sim.L_box)};
            sim.p = c.problem.p;
            sim.dt = c.sim.dt;
            sim.t_end = c.sim.t_end;
            sim.snapshot_stride = c.sim.snapshot_stride;
            sim.allow_any_p = c.sim.allow_any_p || kind == ExperimentKind::dispersive_decay;
            sim.validate();
            if (kind == ExperimentKind::increment_scaling)
                ProblemParams(c.problem.n, c.problem.p, c.problem.s, c.problem.sigma);
            if (kind == ExperimentKind::increment_scaling && c.sweep.N.size() < 2)
                throw ConfigError("increment_scaling needs at least two N values");
            if (kind == ExperimentKind::morawetz_bound && c.problem.n != 3)
                throw ConfigError("morawetz_bound needs n = 3");
            break;
        }
        case ExperimentKind::commutator_scaling: {
            const double nu = c.param<double>("nu");
            if (!(nu > 0.0 && nu < c.problem.s)) throw ParameterError("commutator_scaling needs 0 < nu < s");
            Grid(c.param<int>("bilinear_n"), c.param<int>("bilinear_M"), c.param<double>("bilinear_L_box"));
            Grid(c.problem.n, c.param<int>("gradient_M"), c.param<double>("gradient_L_box"));
            if (c.sweep.N.size() < 2) throw ConfigError("commutator_scaling needs at least two N values");
            break;
        }
        case ExperimentKind::bernstein_sweep:
            Grid(c.problem.n, c.sim.M, c.sim.L_box);
            if (c.sweep.N.empty()) throw ConfigError("bernstein_sweep needs sweep.N");
            break;
    }
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    return parse_config(doc);
}

std::string config_hash(const json& doc) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char ch : doc.dump()) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::filesystem::path resolve_output_dir(const ExperimentConfig& config) {
    if (const char* env = std::getenv("IMETHOD_OUT"); env && *env) return env;
    return config.output_dir;
}

}  // namespace imlab::harness
