#pragma once

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace imlab::harness {

enum class ExperimentKind {
    table1,
    increment_scaling,
    commutator_scaling,
    morawetz_bound,
    dispersive_decay,
    scattering_cauchy,
    bernstein_sweep,
    conservation_suite,
};

std::string_view to_string(ExperimentKind kind) noexcept;
ExperimentKind parse_experiment_kind(std::string_view name);
const std::vector<ExperimentKind>& all_experiments();

struct ProblemSection {
    int n = 3;
    double p = 2.0;
    double s = 0.8;
    double sigma = 0.5;
};

struct SimSection {
    int M = 64;
    double L_box = 16.0;
    double dt = 0.0;  ///< 0: 0.1 dx^2
    double t_end = 1.0;
    int snapshot_stride = 1;
    bool allow_any_p = false;
};

struct SweepSection {
    std::vector<double> N;
    std::vector<double> dt;
    std::vector<double> lambda;
    std::vector<std::uint64_t> seeds;
};

/// A validated experiment description. `canonical` is the full document after
/// defaults were merged in; it is what gets hashed.
struct ExperimentConfig {
    ExperimentKind experiment = ExperimentKind::table1;
    ProblemSection problem;
    SimSection sim;
    SweepSection sweep;
    nlohmann::json params = nlohmann::json::object();
    std::filesystem::path output_dir = "out";
    nlohmann::json canonical;

    /// Experiment-specific knob with the default already merged in.
    template <class T>
    T param(const std::string& key) const {
        return params.at(key).get<T>();
    }
};

/// Defaults for one experiment, as a JSON document of the accepted shape.
nlohmann::json default_config(ExperimentKind kind);

/// Merge `doc` over the experiment defaults, reject unknown keys and run
/// each owning module's range checks. Throws ConfigError / ParameterError.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::filesystem::path& path);

/// 64-bit FNV-1a of the compact dump (object keys sorted), as 16 hex digits.
std::string config_hash(const nlohmann::json& doc);

/// Output directory after the IMETHOD_OUT override.
std::filesystem::path resolve_output_dir(const ExperimentConfig& config);

}  // namespace imlab::harness
