#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace imlab::harness {

enum class RowStatus {
    ok,      ///< informational value, no criterion attached
    pass,    ///< criterion met
    fail,    ///< criterion missed
    failed,  ///< the sub-run aborted
};

std::string_view to_string(RowStatus s) noexcept;
RowStatus parse_row_status(std::string_view s);

struct FitArtifacts {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;
};

struct ResultRow {
    std::string experiment;
    std::map<std::string, double> parameters;
    std::string metric;
    double value = 0.0;
    std::optional<FitArtifacts> fit;
    RowStatus status = RowStatus::ok;
    std::string criterion;  ///< human-readable check, e.g. "<= -0.1"
    std::string message;
    double runtime_s = 0.0;
    std::string code_version;
    std::string config_hash;

    /// Plot axis. Rows without one are skipped by emit_plotdata.
    std::string x_axis;
    double x = 0.0;
    std::string series;
};

/// Sort by (config_hash, metric, series, x) so the order is independent of
/// how sub-runs were scheduled.
void sort_rows(std::vector<ResultRow>& rows);

bool any_failed(const std::vector<ResultRow>& rows);

/// One header line then one line per row; runtime_s is left out so that two
/// runs of one config produce identical files.
void write_csv(const std::filesystem::path& path, const std::vector<ResultRow>& rows);
/// Everything, runtime included.
void write_json(const std::filesystem::path& path, const std::vector<ResultRow>& rows);
std::vector<ResultRow> read_csv(const std::filesystem::path& path);

enum class PlotKind { loglog, series };

/// Writes `<dir>/<experiment>_<kind>.csv` with header x,y,series_label from
/// the rows that carry an x axis. The selection must come from one
/// experiment and one x axis. An empty selection writes just the header and
/// a warning on stderr; `experiment` names the file in that case.
std::filesystem::path emit_plotdata(const std::vector<ResultRow>& rows, PlotKind kind,
                                    const std::filesystem::path& dir,
                                    const std::string& experiment = "empty");

struct PlotPoint {
    double x;
    double y;
    std::string series_label;
};
std::vector<PlotPoint> read_plotdata(const std::filesystem::path& path);

}  // namespace imlab::harness
