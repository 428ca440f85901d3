#pragma once

#include "imlab/harness/config.hpp"
#include "imlab/harness/results.hpp"

#include <string>
#include <vector>

namespace imlab::harness {

std::string code_version();

struct RunOptions {
    /// Independent sub-runs executed concurrently (1 = serial).
    int parallel = 1;
    /// Write results.csv / results.json into the resolved output directory.
    bool write_files = true;
};

/// Run one experiment. Rows come back sorted by config hash. A sub-run that
/// aborts yields a row with status `failed`; the others still run.
std::vector<ResultRow> run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

/// Reference s_0 values to three decimals, for (n, p) = (3, 2), (3, 3), (4, 3/2).
struct Table1Entry {
    int n;
    double p;
    double s_c;
    double s_ours;
};
const std::vector<Table1Entry>& table1_reference();

/// s_0 truncated (not rounded) to three decimals, the convention the printed
/// table follows.
double truncate3(double v);

}  // namespace imlab::harness
