#pragma once

#include "imlab/thresholds.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace imlab::harness {

nlohmann::json report_to_json(const RegularityReport& report);

/// Fixed column set; optional sections are empty cells when absent.
std::string report_csv_header();
std::string report_csv_line(const RegularityReport& report);

}  // namespace imlab::harness
