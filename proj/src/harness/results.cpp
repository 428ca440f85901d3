#include "imlab/harness/results.hpp"

#include "imlab/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <tuple>

namespace imlab::harness {
namespace {

std::string number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_number(const std::string& s) {
    if (s == "nan") return std::nan("");
    if (s == "inf") return HUGE_VAL;
    if (s == "-inf") return -HUGE_VAL;
    return std::stod(s);
}

// Quote only when needed (RFC 4180).
std::string field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::string flatten(const std::map<std::string, double>& params) {
    std::string out;
    for (const auto& [k, v] : params) out += (out.empty() ? "" : ";") + k + "=" + number(v);
    return out;
}

std::map<std::string, double> unflatten(const std::string& s) {
    std::map<std::string, double> out;
    std::istringstream in(s);
    std::string item;
    while (std::getline(in, item, ';')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) continue;
        out[item.substr(0, eq)] = parse_number(item.substr(eq + 1));
    }
    return out;
}

constexpr const char* kCsvHeader =
    "experiment,config_hash,code_version,metric,value,slope,intercept,residual,status,criterion,"
    "x_axis,x,series,parameters,message";

constexpr const char* kStatusNames[] = {"ok", "pass", "fail", "failed"};

}  // namespace

std::string_view to_string(RowStatus s) noexcept { return kStatusNames[static_cast<int>(s)]; }

RowStatus parse_row_status(std::string_view s) {
    for (int i = 0; i < 4; ++i)
        if (s == kStatusNames[i]) return static_cast<RowStatus>(i);
    throw ConfigError("unknown row status '" + std::string(s) + "'");
}

void sort_rows(std::vector<ResultRow>& rows) {
    std::stable_sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
        return std::tie(a.config_hash, a.metric, a.series, a.x) < std::tie(b.config_hash, b.metric, b.series, b.x);
    });
}

bool any_failed(const std::vector<ResultRow>& rows) {
    return std::any_of(rows.begin(), rows.end(), [](const ResultRow& r) {
        return r.status == RowStatus::fail || r.status == RowStatus::failed;
    });
}

void write_csv(const std::filesystem::path& path, const std::vector<ResultRow>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << kCsvHeader << '\n';
    for (const auto& r : rows) {
        out << field(r.experiment) << ',' << r.config_hash << ',' << field(r.code_version) << ','
            << field(r.metric) << ',' << number(r.value) << ',';
        if (r.fit)
            out << number(r.fit->slope) << ',' << number(r.fit->intercept) << ',' << number(r.fit->residual);
        else
            out << ",,";
        out << ',' << to_string(r.status) << ',' << field(r.criterion) << ',' << field(r.x_axis) << ','
            << (r.x_axis.empty() ? "" : number(r.x)) << ',' << field(r.series) << ','
            << field(flatten(r.parameters)) << ',' << field(r.message) << '\n';
    }
}

std::vector<ResultRow> read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read " + path.string());
    std::string line;
    std::getline(in, line);
    if (line != kCsvHeader) throw ConfigError(path.string() + ": unexpected header");
    std::vector<ResultRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != 15) throw ConfigError(path.string() + ": malformed row");
        ResultRow r;
        r.experiment = f[0];
        r.config_hash = f[1];
        r.code_version = f[2];
        r.metric = f[3];
        r.value = parse_number(f[4]);
        if (!f[5].empty()) r.fit = FitArtifacts{parse_number(f[5]), parse_number(f[6]), parse_number(f[7])};
        r.status = parse_row_status(f[8]);
        r.criterion = f[9];
        r.x_axis = f[10];
        if (!f[11].empty()) r.x = parse_number(f[11]);
        r.series = f[12];
        r.parameters = unflatten(f[13]);
        r.message = f[14];
        rows.push_back(std::move(r));
    }
    return rows;
}

void write_json(const std::filesystem::path& path, const std::vector<ResultRow>& rows) {
    nlohmann::json doc = nlohmann::json::array();
    auto num = [](double v) -> nlohmann::json {
        if (std::isfinite(v)) return v;
        return number(v);
    };
    for (const auto& r : rows) {
        nlohmann::json j{{"experiment", r.experiment},
                         {"config_hash", r.config_hash},
                         {"code_version", r.code_version},
                         {"metric", r.metric},
                         {"value", num(r.value)},
                         {"status", to_string(r.status)},
                         {"criterion", r.criterion},
                         {"message", r.message},
                         {"runtime_s", r.runtime_s}};
        nlohmann::json params = nlohmann::json::object();
        for (const auto& [k, v] : r.parameters) params[k] = num(v);
        j["parameters"] = params;
        if (r.fit) j["fit"] = {{"slope", num(r.fit->slope)}, {"intercept", num(r.fit->intercept)}, {"residual", num(r.fit->residual)}};
        if (!r.x_axis.empty()) j["plot"] = {{"x_axis", r.x_axis}, {"x", num(r.x)}, {"series", r.series}};
        doc.push_back(std::move(j));
    }
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << doc.dump(2) << '\n';
}

std::filesystem::path emit_plotdata(const std::vector<ResultRow>& rows, PlotKind kind,
                                    const std::filesystem::path& dir, const std::string& experiment) {
    std::vector<const ResultRow*> sel;
    std::set<std::string> experiments;
    std::set<std::string> axes;
    for (const auto& r : rows) {
        if (r.x_axis.empty()) continue;
        sel.push_back(&r);
        experiments.insert(r.experiment);
        axes.insert(r.experiment + ":" + r.x_axis);
    }
    if (experiments.size() > 1 || axes.size() > 1) {
        std::string names;
        for (const auto& a : axes) names += (names.empty() ? "" : ", ") + a;
        throw ConfigError("plot rows do not share one axis: " + names);
    }
    const std::string name = sel.empty() ? experiment : *experiments.begin();
    const auto path = dir / (name + (kind == PlotKind::loglog ? "_loglog.csv" : "_series.csv"));
    std::filesystem::create_directories(dir);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << "x,y,series_label\n";
    if (sel.empty()) std::cerr << "warning: no plottable rows; wrote header only to " << path.string() << '\n';
    for (const ResultRow* r : sel) {
        if (kind == PlotKind::loglog && !(r->x > 0.0 && r->value > 0.0)) continue;
        out << number(r->x) << ',' << number(r->value) << ',' << field(r->series.empty() ? r->metric : r->series)
            << '\n';
    }
    return path;
}

std::vector<PlotPoint> read_plotdata(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read " + path.string());
    std::string line;
    std::getline(in, line);
    if (line != "x,y,series_label") throw ConfigError(path.string() + ": unexpected header");
    std::vector<PlotPoint> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != 3) throw ConfigError(path.string() + ": malformed row");
        out.push_back({parse_number(f[0]), parse_number(f[1]), f[2]});
    }
    return out;
}

}  // namespace imlab::harness
