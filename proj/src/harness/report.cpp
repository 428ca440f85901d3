#include "imlab/harness/report.hpp"

#include "imlab/harness/experiments.hpp"

#include <cmath>
#include <cstdio>

namespace imlab::harness {
namespace {

nlohmann::json num(double v) {
    if (std::isfinite(v)) return v;
    return nullptr;
}

std::string cell(double v) {
    if (!std::isfinite(v)) return "";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string quoted(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

}  // namespace

nlohmann::json report_to_json(const RegularityReport& r) {
    nlohmann::json j{{"n", r.n},
                     {"p", r.p},
                     {"s_c", num(r.s_c)},
                     {"s_1", num(r.s_1)},
                     {"s_2", num(r.s_2)},
                     {"s_3", num(r.s_3)},
                     {"s_0", num(r.s_0)},
                     {"s_0_3dp", num(truncate3(r.s_0))},
                     {"sigma0", num(r.sigma0)},
                     {"quadratic", {{"a", num(r.quad_a)}, {"b", num(r.quad_b)}, {"c", num(r.quad_c)}}},
                     {"feasible", r.feasible},
                     {"sigma0_feasible", r.sigma0_feasible},
                     {"s1_dominates_s2", r.s1_dominates_s2},
                     {"dominant", r.dominant},
                     {"note", r.note}};
    if (r.s) j["s"] = *r.s;
    if (r.sigma) j["sigma"] = *r.sigma;
    if (r.interpolation) {
        const auto& ie = *r.interpolation;
        j["interpolation"] = {{"epsilon", num(ie.epsilon)}, {"theta", num(ie.theta)}, {"degenerate", ie.degenerate},
                              {"valid", ie.valid}, {"note", ie.note}};
    }
    if (r.holder) {
        const auto& h = *r.holder;
        j["holder"] = {{"alpha", num(h.alpha)},
                       {"beta", num(h.beta)},
                       {"alpha_limit", num(h.alpha_limit)},
                       {"beta_limit", num(h.beta_limit)},
                       {"epsilon", num(h.suggested_epsilon)},
                       {"feasible", h.feasible},
                       {"note", h.note}};
    }
    if (r.selection) {
        const auto& s = *r.selection;
        j["selection"] = {{"feasible", s.feasible}, {"gamma", num(s.gamma)},
                          {"N", num(s.N)},          {"lambda", num(s.lambda)},
                          {"L", num(s.L)},          {"energy_condition", num(s.energy_condition)},
                          {"increment_condition", num(s.increment_condition)}, {"note", s.note}};
    }
    return j;
}

std::string report_csv_header() {
    return "n,p,s_c,s_1,s_2,s_3,s_0,s_0_3dp,sigma0,quad_a,quad_b,quad_c,feasible,sigma0_feasible,"
           "s1_dominates_s2,dominant,s,sigma,epsilon,theta,alpha,beta,lambda,N,L,note";
}

std::string report_csv_line(const RegularityReport& r) {
    std::string line = std::to_string(r.n) + ',' + cell(r.p);
    for (double v : {r.s_c, r.s_1, r.s_2, r.s_3, r.s_0, truncate3(r.s_0), r.sigma0, r.quad_a, r.quad_b, r.quad_c})
        line += ',' + cell(v);
    line += std::string(",") + (r.feasible ? "1" : "0") + ',' + (r.sigma0_feasible ? "1" : "0") + ',' +
            (r.s1_dominates_s2 ? "1" : "0") + ',' + r.dominant;
    line += ',' + (r.s ? cell(*r.s) : "") + ',' + (r.sigma ? cell(*r.sigma) : "");
    line += ',' + (r.interpolation ? cell(r.interpolation->epsilon) : "") + ',' +
            (r.interpolation ? cell(r.interpolation->theta) : "");
    line += ',' + (r.holder ? cell(r.holder->alpha) : "") + ',' + (r.holder ? cell(r.holder->beta) : "");
    line += ',' + (r.selection ? cell(r.selection->lambda) : "") + ',' + (r.selection ? cell(r.selection->N) : "") +
            ',' + (r.selection ? cell(r.selection->L) : "");
    line += ',' + quoted(r.note);
    return line;
}

}  // namespace imlab::harness
