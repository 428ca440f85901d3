// One PASS/FAIL line per acceptance criterion. Exit status 1 if any fails.

#include "imlab/errors.hpp"
#include "imlab/fft.hpp"
#include "imlab/functionals.hpp"
#include "imlab/harness/config.hpp"
#include "imlab/harness/experiments.hpp"
#include "imlab/harness/results.hpp"
#include "imlab/morawetz.hpp"
#include "imlab/multiplier.hpp"
#include "imlab/nls.hpp"
#include "imlab/spectral_ops.hpp"
#include "imlab/thresholds.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

using namespace imlab;
using namespace imlab::harness;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << "[missed] ";
        }
        detail << what << "; ";
    }
};

std::string num(double v) {
    std::ostringstream s;
    s.precision(6);
    s << v;
    return s.str();
}

json golden() {
    std::ifstream in(std::string(IMLAB_TEST_DATA) + "/golden.json");
    return json::parse(in);
}

SpectralField random_field(const Grid& g, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> d;
    SpectralField f(g, Space::physical);
    for (auto& v : f.values()) v = cplx(d(rng), d(rng));
    return f;
}

double max_abs(const SpectralField& f) {
    double m = 0.0;
    for (const auto& v : f.values()) m = std::max(m, std::abs(v));
    return m;
}

std::vector<ResultRow> run_default(ExperimentKind kind) {
    ExperimentConfig c = parse_config(default_config(kind));
    return run_experiment(c, {1, false});
}

// Every row carrying a criterion must pass; each metric listed must appear.
void require_rows(Outcome& o, const std::vector<ResultRow>& rows, const std::vector<std::string>& metrics) {
    for (const auto& m : metrics) {
        int seen = 0;
        for (const auto& r : rows) {
            if (r.metric != m) continue;
            ++seen;
            if (r.status == RowStatus::ok) continue;
            std::string line = m + "=" + num(r.value) + " (" + r.criterion + ")";
            if (r.status == RowStatus::failed) line += " aborted: " + r.message;
            if (seen == 1 || r.status != RowStatus::pass) o.require(r.status == RowStatus::pass, line);
        }
        if (seen == 0) o.require(false, m + " missing");
    }
    for (const auto& r : rows)
        if (r.status == RowStatus::fail || r.status == RowStatus::failed)
            o.require(false, r.metric + " row " + std::string(to_string(r.status)));
}

std::string run_command(const std::string& cmd) {
    std::string out;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return out;
    char buf[4096];
    while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
    pclose(pipe);
    return out;
}

Outcome table1_reproduction() {
    Outcome o;
    const std::string text = run_command(std::string("\"") + IMETHOD_LAB_EXE + "\" thresholds --table1 --json");
    const json rows = json::parse(text);
    const auto& ref = table1_reference();
    o.require(rows.size() == 3, "three rows");
    for (std::size_t i = 0; i < std::min<std::size_t>(rows.size(), 3); ++i) {
        const double s0 = rows[i]["s_0"].get<double>();
        const double sc = rows[i]["s_c"].get<double>();
        const double printed = rows[i]["s_0_3dp"].get<double>();
        const std::string tag = "(" + std::to_string(ref[i].n) + "," + num(ref[i].p) + ")";
        o.require(std::abs(s0 - ref[i].s_ours) <= 1e-3, tag + " s_0=" + num(s0) + " vs " + num(ref[i].s_ours));
        o.require(printed == ref[i].s_ours, tag + " truncated " + num(printed));
        o.require(std::abs(sc - ref[i].s_c) <= 1e-15, tag + " s_c=" + num(sc));
    }
    return o;
}

Outcome remark2_closed_form() {
    Outcome o;
    double worst = 0.0;
    for (double p : {1.6, 2.0, 3.0}) {
        const double sc = critical_regularity(3, p);
        const double closed = 0.5 * (-sc + std::sqrt(12.0 * sc - 3.0 * sc * sc));
        for (double sigma : {0.1, 0.3, 0.5}) worst = std::max(worst, std::abs(s_plus(3, p, sigma).value - closed));
    }
    o.require(worst < 1e-12, "max |s_+ - closed form| = " + num(worst));

    double lo = 1.4, hi = 1.7;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (s1(3, mid) > s_plus(3, mid, 0.5).value ? lo : hi) = mid;
    }
    const double crossing = 0.5 * (lo + hi);
    const double expected = (1.0 + std::sqrt(13.0)) / 3.0;
    o.require(std::abs(crossing - expected) < 1e-6, "crossing p=" + num(crossing) + " vs " + num(expected));
    o.require(s0(3, 1.4).dominant == "s_1" && s0(3, 1.7).dominant == "s_3", "s_0 branch switches s_1 -> s_3");
    return o;
}

Outcome remark3_slope_check() {
    Outcome o;
    for (auto [n, p] : {std::pair{4, 1.5}, std::pair{5, 1.2}}) {
        const double h = 1e-4;
        const double fd = (1.0 - s_plus(n, p, h).value) / h;
        const double formula = remark3_slope(n, p);
        const double rel = std::abs(fd - formula) / formula;
        o.require(rel < 0.01, "(" + std::to_string(n) + "," + num(p) + ") fd=" + num(fd) + " formula=" +
                                  num(formula) + " rel " + num(rel));
    }
    return o;
}

Outcome spectral_correctness() {
    Outcome o;
    for (int n : {2, 3}) {
        const Grid g(n, 8, 1.3);
        const SpectralField f = random_field(g, 40 + n);
        const double d = max_abs_difference(forward_transform(f), dft_oracle(f));
        o.require(d < 1e-10, "8^" + std::to_string(n) + " FFT vs DFT " + num(d));

        const SpectralField hat = forward_transform(f);
        double phys = 0.0, freq = 0.0;
        for (const auto& v : f.values()) phys += std::norm(v);
        for (const auto& v : hat.values()) freq += std::norm(v);
        phys *= g.cell_volume();
        freq /= g.volume();
        o.require(std::abs(phys - freq) <= 1e-12 * phys, "Parseval rel " + num(std::abs(phys - freq) / phys));

        const SpectralField ab = apply_multiplier(apply_multiplier(hat, MultiplierSymbol::fractional(0.35)),
                                                  MultiplierSymbol::fractional(0.9));
        const SpectralField direct = apply_multiplier(hat, MultiplierSymbol::fractional(1.25));
        const double rel = max_abs_difference(ab, direct) / max_abs(direct);
        o.require(rel < 1e-12, "semigroup rel " + num(rel));
    }
    return o;
}

Outcome conservation() {
    Outcome o;
    require_rows(o, run_default(ExperimentKind::conservation_suite),
                 {"mass_drift", "energy_drift_order", "reversal_residual"});
    return o;
}

Outcome dispersive() {
    Outcome o;
    require_rows(o, run_default(ExperimentKind::dispersive_decay), {"decay_exponent"});
    return o;
}

Outcome increment() {
    Outcome o;
    const auto rows = run_default(ExperimentKind::increment_scaling);
    require_rows(o, rows, {"increment_decreasing", "increment_slope"});
    for (const auto& r : rows)
        if (r.metric == "energy_drift_floor") o.detail << "drift floor " << num(r.value) << "; ";
    return o;
}

Outcome commutators() {
    Outcome o;
    require_rows(o, run_default(ExperimentKind::commutator_scaling),
                 {"bilinear_slope", "gradient_slope", "bilinear_band_limited_lhs", "bilinear_constant_g_lhs",
                  "gradient_band_limited_lhs"});
    return o;
}

Outcome morawetz() {
    Outcome o;
    const Grid g(3, 8, 4.0);
    InitialDataSpec spec;
    spec.kind = InitialDataSpec::Kind::random_hs;
    spec.s = 0.5;
    spec.max_frequency = 0.26;
    const SpectralField u = make_initial_data(g, spec, 2);
    const InteractionTerms fft = interaction_terms(u, 2.0);
    const InteractionTerms direct = interaction_terms_bruteforce(u, 2.0);
    const double lhs_fft = fft.cube + fft.coulomb, lhs_direct = direct.cube + direct.coulomb;
    for (auto [name, a, b] : {std::tuple{"cube", fft.cube, direct.cube}, std::tuple{"coulomb", fft.coulomb, direct.coulomb},
                              std::tuple{"lhs", lhs_fft, lhs_direct}}) {
        const double rel = std::abs(a - b) / b;
        o.require(rel < 0.05, std::string("8^3 oracle ") + name + " rel " + num(rel));
    }
    require_rows(o, run_default(ExperimentKind::morawetz_bound), {"saturation_ratio", "constant_spread"});
    return o;
}

Outcome scattering() {
    Outcome o;
    require_rows(o, run_default(ExperimentKind::scattering_cauchy), {"dyadic_monotone", "final_relative_difference"});
    return o;
}

Outcome exponent_formulas() {
    Outcome o;
    int checked = 0;
    for (int n : {3, 4, 5}) {
        for (double sigma : {0.25, 0.5}) {
            const double p = 0.5 * (4.0 / n + 4.0 / (n - 2));
            for (double eps : {0.05, 0.2}) {
                for (const auto& [q, r] : working_admissible_pairs(n, sigma, p, eps)) {
                    ++checked;
                    if (!admissible_pair_check(q, r, n))
                        o.require(false, "pair (" + num(q) + "," + num(r) + ") n=" + std::to_string(n));
                }
            }
        }
    }
    o.require(checked == 48, std::to_string(checked) + " pairs admissible");

    const json g = golden();
    const InterpolationExponents ie = interpolation_exponents(4, 1.5, 0.5);
    o.require(std::abs(ie.epsilon - g["interpolation_exponents"]["epsilon"].get<double>()) < 1e-12 &&
                  std::abs(ie.theta - g["interpolation_exponents"]["theta"].get<double>()) < 1e-12,
              "eps=" + num(ie.epsilon) + " theta=" + num(ie.theta));
    const HolderExponents h = morawetz_holder_exponents(4, 1.5, 0.98, 0.5, 0.1);
    o.require(std::abs(h.alpha - g["holder_exponents"]["alpha"].get<double>()) < 1e-12 &&
                  std::abs(h.beta - g["holder_exponents"]["beta"].get<double>()) < 1e-12,
              "alpha=" + num(h.alpha) + " beta=" + num(h.beta));
    const InterpolationExponents deg = interpolation_exponents(3, 2.0, 0.5);
    o.require(deg.degenerate && !deg.valid, "n=3 p=2 flagged degenerate");
    return o;
}

Outcome determinism() {
    Outcome o;
    std::vector<std::string> files;
    for (int k = 0; k < 2; ++k) {
        ExperimentConfig c = parse_config(default_config(ExperimentKind::increment_scaling));
        c.output_dir = fs::temp_directory_path() / ("imlab_acceptance_det" + std::to_string(k));
        fs::remove_all(c.output_dir);
        run_experiment(c, {1, true});
        std::ifstream in(c.output_dir / "results.csv", std::ios::binary);
        std::ostringstream s;
        s << in.rdbuf();
        files.push_back(s.str());
        fs::remove_all(c.output_dir);
    }
    o.require(!files[0].empty() && files[0] == files[1], std::to_string(files[0].size()) + " bytes identical");
    return o;
}

struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
    // Optional argument: run a single criterion by number.
    const int only = argc > 1 ? std::atoi(argv[1]) : 0;
    const std::vector<Criterion> criteria{
        {1, "threshold table reproduction", 1.0, table1_reproduction},
        {2, "closed form of s_+ for n = 3", 1.0, remark2_closed_form},
        {3, "small-sigma slope of s_+", 1.0, remark3_slope_check},
        {4, "spectral correctness", 60.0, spectral_correctness},
        {5, "conservation suite", 60.0, conservation},
        {6, "dispersive decay", 60.0, dispersive},
        {7, "modified-energy increment scaling", 600.0, increment},
        {8, "commutator N-scaling", 120.0, commutators},
        {9, "interaction Morawetz", 600.0, morawetz},
        {10, "scattering Cauchy property", 600.0, scattering},
        {11, "exponent formulas", 60.0, exponent_formulas},
        {12, "determinism", 60.0, determinism},
    };
    int failures = 0;
    int ran = 0;
    for (const auto& c : criteria) {
        if (only != 0 && c.id != only) continue;
        ++ran;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << "exception: " << e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (secs > c.budget_s) o.require(false, "runtime " + num(secs) + " s over " + num(c.budget_s) + " s");
        if (!o.pass) ++failures;
        std::string detail = o.detail.str();
        if (detail.size() >= 2 && detail.substr(detail.size() - 2) == "; ") detail.resize(detail.size() - 2);
        std::printf("%s criterion %2d: %s (%s) [%.2f s]\n", o.pass ? "PASS" : "FAIL", c.id, c.name, detail.c_str(),
                    secs);
        std::fflush(stdout);
    }
    if (ran == 0) {
        std::fprintf(stderr, "no criterion %d\n", only);
        return 1;
    }
    std::printf("%d/%d criteria passed\n", ran - failures, ran);
    return failures == 0 ? 0 : 1;
}
