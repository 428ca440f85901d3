#include "test_util.hpp"

#include "imlab/errors.hpp"
#include "imlab/fft.hpp"
#include "imlab/fit.hpp"
#include "imlab/functionals.hpp"
#include "imlab/nls.hpp"
#include "imlab/thresholds.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>

using namespace imlab;
using imlab::test::random_field;

namespace {

// Reference n = 1 run: modulated Gaussian, p = 2 with the range check off.
SimConfig reference_config(double dt, double t_end) {
    SimConfig c{Grid(1, 1024, 64.0)};
    c.p = 2.0;
    c.dt = dt;
    c.t_end = t_end;
    c.snapshot_stride = 1000000;
    c.allow_any_p = true;
    return c;
}

SpectralField reference_data(const Grid& g) {
    InitialDataSpec spec;
    spec.kind = InitialDataSpec::Kind::modulated_gaussian;
    spec.amplitude = 1.0;
    spec.width = 2.0;
    spec.wavevector = {0.3, 0.0, 0.0};
    return make_initial_data(g, spec, 0);
}

double max_relative_energy_drift(const Trajectory& t) {
    const double e0 = t.conserved_log.front().energy;
    double worst = 0.0;
    for (const auto& r : t.conserved_log) worst = std::max(worst, std::abs(r.energy - e0) / std::abs(e0));
    return worst;
}

}  // namespace

TEST_CASE("SimConfig validation") {
    SimConfig c{Grid(3, 16, 1.0)};
    c.p = 2.0;
    CHECK_NOTHROW(c.validate());
    c.p = 1.0;  // below 4/3
    try {
        c.validate();
        FAIL("accepted subcritical p");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("allow_any_p") != std::string::npos);
    }
    c.allow_any_p = true;
    CHECK_NOTHROW(c.validate());
    c.snapshot_stride = 0;
    CHECK_THROWS_AS(c.validate(), ConfigError);

    CHECK(SimConfig::default_dt(Grid(1, 64, 8.0)) == doctest::Approx(0.1 / 64.0));
    CHECK(supercritical_p_range(3).first == doctest::Approx(4.0 / 3.0));
    CHECK(supercritical_p_range(3).second == doctest::Approx(4.0));
    CHECK(std::isinf(supercritical_p_range(2).second));
}

TEST_CASE("free propagator: identity, unitarity and composition") {
    const Grid g(2, 32, 3.0);
    const SpectralField f = random_field(g, 17);
    CHECK(max_abs_difference(free_propagator(f, 0.0), f) < 1e-14);

    const SpectralField ft = free_propagator(f, 1.7);
    CHECK(ft.space() == Space::physical);
    CHECK(std::abs(mass(ft) - mass(f)) <= 1e-13 * mass(f));

    const SpectralField hat = forward_transform(f);
    const SpectralField two = free_propagator(free_propagator(hat, 0.3), 0.45);
    const SpectralField gap = two - free_propagator(hat, 0.75);
    CHECK(std::sqrt(mass(gap) / mass(f)) < 1e-13);
}

TEST_CASE("free propagator matches the closed-form Gaussian in n = 1") {
    // i u_t + u_xx = 0 with u0 = exp(-x^2 / (2 w^2)):
    //   u(t, x) = (w^2 / (w^2 + 2 i t))^{1/2} exp(-x^2 / (2 (w^2 + 2 i t))).
    const Grid g(1, 1024, 40.0);
    const double w = 1.0, c = 20.0;
    InitialDataSpec spec;
    spec.width = w;
    const SpectralField u0 = make_initial_data(g, spec, 0);
    for (double t : {0.1, 0.5, 1.0}) {
        const SpectralField ut = free_propagator(u0, t);
        const cplx z = w * w + cplx(0.0, 2.0 * t);
        double err = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            const double x = g.position(i)[0] - c;
            const cplx exact = std::sqrt(w * w / z) * std::exp(-x * x / (2.0 * z));
            err = std::max(err, std::abs(ut[i] - exact));
        }
        CHECK(err < 1e-8);
    }
}

TEST_CASE("nonlinear phase step") {
    const Grid g(2, 16, 1.0);
    const SpectralField f = random_field(g, 2);
    CHECK(max_abs_difference(nonlinear_phase_step(f, 0.0, 2.0), f) == 0.0);

    const SpectralField out = nonlinear_phase_step(f, 0.37, 1.5);
    for (std::size_t i = 0; i < f.size(); ++i) CHECK(std::abs(std::abs(out[i]) - std::abs(f[i])) < 1e-15);

    // u = c constant: c exp(-i dt |c|^p).
    const cplx c{0.8, -0.6};
    for (double p : {2.0, 1.5, 3.0}) {
        SpectralField k(g, Space::physical);
        for (auto& v : k.values()) v = c;
        const cplx expected = c * std::exp(cplx(0.0, -0.25 * std::pow(std::abs(c), p)));
        const SpectralField r = nonlinear_phase_step(k, 0.25, p);
        for (const auto& v : r.values()) CHECK(std::abs(v - expected) < 1e-15);
    }

    CHECK_THROWS_AS(nonlinear_phase_step(forward_transform(f), 0.1, 2.0), ConfigError);
}

TEST_CASE("zero data stays zero") {
    SimConfig c{Grid(3, 16, 4.0)};
    c.p = 2.0;
    c.t_end = 0.05;
    c.dt = 0.01;
    const Trajectory t = strang_evolve(c, SpectralField(c.grid, Space::physical));
    CHECK(t.conserved_log.size() == 6);
    for (const auto& r : t.conserved_log) {
        CHECK(r.mass == 0.0);
        CHECK(r.energy == 0.0);
    }
    for (const auto& s : t.snapshots) CHECK(imlab::test::max_abs(s) == 0.0);
}

TEST_CASE("snapshots include both ends and follow the stride") {
    SimConfig c{Grid(1, 64, 4.0)};
    c.p = 2.0;
    c.allow_any_p = true;
    c.dt = 0.01;
    c.t_end = 0.105;  // rounded up to 11 steps
    c.snapshot_stride = 4;
    const Trajectory t = strang_evolve(c, reference_data(c.grid));
    CHECK(t.dt == doctest::Approx(0.105 / 11));
    REQUIRE(t.times.size() == 4);
    CHECK(t.times.front() == 0.0);
    CHECK(t.times.back() == doctest::Approx(0.105));
    CHECK(t.conserved_log.size() == 12);
    for (std::size_t i = 1; i < t.times.size(); ++i) CHECK(t.times[i] > t.times[i - 1]);
    CHECK(t.index_of_time(t.times[2]) == 2);
    CHECK_THROWS_AS(t.index_of_time(0.05), ParameterError);

    const Trajectory cut = truncate_trajectory(t, t.times[1]);
    CHECK(cut.times.size() == 2);
    CHECK(cut.conserved_log.back().t <= t.times[1] + 1e-12);
}

TEST_CASE("non-finite data aborts with the step index") {
    SimConfig c{Grid(1, 32, 1.0)};
    c.p = 2.0;
    c.allow_any_p = true;
    c.t_end = 0.01;
    SpectralField u(c.grid, Space::physical);
    u[3] = std::numeric_limits<double>::quiet_NaN();
    try {
        strang_evolve(c, u);
        FAIL("no abort");
    } catch (const SimulationAborted& e) {
        CHECK(e.step() == 1);
    }
}

TEST_CASE("mass is conserved to roundoff over 1000 steps") {
    const SimConfig c = reference_config(0.004, 4.0);
    const Trajectory t = strang_evolve(c, reference_data(c.grid));
    CHECK(t.conserved_log.size() == 1001);
    const double m0 = t.conserved_log.front().mass;
    double worst = 0.0;
    for (const auto& r : t.conserved_log) worst = std::max(worst, std::abs(r.mass - m0) / m0);
    CHECK(worst < 1e-11);
}

TEST_CASE("energy drift is second order in dt") {
    std::vector<double> dts{0.016, 0.008, 0.004}, drifts;
    for (double dt : dts) {
        const SimConfig c = reference_config(dt, 2.0);
        drifts.push_back(max_relative_energy_drift(strang_evolve(c, reference_data(c.grid))));
    }
    const LineFit fit = loglog_fit(dts, drifts);
    CHECK(fit.slope >= 1.8);
    CHECK(fit.slope <= 2.2);
    CHECK(drifts[0] / drifts[1] == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("evolving forward then with conjugated data returns to u0") {
    const SimConfig c = reference_config(0.004, 2.0);
    const SpectralField u0 = reference_data(c.grid);
    const Trajectory fwd = strang_evolve(c, u0);
    const Trajectory back = strang_evolve(c, conj(fwd.snapshots.back()));
    const SpectralField err = conj(back.snapshots.back()) - u0;
    CHECK(std::sqrt(mass(err) / mass(u0)) < 1e-6);
}

TEST_CASE("rescaling") {
    const Grid g(3, 64, 40.0);
    InitialDataSpec spec;
    spec.width = 1.0;
    const SpectralField u0 = make_initial_data(g, spec, 0);
    const double p = 2.0;
    const double sc = critical_regularity(3, p);
    CHECK(sc == doctest::Approx(0.5));

    CHECK(max_abs_difference(rescale_data(u0, 1.0, p), u0) < 1e-14);

    const SpectralField u2 = rescale_data(u0, 2.0, p);
    CHECK(std::sqrt(mass(u2)) == doctest::Approx(std::pow(2.0, sc) * std::sqrt(mass(u0))).epsilon(1e-6));

    std::vector<double> lambdas{1.0, 2.0, 4.0}, norms;
    for (double l : lambdas) norms.push_back(sobolev_norm(rescale_data(u0, l, p), 0.5, true));
    CHECK(std::abs(loglog_fit(lambdas, norms).slope - (sc - 0.5)) <= 0.02);

    try {
        rescale_data(u0, 64.0, p);
        FAIL("support left the box");
    } catch (const ParameterError& e) {
        CHECK(std::string(e.what()).find("larger box_length") != std::string::npos);
    }
    CHECK_THROWS_AS(rescale_data(u0, 0.05, p), ParameterError);
}

TEST_CASE("initial data generators") {
    const Grid g(2, 32, 4.0);
    InitialDataSpec zero;
    zero.amplitude = 0.0;
    CHECK(imlab::test::max_abs(make_initial_data(g, zero, 0)) == 0.0);

    InitialDataSpec gauss;
    gauss.amplitude = 2.0;
    gauss.width = 0.5;
    const SpectralField u = make_initial_data(g, gauss, 0);
    // Peak at the box center.
    CHECK(std::abs(u[g.flatten({16, 16, 0})] - 2.0) < 1e-14);

    InitialDataSpec mod = gauss;
    mod.kind = InitialDataSpec::Kind::modulated_gaussian;
    mod.wavevector = {1.0, 0.0, 0.0};
    const SpectralField um = make_initial_data(g, mod, 0);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(std::abs(std::abs(um[i]) - std::abs(u[i])) < 1e-14);
}

TEST_CASE("random H^s data: normalized, rough and deterministic") {
    const Grid g(1, 16384, 1.0);
    InitialDataSpec spec;
    spec.kind = InitialDataSpec::Kind::random_hs;
    spec.s = 0.7;
    spec.delta = 0.05;
    spec.hs_norm = 2.5;
    const SpectralField f = make_initial_data(g, spec, 42);
    CHECK(std::abs(sobolev_norm(f, 0.7, false) - 2.5) <= 1e-10 * 2.5);
    CHECK(sobolev_norm(f, 0.95, false) > 3.0 * sobolev_norm(f, 0.7, false));

    const SpectralField again = make_initial_data(g, spec, 42);
    CHECK(max_abs_difference(f, again) == 0.0);
    CHECK(max_abs_difference(f, make_initial_data(g, spec, 43)) > 0.0);

    spec.s = 1.0;
    CHECK_THROWS_AS(make_initial_data(g, spec, 0), ParameterError);
    spec.s = 0.5;
    spec.delta = 0.0;
    CHECK_THROWS_AS(make_initial_data(g, spec, 0), ParameterError);
}

TEST_CASE("trajectory save and load") {
    SimConfig c{Grid(2, 16, 2.0)};
    c.p = 3.0;
    c.dt = 0.01;
    c.t_end = 0.05;
    c.snapshot_stride = 2;
    c.seed = 9;
    const Trajectory t = strang_evolve(c, random_field(c.grid, 1));
    const auto dir = std::filesystem::temp_directory_path() / "imlab_traj_test";
    std::filesystem::remove_all(dir);
    save_trajectory(dir, t);
    CHECK(std::filesystem::exists(dir / "meta.json"));
    const Trajectory back = load_trajectory(dir);
    CHECK(back.config.grid == c.grid);
    CHECK(back.config.seed == 9);
    REQUIRE(back.times.size() == t.times.size());
    for (std::size_t i = 0; i < t.times.size(); ++i) {
        CHECK(back.times[i] == t.times[i]);
        CHECK(max_abs_difference(back.snapshots[i], t.snapshots[i]) == 0.0);
    }
    CHECK(back.conserved_log.size() == t.conserved_log.size());
    std::filesystem::remove_all(dir);
    CHECK_THROWS_AS(load_trajectory(dir), ConfigError);
}
