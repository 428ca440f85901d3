#include "imlab/nls.hpp"

#include "imlab/errors.hpp"
#include "imlab/fft.hpp"
#include "imlab/snapshot_io.hpp"
#include "imlab/functionals.hpp"
#include "imlab/multiplier.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>


namespace imlab {

double SimConfig::default_dt(const Grid& grid) noexcept {
    return 0.1 * grid.spacing() * grid.spacing();
}

std::pair<double, double> supercritical_p_range(int n) noexcept {
    const double lo = 4.0 / n;
    const double hi = n > 2 ? 4.0 / (n - 2) : kInfinity;
    return {lo, hi};
}

void SimConfig::validate() const {
    if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw ConfigError("t_end must be finite and >= 0");
    if (dt < 0.0 || !std::isfinite(dt)) throw ConfigError("dt must be finite and > 0");
    if (snapshot_stride < 1) throw ConfigError("snapshot_stride must be >= 1");
    if (!(p > 0.0)) throw ConfigError("nonlinearity power p must be positive");
    if (!(blowup_factor > 1.0)) throw ConfigError("blowup_factor must exceed 1");
    if (!allow_any_p) {
        const auto [lo, hi] = supercritical_p_range(grid.dimension());
        if (!(p > lo && p < hi)) {
            std::ostringstream msg;
            msg << "p=" << p << " outside (4/n, 4/(n-2)) = (" << lo << ", " << hi
                << ") for n=" << grid.dimension() << "; set allow_any_p to override";
            throw ConfigError(msg.str());
        }
    }
}

std::size_t Trajectory::index_of_time(double t, double tol) const {
    for (std::size_t i = 0; i < times.size(); ++i)
        if (std::abs(times[i] - t) <= tol * std::max(1.0, std::abs(t))) return i;
    std::ostringstream msg;
    msg << "time " << t << " is not a snapshot time; available:";
    if (times.size() <= 12) {
        for (double ti : times) msg << ' ' << ti;
    } else {
        for (std::size_t i = 0; i < 5; ++i) msg << ' ' << times[i];
        msg << " ... (" << times.size() - 10 << " more) ...";
        for (std::size_t i = times.size() - 5; i < times.size(); ++i) msg << ' ' << times[i];
    }
    throw ParameterError(msg.str());
}

namespace {

void multiply_by_propagator(SpectralField& hat, const std::vector<double>& r, double t) {
    const double c = -4.0 * std::numbers::pi * std::numbers::pi * t;
    for (std::size_t i = 0; i < hat.size(); ++i) hat[i] *= std::polar(1.0, c * r[i] * r[i]);
}

// Phase factors for one linear sub-step, computed once per run.
std::vector<cplx> propagator_table(const Grid& g, double t) {
    const auto r = g.radial_frequencies();
    const double c = -4.0 * std::numbers::pi * std::numbers::pi * t;
    std::vector<cplx> table(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) table[i] = std::polar(1.0, c * r[i] * r[i]);
    return table;
}

void apply_phase_in_place(SpectralField& u, double dt, double p) {
    const double half_p = 0.5 * p;
    for (cplx& v : u.values()) {
        const double mod_p = half_p == 1.0 ? std::norm(v) : std::pow(std::norm(v), half_p);
        const double phase = -dt * mod_p;
        v *= cplx(std::cos(phase), std::sin(phase));
    }
}

double sup_norm(const SpectralField& u) {
    double m = 0.0;
    for (const cplx& v : u.values()) m = std::max(m, std::abs(v));
    return m;
}

bool all_finite(const SpectralField& u) {
    return std::all_of(u.values().begin(), u.values().end(),
                       [](const cplx& v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); });
}

double rms_frequency(const SpectralField& hat) {
    const auto r = hat.grid().radial_frequencies();
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < hat.size(); ++i) {
        num += r[i] * r[i] * std::norm(hat[i]);
        den += std::norm(hat[i]);
    }
    return den > 0.0 ? std::sqrt(num / den) : 0.0;
}

}  // namespace

SpectralField free_propagator(const SpectralField& field, double t) {
    if (t == 0.0) return field;
    SpectralField hat = to_space(field, Space::frequency);
    multiply_by_propagator(hat, hat.grid().radial_frequencies(), t);
    return field.space() == Space::frequency ? hat : inverse_transform(hat);
}

SpectralField nonlinear_phase_step(const SpectralField& field, double dt, double p) {
    if (field.space() != Space::physical)
        throw ConfigError("nonlinear_phase_step acts on point values");
    SpectralField out = field;
    if (dt != 0.0) apply_phase_in_place(out, dt, p);
    return out;
}

Trajectory truncate_trajectory(const Trajectory& traj, double t) {
    const std::size_t k = traj.index_of_time(t);
    Trajectory out{traj.config, traj.dt};
    out.config.t_end = traj.times[k];
    out.times.assign(traj.times.begin(), traj.times.begin() + static_cast<std::ptrdiff_t>(k + 1));
    out.snapshots.assign(traj.snapshots.begin(), traj.snapshots.begin() + static_cast<std::ptrdiff_t>(k + 1));
    for (const auto& rec : traj.conserved_log)
        if (rec.t <= traj.times[k] + 1e-12) out.conserved_log.push_back(rec);
    out.wraparound_ratio = traj.wraparound_ratio * traj.times[k] / std::max(traj.config.t_end, 1e-300);
    out.wraparound_warning = out.wraparound_ratio > 1.0;
    return out;
}

Trajectory strang_evolve(const SimConfig& config, const SpectralField& u0) {
    config.validate();
    if (!(u0.grid() == config.grid)) throw ConfigError("initial data lives on a different grid");

    Trajectory traj{config};

    const double requested_dt = config.effective_dt();
    const std::size_t steps =
        config.t_end > 0.0
            ? static_cast<std::size_t>(std::ceil(config.t_end / requested_dt - 1e-9))
            : 0;
    const double dt = steps > 0 ? config.t_end / static_cast<double>(steps) : requested_dt;
    traj.dt = dt;

    SpectralField u = to_space(u0, Space::physical);
    SpectralField hat = forward_transform(u);

    const double rms_xi = rms_frequency(hat);
    traj.wraparound_ratio =
        4.0 * std::numbers::pi * rms_xi * config.t_end / (0.5 * config.grid.box_length());
    traj.wraparound_warning = traj.wraparound_ratio > 1.0;

    traj.times.push_back(0.0);
    traj.snapshots.push_back(u);
    traj.conserved_log.push_back({0, 0.0, mass(u), kinetic_energy(hat) + potential_energy(u, config.p)});

    const double sup0 = sup_norm(u);
    const auto half_step = propagator_table(config.grid, 0.5 * dt);
    const double cell = config.grid.cell_volume();
    std::vector<double> kinetic_weight = config.grid.radial_frequencies();
    for (double& w : kinetic_weight) w = 2.0 * std::numbers::pi * std::numbers::pi * w * w / config.grid.volume();

    for (std::size_t step = 1; step <= steps; ++step) {
        for (std::size_t i = 0; i < hat.size(); ++i) hat[i] *= half_step[i];
        u = inverse_transform(hat);
        if (!config.linear_only) apply_phase_in_place(u, dt, config.p);
        hat = forward_transform(u);
        for (std::size_t i = 0; i < hat.size(); ++i) hat[i] *= half_step[i];
        u = inverse_transform(hat);

        if (!all_finite(u)) throw SimulationAborted("non-finite value in field", step);
        const double sup = sup_norm(u);
        if (sup0 > 0.0 && sup > config.blowup_factor * sup0)
            throw SimulationAborted("sup-norm grew beyond blow-up threshold", step);

        const double t = static_cast<double>(step) * dt;
        double m = 0.0;
        for (const cplx& v : u.values()) m += std::norm(v);
        double kinetic = 0.0;
        for (std::size_t i = 0; i < hat.size(); ++i) kinetic += kinetic_weight[i] * std::norm(hat[i]);
        traj.conserved_log.push_back({step, t, m * cell, kinetic + potential_energy(u, config.p)});

        if (step % static_cast<std::size_t>(config.snapshot_stride) == 0 || step == steps) {
            traj.times.push_back(t);
            traj.snapshots.push_back(u);
        }
    }
    return traj;
}

namespace {

// Evaluate a trigonometric interpolant at arbitrary positions, one axis at a
// time. Lines along `axis` of `data` hold coefficients on entry and point
// values on exit; the per-axis 1/L of the inverse transform is included.
void nonuniform_inverse_axis(std::vector<cplx>& data, const Grid& g, int axis,
                             const std::vector<double>& positions) {
    const int m = g.points_per_axis();
    const int n = g.dimension();
    std::size_t stride = 1;
    for (int a = n - 1; a > axis; --a) stride *= static_cast<std::size_t>(m);

    // E[j][k] = e^{2 pi i k y_j / L} / L, Nyquist split evenly between +-M/2.
    std::vector<cplx> table(static_cast<std::size_t>(m) * m);
    const double L = g.box_length();
    for (int j = 0; j < m; ++j) {
        for (int k = 0; k < m; ++k) {
            const double y = positions[j];
            cplx e;
            if (k == m / 2) {
                e = std::cos(std::numbers::pi * m * y / L);
            } else {
                e = std::polar(1.0, 2.0 * std::numbers::pi * g.wavenumber(k) * y / L);
            }
            table[static_cast<std::size_t>(j) * m + k] = e / L;
        }
    }

    std::vector<cplx> line(m);
    std::vector<cplx> out(m);
    for (std::size_t base = 0; base < data.size(); ++base) {
        if ((base / stride) % m != 0) continue;
        for (int k = 0; k < m; ++k) line[k] = data[base + k * stride];
        for (int j = 0; j < m; ++j) {
            cplx acc{0.0, 0.0};
            const cplx* row = &table[static_cast<std::size_t>(j) * m];
            for (int k = 0; k < m; ++k) acc += row[k] * line[k];
            out[j] = acc;
        }
        for (int j = 0; j < m; ++j) data[base + j * stride] = out[j];
    }
}

}  // namespace

SpectralField rescale_data(const SpectralField& u0, double lambda, double p,
                           double tail_tolerance) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ParameterError("lambda must be positive");
    if (!(p > 0.0)) throw ParameterError("p must be positive");
    const Grid& g = u0.grid();
    if (lambda == 1.0) return to_space(u0, Space::physical);

    const SpectralField phys = to_space(u0, Space::physical);
    const SpectralField hat = to_space(u0, Space::frequency);
    const double total = mass(phys);
    const double center = 0.5 * g.box_length();

    if (total > 0.0) {
        double outside = 0.0;
        if (lambda > 1.0) {
            // mass of u0 outside the region that stays inside the box after dilation
            const double half = 0.5 * g.box_length() / lambda;
            for (std::size_t i = 0; i < phys.size(); ++i) {
                const auto x = g.position(i);
                for (int a = 0; a < g.dimension(); ++a) {
                    if (std::abs(x[a] - center) > half) {
                        outside += std::norm(phys[i]);
                        break;
                    }
                }
            }
            outside *= g.cell_volume();
        } else {
            // spectral mass that would be pushed past the grid band
            const double band = lambda * g.max_axis_frequency();
            for (std::size_t i = 0; i < hat.size(); ++i) {
                const auto xi = g.frequency_vector(i);
                for (int a = 0; a < g.dimension(); ++a) {
                    if (std::abs(xi[a]) > band) {
                        outside += std::norm(hat[i]);
                        break;
                    }
                }
            }
            outside /= g.volume();
        }
        if (outside > tail_tolerance * total) {
            std::ostringstream msg;
            msg << "rescale by lambda=" << lambda << " leaves a fraction " << outside / total
                << " of the mass outside the representable region; use a larger box_length"
                << (lambda < 1.0 ? " or more points per axis" : "");
            throw ParameterError(msg.str());
        }
    }

    std::vector<double> positions(g.points_per_axis());
    for (int j = 0; j < g.points_per_axis(); ++j)
        positions[j] = center + (j * g.spacing() - center) / lambda;

    std::vector<cplx> data(hat.values().begin(), hat.values().end());
    for (int a = 0; a < g.dimension(); ++a) nonuniform_inverse_axis(data, g, a, positions);

    SpectralField out(g, Space::physical, std::move(data));
    out *= std::pow(lambda, -2.0 / p);
    return out;
}

SpectralField make_initial_data(const Grid& grid, const InitialDataSpec& spec, std::uint64_t seed) {
    using Kind = InitialDataSpec::Kind;
    const int n = grid.dimension();

    if (spec.kind == Kind::gaussian || spec.kind == Kind::modulated_gaussian) {
        if (!(spec.width > 0.0)) throw ParameterError("gaussian width must be positive");
        std::array<double, 3> c{0.0, 0.0, 0.0};
        for (int a = 0; a < n; ++a) c[a] = spec.center ? (*spec.center)[a] : 0.5 * grid.box_length();
        SpectralField u(grid, Space::physical);
        if (spec.amplitude == 0.0) return u;
        const double L = grid.box_length();
        for (std::size_t i = 0; i < u.size(); ++i) {
            const auto x = grid.position(i);
            double r2 = 0.0;
            double phase = 0.0;
            for (int a = 0; a < n; ++a) {
                double d = x[a] - c[a];
                d -= L * std::round(d / L);  // minimal image
                r2 += d * d;
                phase += spec.wavevector[a] * x[a];
            }
            cplx v = spec.amplitude * std::exp(-r2 / (2.0 * spec.width * spec.width));
            if (spec.kind == Kind::modulated_gaussian) v *= std::polar(1.0, 2.0 * std::numbers::pi * phase);
            u[i] = v;
        }
        return u;
    }

    if (!(spec.s > 0.0 && spec.s < 1.0)) throw ParameterError("random_hs needs s in (0, 1)");
    if (!(spec.delta > 0.0)) throw ParameterError("random_hs needs a roughness margin delta > 0");
    if (!(spec.hs_norm >= 0.0)) throw ParameterError("random_hs target norm must be >= 0");

    const auto r = grid.radial_frequencies();
    const double decay = spec.s + 0.5 * n + spec.delta;
    for (int attempt = 0; attempt < 3; ++attempt) {
        std::mt19937_64 rng(seed + static_cast<std::uint64_t>(attempt));
        std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
        SpectralField hat(grid, Space::frequency);
        for (std::size_t i = 0; i < hat.size(); ++i) {
            const double re = normal(rng);
            const double im = normal(rng);
            if (spec.max_frequency > 0.0 && r[i] > spec.max_frequency) continue;
            hat[i] = cplx{re, im} * std::pow(japanese_bracket(r[i]), -decay);
        }
        const double norm = sobolev_norm(hat, spec.s, false);
        if (norm > 0.0 && std::isfinite(norm)) {
            hat *= spec.hs_norm / norm;
            return inverse_transform(hat);
        }
    }
    throw ParameterError("random_hs draw was not normalizable after 3 seeds");
}

void save_trajectory(const std::filesystem::path& dir, const Trajectory& traj) {
    std::filesystem::create_directories(dir);
    nlohmann::json meta;
    const Grid& g = traj.config.grid;
    meta["grid"] = {{"n", g.dimension()}, {"M", g.points_per_axis()}, {"L_box", g.box_length()}};
    meta["config"] = {{"p", traj.config.p},
                      {"dt", traj.config.dt},
                      {"t_end", traj.config.t_end},
                      {"snapshot_stride", traj.config.snapshot_stride},
                      {"seed", traj.config.seed},
                      {"allow_any_p", traj.config.allow_any_p},
                      {"linear_only", traj.config.linear_only},
                      {"blowup_factor", traj.config.blowup_factor},
                      {"defocusing_sign", 1}};
    meta["dt_used"] = traj.dt;
    meta["times"] = traj.times;
    meta["wraparound_ratio"] = traj.wraparound_ratio;
    meta["wraparound_warning"] = traj.wraparound_warning;
    nlohmann::json log = nlohmann::json::array();
    for (const auto& rec : traj.conserved_log)
        log.push_back({{"step", rec.step}, {"t", rec.t}, {"mass", rec.mass}, {"energy", rec.energy}});
    meta["conserved_log"] = std::move(log);
    nlohmann::json files = nlohmann::json::array();
    for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof(name), "snap_%05zu.bin", i);
        save_snapshot(dir / name, traj.snapshots[i]);
        files.push_back(name);
    }
    meta["snapshots"] = std::move(files);
    std::ofstream out(dir / "meta.json");
    out << meta.dump(2) << '\n';
}

Trajectory load_trajectory(const std::filesystem::path& dir) {
    std::ifstream in(dir / "meta.json");
    if (!in) throw ConfigError("no meta.json in " + dir.string());
    const nlohmann::json meta = nlohmann::json::parse(in);
    const auto& gj = meta.at("grid");
    const auto& cj = meta.at("config");
    Trajectory traj{SimConfig{Grid(gj.at("n").get<int>(), gj.at("M").get<int>(),
                                   gj.at("L_box").get<double>())}};
    traj.config.p = cj.at("p").get<double>();
    traj.config.dt = cj.at("dt").get<double>();
    traj.config.t_end = cj.at("t_end").get<double>();
    traj.config.snapshot_stride = cj.at("snapshot_stride").get<int>();
    traj.config.seed = cj.at("seed").get<std::uint64_t>();
    traj.config.allow_any_p = cj.at("allow_any_p").get<bool>();
    traj.config.linear_only = cj.at("linear_only").get<bool>();
    traj.config.blowup_factor = cj.at("blowup_factor").get<double>();
    traj.dt = meta.at("dt_used").get<double>();
    traj.times = meta.at("times").get<std::vector<double>>();
    traj.wraparound_ratio = meta.at("wraparound_ratio").get<double>();
    traj.wraparound_warning = meta.at("wraparound_warning").get<bool>();
    for (const auto& rec : meta.at("conserved_log"))
        traj.conserved_log.push_back({rec.at("step").get<std::size_t>(), rec.at("t").get<double>(),
                                      rec.at("mass").get<double>(), rec.at("energy").get<double>()});
    for (const auto& name : meta.at("snapshots"))
        traj.snapshots.push_back(load_snapshot(dir / name.get<std::string>()));
    if (traj.snapshots.size() != traj.times.size())
        throw ConfigError("meta.json lists a different number of times and snapshots");
    return traj;
}

}  // namespace imlab
