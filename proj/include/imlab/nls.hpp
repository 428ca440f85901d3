#pragma once

#include "imlab/grid.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace imlab {

/// Time stepping setup for  i u_t + Delta u = |u|^p u  (defocusing only).
struct SimConfig {
    Grid grid;
    double p = 2.0;
    double dt = 0.0;  ///< <= 0 selects default_dt(grid)
    double t_end = 0.0;
    int snapshot_stride = 1;
    std::uint64_t seed = 0;
    /// Skip the 4/n < p < 4/(n-2) check.
    bool allow_any_p = false;
    /// Test mode: drop the nonlinear sub-step (pure free evolution).
    bool linear_only = false;
    /// Abort once ||u||_inf exceeds this multiple of its initial value.
    double blowup_factor = 1e6;

    /// 0.1 dx^2.
    static double default_dt(const Grid& grid) noexcept;
    double effective_dt() const noexcept { return dt > 0.0 ? dt : default_dt(grid); }
    void validate() const;
};

/// p range (4/n, 4/(n-2)); the upper end is +inf for n <= 2.
std::pair<double, double> supercritical_p_range(int n) noexcept;

struct ConservedRecord {
    std::size_t step;
    double t;
    double mass;
    double energy;
};

struct Trajectory {
    SimConfig config;
    double dt = 0.0;  ///< step actually used (t_end split into whole steps)
    std::vector<double> times;
    std::vector<SpectralField> snapshots;  ///< physical space, aligned with times
    std::vector<ConservedRecord> conserved_log;
    /// Crude signal-speed estimate: 4 pi * rms|xi| * t_end against L/2.
    double wraparound_ratio = 0.0;
    bool wraparound_warning = false;

    std::size_t index_of_time(double t, double tol = 1e-9) const;
};

/// Snapshots and conserved log up to and including the snapshot at time t
/// (which must be a snapshot time).
Trajectory truncate_trajectory(const Trajectory& traj, double t);

/// e^{it Delta}: multiplies coefficients by e^{-4 pi^2 i t |xi|^2}. Same space as input.
SpectralField free_propagator(const SpectralField& field, double t);

/// Exact flow of i u_t = |u|^p u over dt: u <- u exp(-i dt |u|^p).
SpectralField nonlinear_phase_step(const SpectralField& field, double dt, double p);

/// Strang splitting: half linear, full nonlinear, half linear per step.
/// Snapshots every snapshot_stride steps plus t = 0 and t = t_end.
/// Throws SimulationAborted on NaN/Inf or blow-up.
Trajectory strang_evolve(const SimConfig& config, const SpectralField& u0);

/// u0^lambda(x) = lambda^{-2/p} u0(c + (x - c)/lambda), c the box center,
/// evaluated from the trigonometric interpolant of u0. Fails when the dilated
/// profile would leave the box (lambda > 1) or exceed the grid band
/// (lambda < 1) by more than tail_tolerance of the L^2 mass.
SpectralField rescale_data(const SpectralField& u0, double lambda, double p,
                           double tail_tolerance = 1e-8);

struct InitialDataSpec {
    enum class Kind { gaussian, modulated_gaussian, random_hs };
    Kind kind = Kind::gaussian;
    // gaussian / modulated_gaussian: A exp(-|x - x0|^2 / (2 w^2)) e^{2 pi i k0.x}
    double amplitude = 1.0;
    double width = 1.0;
    std::optional<std::array<double, 3>> center;  ///< defaults to the box center
    std::array<double, 3> wavevector{0.0, 0.0, 0.0};
    // random_hs: coefficient std ~ <xi>^{-(s + n/2 + delta)}, scaled to ||.||_{H^s} = hs_norm
    double s = 0.5;
    double delta = 0.05;
    double hs_norm = 1.0;
    /// Zero all coefficients with |xi| above this (<= 0: keep the full grid band).
    double max_frequency = 0.0;
};

SpectralField make_initial_data(const Grid& grid, const InitialDataSpec& spec, std::uint64_t seed);

/// Directory layout: meta.json (config, times, conserved log) + snap_NNNNN.bin.
void save_trajectory(const std::filesystem::path& dir, const Trajectory& traj);
Trajectory load_trajectory(const std::filesystem::path& dir);

}  // namespace imlab
