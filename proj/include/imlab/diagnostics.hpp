#pragma once

#include "imlab/functionals.hpp"
#include "imlab/grid.hpp"
#include "imlab/nls.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace imlab {

/// Flat output record shared by every diagnostic.
struct DiagnosticRecord {
    std::string name;
    std::map<std::string, double> params;
    double value = 0.0;
    std::map<std::string, std::string> metadata;
};

/// Spacetime norm L^q_t L^r_x of D^k u, optionally of D^k I_N u.
struct MixedNormSpec {
    enum class Derivative { fractional, bracket, gradient };

    double q = 2.0;  ///< may be kInfinity
    double r = 2.0;  ///< may be kInfinity
    double k = 0.0;  ///< order; ignored for `gradient` (always 1)
    Derivative derivative = Derivative::fractional;
    /// Apply I_N (N, s) before differentiating.
    std::optional<std::pair<double, double>> i_operator;

    void validate() const;
};

/// || D^k u(t) ||_{L^r_x} for one snapshot.
double spatial_norm(const SpectralField& u, const MixedNormSpec& spec);

/// (\int ||D^k u(t)||_r^q dt)^{1/q}, trapezoid in t over snapshot times;
/// q = inf takes the max over snapshots. Needs >= 2 snapshots.
double mixed_norm(const Trajectory& traj, const MixedNormSpec& spec);

/// Exponents (q, r) = ((n-3+4 sigma)/sigma, 2(n-3+4 sigma)/(n-3+2 sigma)).
std::pair<double, double> morawetz_exponents(int n, double sigma);

/// ||u||_{M_sigma} = ||u||_{L^q_t L^r_x} with morawetz_exponents.
double morawetz_norm(const Trajectory& traj, double sigma);

/// || |grad|^{-(n-3)/4} u ||_{L^4_{t,x}}; n = 3 is plain L^4_{t,x}.
double negative_deriv_morawetz(const Trajectory& traj);

/// (||u0||_2 sup_t ||u||_{\dot H^{1/2}})^{2 sigma/(n-3+4 sigma)}
///   * (sup_t ||u||_{\dot H^sigma})^{(n-3)/(n-3+4 sigma)}
double morawetz_interpolation_bound(const Trajectory& traj, double sigma);

/// sup over snapshots of a homogeneous Sobolev norm.
double sup_sobolev(const Trajectory& traj, double s, bool homogeneous);

/// Max over the listed pairs of mixed_norm(D^k, q, r). Every pair must be
/// Schrodinger-admissible for the trajectory's dimension.
double strichartz_sup(const Trajectory& traj, const std::vector<std::pair<double, double>>& pairs,
                      MixedNormSpec base);

/// Z_I: strichartz_sup of grad I_N u.
double z_norm(const Trajectory& traj, const std::vector<std::pair<double, double>>& pairs,
              double N, double s);

/// || e^{-it Delta} u(t) - e^{-i tau Delta} u(tau) ||_{H^s}; t and tau must be snapshot times.
double scattering_cauchy(const Trajectory& traj, double s, double t, double tau);

}  // namespace imlab
