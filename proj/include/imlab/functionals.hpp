#pragma once

#include "imlab/grid.hpp"

#include <limits>

namespace imlab {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// ||u||_2^2.
double mass(const SpectralField& u);

/// \int [ 1/2 |grad u|^2 + |u|^{p+2}/(p+2) ] dx with grad of symbol 2 pi i xi.
double energy(const SpectralField& u, double p);

/// energy(I_N u).
double modified_energy(const SpectralField& u, double p, double N, double s);

/// Kinetic part 1/2 ||grad u||_2^2 from spectral coefficients.
double kinetic_energy(const SpectralField& u_hat);
/// Potential part \int |u|^{p+2}/(p+2) from point values.
double potential_energy(const SpectralField& u_phys, double p);

/// (\int |f|^r dx)^{1/r}; r = inf gives the grid maximum.
double lp_norm(const SpectralField& f, double r);

/// ||f||_{H^s} = ||<grad>^s f||_2, or ||f||_{\dot H^s} = || |grad|^s f ||_2.
/// For homogeneous s < 0 the zero mode is excluded.
double sobolev_norm(const SpectralField& f, double s, bool homogeneous);

}  // namespace imlab
