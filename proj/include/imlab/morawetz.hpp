#pragma once

#include "imlab/grid.hpp"
#include "imlab/nls.hpp"

namespace imlab {

/// Spatial integrands of the interaction Morawetz inequality at one time:
///   cube    = \int\int |u(y)|^2 |u(x)|^2 / |x-y|^3
///   coulomb = \int\int |u(y)|^2 |u(x)|^{p+2} / |x-y|
struct InteractionTerms {
    double cube = 0.0;
    double coulomb = 0.0;
};

/// Time-integrated terms plus ||u0||_2^2 (sup_t ||u||_{\dot H^{1/2}})^2.
struct InteractionMorawetz {
    double term_cube = 0.0;
    double term_coulomb = 0.0;
    double rhs_bound = 0.0;
};

/// Radial kernel |x|^{-alpha} on the grid with minimal-image distance.
/// The x = 0 sample is the average of |x|^{-alpha} over the ball of radius
/// dx/2, i.e. 3 (dx/2)^{-alpha} / (3 - alpha), for alpha < 3; for alpha >= 3
/// that average diverges and the sample is 0 (self-cell excluded).
SpectralField singular_kernel(const Grid& grid, double alpha);

/// FFT convolution evaluation for a single field. n = 3 only.
InteractionTerms interaction_terms(const SpectralField& u, double p);

/// Direct double sum over grid points, diagonal excluded. O((M^n)^2); n = 3,
/// at most kDftOracleMaxPoints points.
InteractionTerms interaction_terms_bruteforce(const SpectralField& u, double p);

/// Per-snapshot terms integrated in time with the trapezoid rule.
InteractionMorawetz interaction_morawetz(const Trajectory& traj, double p);

}  // namespace imlab
