#pragma once

#include "imlab/grid.hpp"

namespace imlab {

struct CommutatorDeficit {
    double lhs = 0.0;
    double rhs_product = 0.0;
    /// p < 1: <grad>^{1-s+nu} was applied to a field of limited smoothness.
    bool limited_smoothness = false;
};

/// lhs = ||I(fg) - (If) g||_r,  rhs = ||If||_{r1} ||<grad>^{1-s+nu} g||_{r2}.
/// Requires 1/r = 1/r1 + 1/r2 and 0 < nu < s.
CommutatorDeficit commutator_deficit(const SpectralField& f, const SpectralField& g, double N, double s,
                                     double nu, double r, double r1, double r2);

/// lhs = ||grad I F(u) - (I grad u) . F'(u)||_r,
/// rhs = ||grad I u||_{r1} ||<grad>^{1-s+nu} |F'(u)|||_{r2}.
/// Vector fields are measured by their pointwise Euclidean magnitude.
CommutatorDeficit gradient_commutator_deficit(const SpectralField& u, double N, double s, double nu,
                                              double p, double r, double r1, double r2);

}  // namespace imlab
