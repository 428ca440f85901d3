#pragma once

#include "imlab/grid.hpp"

namespace imlab {

/// Physical -> frequency under f^(xi) = \int e^{-2 pi i x.xi} f dx, discretized
/// with weight dx^n. Backed by FFTW; plans are cached per (n, M).
SpectralField forward_transform(const SpectralField& field);

/// Exact inverse of forward_transform: f(x_j) = L^{-n} sum_k f^_k e^{2 pi i x_j.xi_k}.
SpectralField inverse_transform(const SpectralField& field);

/// Returns the field in the requested space, transforming only if needed.
SpectralField to_space(const SpectralField& field, Space space);

/// Direct O((M^n)^2) summation with the same normalization as
/// forward_transform. Refuses grids with more than kDftOracleMaxPoints points.
SpectralField dft_oracle(const SpectralField& field);

inline constexpr std::size_t kDftOracleMaxPoints = 4096;

}  // namespace imlab
