#pragma once

#include "imlab/grid.hpp"
#include "imlab/multiplier.hpp"

#include <vector>

namespace imlab {

struct MultiplierReport {
    /// A negative-order fractional symbol met a field with a nonzero mean.
    bool mean_discarded = false;
};

/// Multiply spectral coefficients by symbol(|xi|). The result is returned in
/// the same space as the input.
SpectralField apply_multiplier(const SpectralField& field, const MultiplierSymbol& symbol,
                               MultiplierReport* report = nullptr);

enum class LpKind { le, gt, band };

/// Dyadic scales 2^k with 1/L <= 2^k <= M/(2L), the band where an LP cutoff
/// actually separates resolved frequencies.
struct DyadicRange {
    double min_scale;
    double max_scale;
};
DyadicRange resolvable_dyadic_range(const Grid& grid);

/// P_{<=N} f, P_{>N} f or P_N f. N must be a power of two inside
/// resolvable_dyadic_range(grid).
SpectralField littlewood_paley(const SpectralField& field, double N, LpKind kind);

/// I_N f with the smoothed symbol of i_symbol().
SpectralField i_operator(const SpectralField& field, double N, double s);

/// Spectral partial derivative along one axis (symbol 2 pi i xi_axis).
SpectralField partial_derivative(const SpectralField& field, int axis);

/// All n components of the spectral gradient, same space as the input.
std::vector<SpectralField> gradient(const SpectralField& field);

}  // namespace imlab
