#include "imlab/spectral_ops.hpp"

#include "imlab/errors.hpp"
#include "imlab/fft.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace imlab {

SpectralField apply_multiplier(const SpectralField& field, const MultiplierSymbol& symbol,
                               MultiplierReport* report) {
    SpectralField hat = to_space(field, Space::frequency);
    const Grid& g = hat.grid();
    const auto r = g.radial_frequencies();

    // Zero mode sits at flat index 0.
    if (symbol.discards_zero_mode() && std::abs(hat[0]) > 0.0 && report != nullptr)
        report->mean_discarded = true;

    for (std::size_t i = 0; i < hat.size(); ++i) hat[i] *= symbol(r[i]);
    if (symbol.discards_zero_mode()) hat[0] = 0.0;

    return field.space() == Space::frequency ? hat : inverse_transform(hat);
}

DyadicRange resolvable_dyadic_range(const Grid& grid) {
    const double lo = std::exp2(std::ceil(std::log2(1.0 / grid.box_length())));
    const double hi = std::exp2(std::floor(std::log2(grid.max_axis_frequency())));
    return {lo, hi};
}

SpectralField littlewood_paley(const SpectralField& field, double N, LpKind kind) {
    const auto range = resolvable_dyadic_range(field.grid());
    const double k = std::log2(N);
    if (!(N > 0.0) || k != std::round(k) || N < range.min_scale || N > range.max_scale) {
        std::ostringstream msg;
        msg << "Littlewood-Paley scale N=" << N << " must be a power of two in ["
            << range.min_scale << ", " << range.max_scale << "] for this grid";
        throw ParameterError(msg.str());
    }
    switch (kind) {
        case LpKind::le: return apply_multiplier(field, MultiplierSymbol::lp_low(N));
        case LpKind::gt: {
            // f - P_{<=N} f coefficient by coefficient, so the two pieces sum back to f.
            const SpectralField hat = to_space(field, Space::frequency);
            const SpectralField high = hat - apply_multiplier(hat, MultiplierSymbol::lp_low(N));
            return field.space() == Space::frequency ? high : inverse_transform(high);
        }
        case LpKind::band: return apply_multiplier(field, MultiplierSymbol::lp_band(N));
    }
    throw ParameterError("unknown Littlewood-Paley kind");
}

SpectralField i_operator(const SpectralField& field, double N, double s) {
    return apply_multiplier(field, MultiplierSymbol::i_operator(N, s));
}

SpectralField partial_derivative(const SpectralField& field, int axis) {
    const Grid& g = field.grid();
    if (axis < 0 || axis >= g.dimension()) throw ParameterError("derivative axis out of range");
    SpectralField hat = to_space(field, Space::frequency);
    const cplx factor{0.0, 2.0 * std::numbers::pi};
    for (std::size_t i = 0; i < hat.size(); ++i) {
        hat[i] *= factor * g.frequency(g.unflatten(i)[axis]);
    }
    return field.space() == Space::frequency ? hat : inverse_transform(hat);
}

std::vector<SpectralField> gradient(const SpectralField& field) {
    SpectralField hat = to_space(field, Space::frequency);
    std::vector<SpectralField> out;
    out.reserve(field.grid().dimension());
    for (int a = 0; a < field.grid().dimension(); ++a) {
        SpectralField d = partial_derivative(hat, a);
        out.push_back(field.space() == Space::frequency ? d : inverse_transform(d));
    }
    return out;
}

}  // namespace imlab
