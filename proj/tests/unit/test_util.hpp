#pragma once

#include "imlab/grid.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace imlab::test {

inline SpectralField random_field(const Grid& g, unsigned long long seed, Space space = Space::physical) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> d(0.0, 1.0);
    SpectralField f(g, space);
    for (auto& v : f.values()) v = cplx(d(rng), d(rng));
    return f;
}

// e^{2 pi i k.x / L} sampled on the grid, k integer per axis.
inline SpectralField plane_wave(const Grid& g, std::array<int, 3> k, cplx amplitude = 1.0) {
    SpectralField f(g, Space::physical);
    for (std::size_t i = 0; i < f.size(); ++i) {
        const auto x = g.position(i);
        double phase = 0.0;
        for (int a = 0; a < g.dimension(); ++a) phase += 2.0 * std::numbers::pi * k[a] * x[a] / g.box_length();
        f[i] = amplitude * std::polar(1.0, phase);
    }
    return f;
}

inline double max_abs(const SpectralField& f) {
    double m = 0.0;
    for (const auto& v : f.values()) m = std::max(m, std::abs(v));
    return m;
}

inline double relative_difference(const SpectralField& a, const SpectralField& b) {
    return max_abs_difference(a, b) / std::max(max_abs(b), 1e-300);
}

}  // namespace imlab::test
