#include "imlab/functionals.hpp"

#include "imlab/errors.hpp"
#include "imlab/fft.hpp"
#include "imlab/multiplier.hpp"
#include "imlab/spectral_ops.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace imlab {

double mass(const SpectralField& u) {
    const SpectralField phys = to_space(u, Space::physical);
    double acc = 0.0;
    for (const cplx& v : phys.values()) acc += std::norm(v);
    return acc * phys.grid().cell_volume();
}

double kinetic_energy(const SpectralField& u_hat) {
    if (u_hat.space() != Space::frequency) throw ConfigError("kinetic_energy needs coefficients");
    const auto r = u_hat.grid().radial_frequencies();
    const double c = 4.0 * std::numbers::pi * std::numbers::pi;
    double acc = 0.0;
    for (std::size_t i = 0; i < u_hat.size(); ++i) acc += c * r[i] * r[i] * std::norm(u_hat[i]);
    return 0.5 * acc / u_hat.grid().volume();
}

double potential_energy(const SpectralField& u_phys, double p) {
    if (u_phys.space() != Space::physical) throw ConfigError("potential_energy needs point values");
    const double half = 0.5 * (p + 2.0);
    double acc = 0.0;
    if (half == 2.0) {
        for (const cplx& v : u_phys.values()) acc += std::norm(v) * std::norm(v);
    } else {
        for (const cplx& v : u_phys.values()) acc += std::pow(std::norm(v), half);
    }
    return acc * u_phys.grid().cell_volume() / (p + 2.0);
}

double energy(const SpectralField& u, double p) {
    const SpectralField hat = to_space(u, Space::frequency);
    const SpectralField phys = to_space(u, Space::physical);
    return kinetic_energy(hat) + potential_energy(phys, p);
}

double modified_energy(const SpectralField& u, double p, double N, double s) {
    return energy(i_operator(u, N, s), p);
}

double lp_norm(const SpectralField& f, double r) {
    if (!(r >= 1.0)) throw ParameterError("Lebesgue exponent must be >= 1");
    const SpectralField phys = to_space(f, Space::physical);
    if (std::isinf(r)) {
        double m = 0.0;
        for (const cplx& v : phys.values()) m = std::max(m, std::abs(v));
        return m;
    }
    double acc = 0.0;
    if (r == 2.0) {
        for (const cplx& v : phys.values()) acc += std::norm(v);
    } else {
        for (const cplx& v : phys.values()) acc += std::pow(std::abs(v), r);
    }
    return std::pow(acc * phys.grid().cell_volume(), 1.0 / r);
}

double sobolev_norm(const SpectralField& f, double s, bool homogeneous) {
    const SpectralField hat = to_space(f, Space::frequency);
    const auto r = hat.grid().radial_frequencies();
    double acc = 0.0;
    for (std::size_t i = 0; i < hat.size(); ++i) {
        double w;
        if (homogeneous) {
            if (r[i] == 0.0) {
                w = s == 0.0 ? 1.0 : 0.0;
            } else {
                w = std::pow(r[i], 2.0 * s);
            }
        } else {
            w = std::pow(1.0 + r[i] * r[i], s);
        }
        acc += w * std::norm(hat[i]);
    }
    return std::sqrt(acc / hat.grid().volume());
}

}  // namespace imlab
