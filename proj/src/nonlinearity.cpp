#include "imlab/nonlinearity.hpp"

#include "imlab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace imlab {

NonlinearityF::NonlinearityF(double p) : p_(p) {
    if (!(p > 0.0)) throw ParameterError("nonlinearity power must be positive");
}

cplx NonlinearityF::value(cplx z) const noexcept { return std::pow(std::abs(z), p_) * z; }

cplx NonlinearityF::d_z(cplx z) const noexcept {
    return 0.5 * (p_ + 2.0) * std::pow(std::abs(z), p_);
}

cplx NonlinearityF::d_zbar(cplx z) const noexcept {
    const double a = std::abs(z);
    if (a == 0.0) return 0.0;
    // z / zbar = e^{2 i arg z}
    return 0.5 * p_ * std::pow(a, p_) * (z * z) / (a * a);
}

double NonlinearityF::derivative_magnitude(cplx z) const noexcept {
    const double c = std::hypot(0.5 * (p_ + 2.0), 0.5 * p_);
    return c * std::pow(std::abs(z), p_);
}

double NonlinearityF::derivative_distance(cplx z, cplx w) const noexcept {
    return std::sqrt(std::norm(d_z(z) - d_z(w)) + std::norm(d_zbar(z) - d_zbar(w)));
}

SpectralField NonlinearityF::apply(const SpectralField& u_phys) const {
    if (u_phys.space() != Space::physical) throw ConfigError("F(u) is evaluated on point values");
    SpectralField out = u_phys;
    for (cplx& v : out.values()) v = value(v);
    return out;
}

SpectralField NonlinearityF::derivative_magnitude_field(const SpectralField& u_phys) const {
    if (u_phys.space() != Space::physical) throw ConfigError("F'(u) is evaluated on point values");
    SpectralField out = u_phys;
    for (cplx& v : out.values()) v = derivative_magnitude(v);
    return out;
}

std::vector<SpectralField> NonlinearityF::chain_rule(const std::vector<SpectralField>& grad_u,
                                                     const SpectralField& u_phys) const {
    std::vector<SpectralField> out;
    out.reserve(grad_u.size());
    for (const auto& g : grad_u) {
        if (g.space() != Space::physical || !(g.grid() == u_phys.grid()))
            throw ConfigError("chain_rule needs physical gradient fields on the same grid");
        SpectralField c = g;
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = pair(g[i], u_phys[i]);
        out.push_back(std::move(c));
    }
    return out;
}

double fit_holder_constant(const NonlinearityF& f, std::size_t samples, double radius,
                           unsigned long long seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double a = std::min(1.0, f.p());
    auto draw = [&] {
        const double rad = radius * std::sqrt(unit(rng));
        const double ang = 2.0 * M_PI * unit(rng);
        return std::polar(rad, ang);
    };
    double c = 0.0;
    for (std::size_t i = 0; i < samples; ++i) {
        const cplx z = draw();
        const cplx w = draw();
        const double dz = std::abs(z - w);
        if (dz == 0.0) continue;
        const double bound = std::pow(dz, a) * std::pow(std::abs(z) + std::abs(w), f.p() - a);
        if (bound > 0.0) c = std::max(c, f.derivative_distance(z, w) / bound);
    }
    return c;
}

}  // namespace imlab
