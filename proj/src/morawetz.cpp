#include "imlab/morawetz.hpp"

#include "imlab/diagnostics.hpp"
#include "imlab/errors.hpp"
#include "imlab/fft.hpp"

#include <cmath>

namespace imlab {
namespace {

void require_three_dimensions(const Grid& g) {
    if (g.dimension() != 3)
        throw ConfigError("interaction Morawetz terms use the |x-y|^-3, |x-y|^-1 pair; only n = 3 is supported");
}

double minimal_image(double d, double L) { return d - L * std::round(d / L); }

// \int sigma(x) (K * rho)(x) dx with the convolution done spectrally.
double kernel_pairing(const SpectralField& rho, const SpectralField& sigma, const SpectralField& kernel_hat) {
    SpectralField rho_hat = forward_transform(rho);
    for (std::size_t i = 0; i < rho_hat.size(); ++i) rho_hat[i] *= kernel_hat[i];
    const SpectralField conv = inverse_transform(rho_hat);
    double acc = 0.0;
    for (std::size_t i = 0; i < conv.size(); ++i) acc += sigma[i].real() * conv[i].real();
    return acc * rho.grid().cell_volume();
}

struct Densities {
    SpectralField rho;    // |u|^2
    SpectralField power;  // |u|^{p+2}
};

Densities densities(const SpectralField& u_phys, double p) {
    Densities d{SpectralField(u_phys.grid(), Space::physical), SpectralField(u_phys.grid(), Space::physical)};
    for (std::size_t i = 0; i < u_phys.size(); ++i) {
        const double a = std::abs(u_phys[i]);
        d.rho[i] = a * a;
        d.power[i] = std::pow(a, p + 2.0);
    }
    return d;
}

}  // namespace

SpectralField singular_kernel(const Grid& grid, double alpha) {
    SpectralField k(grid, Space::physical);
    const double L = grid.box_length();
    const double a = 0.5 * grid.spacing();
    for (std::size_t i = 0; i < k.size(); ++i) {
        const auto x = grid.position(i);
        double r2 = 0.0;
        for (int d = 0; d < grid.dimension(); ++d) {
            const double m = minimal_image(x[d], L);
            r2 += m * m;
        }
        k[i] = r2 > 0.0 ? std::pow(r2, -0.5 * alpha) : 0.0;
    }
    k[0] = alpha < 3.0 ? 3.0 * std::pow(a, -alpha) / (3.0 - alpha) : 0.0;
    return k;
}

InteractionTerms interaction_terms(const SpectralField& u, double p) {
    require_three_dimensions(u.grid());
    const SpectralField phys = to_space(u, Space::physical);
    const Densities d = densities(phys, p);
    const SpectralField k3 = forward_transform(singular_kernel(u.grid(), 3.0));
    const SpectralField k1 = forward_transform(singular_kernel(u.grid(), 1.0));
    return {kernel_pairing(d.rho, d.rho, k3), kernel_pairing(d.rho, d.power, k1)};
}

InteractionTerms interaction_terms_bruteforce(const SpectralField& u, double p) {
    const Grid& g = u.grid();
    require_three_dimensions(g);
    if (g.size() > kDftOracleMaxPoints)
        throw ConfigError("brute-force Morawetz oracle limited to " + std::to_string(kDftOracleMaxPoints) + " points");
    const SpectralField phys = to_space(u, Space::physical);
    const Densities d = densities(phys, p);
    const double L = g.box_length();
    double cube = 0.0;
    double coulomb = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const auto x = g.position(i);
        for (std::size_t j = 0; j < g.size(); ++j) {
            if (i == j) continue;
            const auto y = g.position(j);
            double r2 = 0.0;
            for (int a = 0; a < 3; ++a) {
                const double m = minimal_image(x[a] - y[a], L);
                r2 += m * m;
            }
            const double r = std::sqrt(r2);
            cube += d.rho[j].real() * d.rho[i].real() / (r2 * r);
            coulomb += d.rho[j].real() * d.power[i].real() / r;
        }
    }
    const double w = g.cell_volume() * g.cell_volume();
    return {cube * w, coulomb * w};
}

InteractionMorawetz interaction_morawetz(const Trajectory& traj, double p) {
    if (traj.snapshots.empty()) throw ParameterError("empty trajectory");
    const Grid& g = traj.config.grid;
    require_three_dimensions(g);
    const SpectralField k3 = forward_transform(singular_kernel(g, 3.0));
    const SpectralField k1 = forward_transform(singular_kernel(g, 1.0));

    std::vector<InteractionTerms> per(traj.snapshots.size());
    for (std::size_t i = 0; i < per.size(); ++i) {
        const Densities d = densities(traj.snapshots[i], p);
        per[i] = {kernel_pairing(d.rho, d.rho, k3), kernel_pairing(d.rho, d.power, k1)};
    }
    InteractionMorawetz out;
    for (std::size_t i = 1; i < per.size(); ++i) {
        const double h = traj.times[i] - traj.times[i - 1];
        out.term_cube += 0.5 * h * (per[i - 1].cube + per[i].cube);
        out.term_coulomb += 0.5 * h * (per[i - 1].coulomb + per[i].coulomb);
    }
    const double half = sup_sobolev(traj, 0.5, true);
    out.rhs_bound = mass(traj.snapshots.front()) * half * half;
    return out;
}

}  // namespace imlab
