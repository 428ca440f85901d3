#include "imlab/diagnostics.hpp"

#include "imlab/errors.hpp"
#include "imlab/fft.hpp"
#include "imlab/multiplier.hpp"
#include "imlab/spectral_ops.hpp"
#include "imlab/thresholds.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace imlab {

void MixedNormSpec::validate() const {
    if (!(q >= 1.0) || !(r >= 1.0)) throw ParameterError("mixed norm exponents must be >= 1");
}

double spatial_norm(const SpectralField& u, const MixedNormSpec& spec) {
    SpectralField hat = to_space(u, Space::frequency);
    if (spec.i_operator) hat = i_operator(hat, spec.i_operator->first, spec.i_operator->second);

    if (spec.derivative == MixedNormSpec::Derivative::gradient) {
        const auto grad = gradient(hat);
        SpectralField magnitude(u.grid(), Space::physical);
        for (const auto& g : grad) {
            const SpectralField gp = inverse_transform(g);
            for (std::size_t i = 0; i < gp.size(); ++i) magnitude[i] += std::norm(gp[i]);
        }
        for (auto& v : magnitude.values()) v = std::sqrt(v.real());
        return lp_norm(magnitude, spec.r);
    }
    if (spec.k != 0.0 || spec.derivative == MixedNormSpec::Derivative::bracket) {
        const MultiplierSymbol sym = spec.derivative == MixedNormSpec::Derivative::bracket
                                         ? MultiplierSymbol::bracket(spec.k)
                                         : MultiplierSymbol::fractional(spec.k);
        hat = apply_multiplier(hat, sym);
    }
    return lp_norm(hat, spec.r);
}

double mixed_norm(const Trajectory& traj, const MixedNormSpec& spec) {
    spec.validate();
    if (traj.snapshots.size() < 2) throw ParameterError("mixed_norm needs at least two snapshots");
    std::vector<double> values(traj.snapshots.size());
    for (std::size_t i = 0; i < values.size(); ++i) values[i] = spatial_norm(traj.snapshots[i], spec);

    if (std::isinf(spec.q)) return *std::max_element(values.begin(), values.end());
    double acc = 0.0;
    for (std::size_t i = 1; i < values.size(); ++i) {
        const double h = traj.times[i] - traj.times[i - 1];
        acc += 0.5 * h * (std::pow(values[i - 1], spec.q) + std::pow(values[i], spec.q));
    }
    return std::pow(acc, 1.0 / spec.q);
}

std::pair<double, double> morawetz_exponents(int n, double sigma) {
    if (n < 3) throw ParameterError("Morawetz norm needs n >= 3");
    if (!(sigma > 0.0)) throw ParameterError("Morawetz norm needs sigma > 0");
    const double m = n - 3.0 + 4.0 * sigma;
    return {m / sigma, 2.0 * m / (n - 3.0 + 2.0 * sigma)};
}

double morawetz_norm(const Trajectory& traj, double sigma) {
    const auto [q, r] = morawetz_exponents(traj.config.grid.dimension(), sigma);
    MixedNormSpec spec;
    spec.q = q;
    spec.r = r;
    return mixed_norm(traj, spec);
}

double negative_deriv_morawetz(const Trajectory& traj) {
    const int n = traj.config.grid.dimension();
    if (n < 3) throw ParameterError("negative_deriv_morawetz needs n >= 3");
    MixedNormSpec spec;
    spec.q = 4.0;
    spec.r = 4.0;
    spec.k = -(n - 3.0) / 4.0;
    return mixed_norm(traj, spec);
}

double sup_sobolev(const Trajectory& traj, double s, bool homogeneous) {
    double m = 0.0;
    for (const auto& u : traj.snapshots) m = std::max(m, sobolev_norm(u, s, homogeneous));
    return m;
}

double morawetz_interpolation_bound(const Trajectory& traj, double sigma) {
    const int n = traj.config.grid.dimension();
    const double m = n - 3.0 + 4.0 * sigma;
    const double l2 = std::sqrt(mass(traj.snapshots.front()));
    const double half = sup_sobolev(traj, 0.5, true);
    const double sig = sup_sobolev(traj, sigma, true);
    return std::pow(l2 * half, 2.0 * sigma / m) * std::pow(sig, (n - 3.0) / m);
}

double strichartz_sup(const Trajectory& traj, const std::vector<std::pair<double, double>>& pairs,
                      MixedNormSpec base) {
    const int n = traj.config.grid.dimension();
    for (const auto& [q, r] : pairs) {
        if (!admissible_pair_check(q, r, n)) {
            std::ostringstream msg;
            msg << "pair (" << q << ", " << r << ") is not admissible: need 2/q + n/r = n/2 with n="
                << n << ", 2 <= q, r <= inf";
            throw ParameterError(msg.str());
        }
    }
    double best = 0.0;
    for (const auto& [q, r] : pairs) {
        base.q = q;
        base.r = r;
        best = std::max(best, mixed_norm(traj, base));
    }
    return best;
}

double z_norm(const Trajectory& traj, const std::vector<std::pair<double, double>>& pairs,
              double N, double s) {
    MixedNormSpec spec;
    spec.derivative = MixedNormSpec::Derivative::gradient;
    spec.i_operator = std::make_pair(N, s);
    return strichartz_sup(traj, pairs, spec);
}

double scattering_cauchy(const Trajectory& traj, double s, double t, double tau) {
    const std::size_t i = traj.index_of_time(t);
    const std::size_t j = traj.index_of_time(tau);
    if (i == j) return 0.0;
    const SpectralField vt = free_propagator(forward_transform(traj.snapshots[i]), -traj.times[i]);
    const SpectralField vtau = free_propagator(forward_transform(traj.snapshots[j]), -traj.times[j]);
    return sobolev_norm(vt - vtau, s, false);
}

}  // namespace imlab
