#include "imlab/commutator.hpp"

#include "imlab/errors.hpp"
#include "imlab/fft.hpp"
#include "imlab/functionals.hpp"
#include "imlab/multiplier.hpp"
#include "imlab/nonlinearity.hpp"
#include "imlab/spectral_ops.hpp"

#include <cmath>
#include <sstream>
#include <vector>

namespace imlab {
namespace {

double reciprocal(double r) { return std::isinf(r) ? 0.0 : 1.0 / r; }

void validate(double s, double nu, double r, double r1, double r2) {
    if (!(r >= 1.0 && r1 >= 1.0 && r2 >= 1.0))
        throw ParameterError("commutator exponents must be >= 1");
    if (std::abs(reciprocal(r) - reciprocal(r1) - reciprocal(r2)) > 1e-12) {
        std::ostringstream msg;
        msg << "commutator exponents need 1/r = 1/r1 + 1/r2, got r=" << r << ", r1=" << r1 << ", r2=" << r2;
        throw ParameterError(msg.str());
    }
    if (!(nu > 0.0 && nu < s)) throw ParameterError("commutator needs 0 < nu < s");
}

SpectralField magnitude(const std::vector<SpectralField>& components) {
    SpectralField m(components.front().grid(), Space::physical);
    for (const auto& c : components)
        for (std::size_t i = 0; i < c.size(); ++i) m[i] += std::norm(c[i]);
    for (auto& v : m.values()) v = std::sqrt(v.real());
    return m;
}

std::vector<SpectralField> physical_gradient(const SpectralField& hat) {
    std::vector<SpectralField> out;
    for (const auto& g : gradient(hat)) out.push_back(inverse_transform(g));
    return out;
}

}  // namespace

CommutatorDeficit commutator_deficit(const SpectralField& f, const SpectralField& g, double N, double s,
                                     double nu, double r, double r1, double r2) {
    validate(s, nu, r, r1, r2);
    if (f.grid() != g.grid()) throw ConfigError("commutator fields live on different grids");
    const SpectralField fp = to_space(f, Space::physical);
    const SpectralField gp = to_space(g, Space::physical);
    const SpectralField If = to_space(i_operator(fp, N, s), Space::physical);

    SpectralField fg = fp;
    SpectralField If_g = If;
    for (std::size_t i = 0; i < fg.size(); ++i) {
        fg[i] *= gp[i];
        If_g[i] *= gp[i];
    }
    const SpectralField diff = to_space(i_operator(fg, N, s), Space::physical) - If_g;

    const SpectralField smooth_g = apply_multiplier(gp, MultiplierSymbol::bracket(1.0 - s + nu));
    return {lp_norm(diff, r), lp_norm(If, r1) * lp_norm(smooth_g, r2), false};
}

CommutatorDeficit gradient_commutator_deficit(const SpectralField& u, double N, double s, double nu,
                                              double p, double r, double r1, double r2) {
    validate(s, nu, r, r1, r2);
    const NonlinearityF F(p);
    const SpectralField up = to_space(u, Space::physical);

    const auto grad_IF = physical_gradient(i_operator(forward_transform(F.apply(up)), N, s));
    const auto grad_Iu = physical_gradient(i_operator(forward_transform(up), N, s));
    const auto chain = F.chain_rule(grad_Iu, up);

    std::vector<SpectralField> diff;
    for (std::size_t a = 0; a < grad_IF.size(); ++a) diff.push_back(grad_IF[a] - chain[a]);

    const SpectralField smooth_dF =
        apply_multiplier(F.derivative_magnitude_field(up), MultiplierSymbol::bracket(1.0 - s + nu));
    return {lp_norm(magnitude(diff), r), lp_norm(magnitude(grad_Iu), r1) * lp_norm(smooth_dF, r2), p < 1.0};
}

}  // namespace imlab
