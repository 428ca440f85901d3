#pragma once

#include "imlab/grid.hpp"

#include <vector>

namespace imlab {

/// F(z) = |z|^p z together with its Wirtinger derivatives
///   F_z = (p+2)/2 |z|^p,   F_zbar = p/2 |z|^p z / zbar   (0 at z = 0),
/// and the pairing w . F'(z) = w F_z + conj(w) F_zbar.
class NonlinearityF {
  public:
    explicit NonlinearityF(double p);

    double p() const noexcept { return p_; }

    cplx value(cplx z) const noexcept;
    cplx d_z(cplx z) const noexcept;
    cplx d_zbar(cplx z) const noexcept;
    cplx pair(cplx w, cplx z) const noexcept { return w * d_z(z) + std::conj(w) * d_zbar(z); }

    /// sqrt(|F_z|^2 + |F_zbar|^2) = |z|^p sqrt(((p+2)/2)^2 + (p/2)^2): the
    /// scalar used whenever a norm of F'(u) is needed.
    double derivative_magnitude(cplx z) const noexcept;

    /// |F'(z) - F'(w)| with the same Euclidean pairing on (F_z, F_zbar).
    double derivative_distance(cplx z, cplx w) const noexcept;

    SpectralField apply(const SpectralField& u_phys) const;
    /// Pointwise derivative_magnitude(u) as a real-valued field.
    SpectralField derivative_magnitude_field(const SpectralField& u_phys) const;
    /// grad(u) . F'(u), one field per axis. grad_u are physical fields.
    std::vector<SpectralField> chain_rule(const std::vector<SpectralField>& grad_u,
                                          const SpectralField& u_phys) const;

  private:
    double p_;
};

/// Fit the smallest C with |F'(z)-F'(w)| <= C |z-w|^a (|z|+|w|)^(p-a),
/// a = min(1, p), over `samples` random pairs in the disc |z|,|w| <= radius.
/// Returns the fitted C.
double fit_holder_constant(const NonlinearityF& f, std::size_t samples, double radius,
                           unsigned long long seed);

}  // namespace imlab
