#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace imlab {

using cplx = std::complex<double>;

/// Periodic box [0, L)^n sampled by M points per axis.
///
/// Points sit at x_j = j * dx (j = 0..M-1, origin at index 0). Frequencies use
/// the cycles-per-length convention: along each axis the bin with FFT index j
/// carries xi = k / L with k = j for j < M/2 and k = j - M otherwise, so the
/// per-axis resolvable band is [-M/(2L), M/(2L)).
class Grid {
  public:
    Grid(int dimension, int points_per_axis, double box_length);

    int dimension() const noexcept { return n_; }
    int points_per_axis() const noexcept { return m_; }
    double box_length() const noexcept { return length_; }
    double spacing() const noexcept { return length_ / m_; }
    std::size_t size() const noexcept { return size_; }

    /// Volume element dx^n of the physical quadrature.
    double cell_volume() const noexcept;
    /// L^n.
    double volume() const noexcept;
    /// Largest |xi| per axis, M / (2L).
    double max_axis_frequency() const noexcept { return 0.5 * m_ / length_; }

    /// Signed integer wavenumber for FFT index j along one axis.
    int wavenumber(int j) const noexcept { return j < m_ / 2 ? j : j - m_; }
    double frequency(int j) const noexcept { return wavenumber(j) / length_; }

    /// Row-major multi-index (axis 0 slowest); unused trailing entries are 0.
    std::array<int, 3> unflatten(std::size_t flat) const noexcept;
    std::size_t flatten(const std::array<int, 3>& idx) const noexcept;

    /// Physical coordinate of a grid point along each axis.
    std::array<double, 3> position(std::size_t flat) const noexcept;
    /// Frequency vector of a spectral bin.
    std::array<double, 3> frequency_vector(std::size_t flat) const noexcept;

    /// |xi| for every spectral bin, in storage order.
    std::vector<double> radial_frequencies() const;

    bool operator==(const Grid& other) const noexcept = default;

  private:
    int n_;
    int m_;
    double length_;
    std::size_t size_;
};

enum class Space { physical, frequency };

/// Complex samples on a grid, either point values or spectral coefficients.
///
/// Spectral coefficients approximate the continuous transform
/// f^(xi) = \int e^{-2 pi i x.xi} f(x) dx, so with this normalization
///   sum |f_j|^2 dx^n  ==  sum |f^_k|^2 / L^n      (Parseval).
class SpectralField {
  public:
    SpectralField(Grid grid, Space space);
    SpectralField(Grid grid, Space space, std::vector<cplx> values);

    const Grid& grid() const noexcept { return grid_; }
    Space space() const noexcept { return space_; }
    std::size_t size() const noexcept { return values_.size(); }

    std::span<cplx> values() noexcept { return values_; }
    std::span<const cplx> values() const noexcept { return values_; }
    cplx& operator[](std::size_t i) noexcept { return values_[i]; }
    const cplx& operator[](std::size_t i) const noexcept { return values_[i]; }

    SpectralField& operator+=(const SpectralField& other);
    SpectralField& operator-=(const SpectralField& other);
    SpectralField& operator*=(cplx factor) noexcept;

    friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
    friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
    friend SpectralField operator*(cplx c, SpectralField a) { return a *= c; }

  private:
    void check_compatible(const SpectralField& other) const;

    Grid grid_;
    Space space_;
    std::vector<cplx> values_;
};

/// Pointwise complex conjugate, in whatever space the field is stored.
/// (In frequency space this conjugates coefficients, which is *not* the
/// transform of the conjugated function; callers use it on physical fields.)
SpectralField conj(const SpectralField& f);

double max_abs_difference(const SpectralField& a, const SpectralField& b);

}  // namespace imlab
