#include "imlab/grid.hpp"

#include "imlab/errors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

namespace imlab {

Grid::Grid(int dimension, int points_per_axis, double box_length)
    : n_(dimension), m_(points_per_axis), length_(box_length), size_(1) {
    if (n_ < 1 || n_ > 3)
        throw ConfigError("grid dimension must be 1, 2 or 3 (got " + std::to_string(n_) + ")");
    if (m_ < 2 || !std::has_single_bit(static_cast<unsigned>(m_)))
        throw ConfigError("points per axis must be a power of two >= 2 (got " +
                          std::to_string(m_) + ")");
    if (!(length_ > 0.0) || !std::isfinite(length_))
        throw ConfigError("box length must be positive and finite");
    for (int a = 0; a < n_; ++a) size_ *= static_cast<std::size_t>(m_);
}

double Grid::cell_volume() const noexcept { return std::pow(spacing(), n_); }

double Grid::volume() const noexcept { return std::pow(length_, n_); }

std::array<int, 3> Grid::unflatten(std::size_t flat) const noexcept {
    std::array<int, 3> idx{0, 0, 0};
    for (int a = n_ - 1; a >= 0; --a) {
        idx[a] = static_cast<int>(flat % m_);
        flat /= m_;
    }
    return idx;
}

std::size_t Grid::flatten(const std::array<int, 3>& idx) const noexcept {
    std::size_t flat = 0;
    for (int a = 0; a < n_; ++a) flat = flat * m_ + static_cast<std::size_t>(idx[a]);
    return flat;
}

std::array<double, 3> Grid::position(std::size_t flat) const noexcept {
    const auto idx = unflatten(flat);
    std::array<double, 3> x{0.0, 0.0, 0.0};
    for (int a = 0; a < n_; ++a) x[a] = idx[a] * spacing();
    return x;
}

std::array<double, 3> Grid::frequency_vector(std::size_t flat) const noexcept {
    const auto idx = unflatten(flat);
    std::array<double, 3> xi{0.0, 0.0, 0.0};
    for (int a = 0; a < n_; ++a) xi[a] = frequency(idx[a]);
    return xi;
}

std::vector<double> Grid::radial_frequencies() const {
    std::vector<double> axis(m_);
    for (int j = 0; j < m_; ++j) axis[j] = frequency(j) * frequency(j);
    std::vector<double> r(size_);
    for (std::size_t i = 0; i < size_; ++i) {
        const auto idx = unflatten(i);
        double sq = 0.0;
        for (int a = 0; a < n_; ++a) sq += axis[idx[a]];
        r[i] = std::sqrt(sq);
    }
    return r;
}

SpectralField::SpectralField(Grid grid, Space space)
    : grid_(grid), space_(space), values_(grid.size(), cplx{0.0, 0.0}) {}

SpectralField::SpectralField(Grid grid, Space space, std::vector<cplx> values)
    : grid_(grid), space_(space), values_(std::move(values)) {
    if (values_.size() != grid_.size())
        throw ConfigError("field has " + std::to_string(values_.size()) +
                          " values but grid needs " + std::to_string(grid_.size()));
}

void SpectralField::check_compatible(const SpectralField& other) const {
    if (!(grid_ == other.grid_)) throw ConfigError("field arithmetic on different grids");
    if (space_ != other.space_)
        throw ConfigError("field arithmetic between physical and frequency representations");
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
    check_compatible(other);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
    return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
    check_compatible(other);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
    return *this;
}

SpectralField& SpectralField::operator*=(cplx factor) noexcept {
    for (auto& v : values_) v *= factor;
    return *this;
}

SpectralField conj(const SpectralField& f) {
    SpectralField out = f;
    for (auto& v : out.values()) v = std::conj(v);
    return out;
}

double max_abs_difference(const SpectralField& a, const SpectralField& b) {
    if (!(a.grid() == b.grid()) || a.size() != b.size())
        throw ConfigError("max_abs_difference on different grids");
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

}  // namespace imlab
