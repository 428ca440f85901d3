#include "imlab/snapshot_io.hpp"

#include "imlab/errors.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

namespace imlab {
namespace {

template <class T>
void put_le(std::ostream& out, T value) {
    std::array<char, sizeof(T)> bytes;
    std::memcpy(bytes.data(), &value, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
    out.write(bytes.data(), bytes.size());
}

template <class T>
T get_le(std::istream& in) {
    std::array<char, sizeof(T)> bytes;
    if (!in.read(bytes.data(), bytes.size())) throw ConfigError("truncated snapshot stream");
    if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
    T value;
    std::memcpy(&value, bytes.data(), sizeof(T));
    return value;
}

}  // namespace

void write_snapshot(std::ostream& out, const SpectralField& field) {
    const Grid& g = field.grid();
    out.write("IMLB", 4);
    put_le<std::uint32_t>(out, kSnapshotVersion);
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(g.dimension()));
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(g.points_per_axis()));
    put_le<double>(out, g.box_length());
    put_le<std::uint8_t>(out, field.space() == Space::physical ? 0 : 1);
    for (const cplx& v : field.values()) {
        put_le<double>(out, v.real());
        put_le<double>(out, v.imag());
    }
    if (!out) throw ConfigError("failed writing snapshot");
}

SpectralField read_snapshot(std::istream& in) {
    char magic[4];
    if (!in.read(magic, 4) || std::memcmp(magic, "IMLB", 4) != 0)
        throw ConfigError("not an IMLB snapshot (bad magic)");
    const auto version = get_le<std::uint32_t>(in);
    if (version != kSnapshotVersion)
        throw ConfigError("unsupported snapshot version " + std::to_string(version));
    const auto n = get_le<std::uint32_t>(in);
    const auto m = get_le<std::uint32_t>(in);
    const auto length = get_le<double>(in);
    const auto tag = get_le<std::uint8_t>(in);
    if (tag > 1) throw ConfigError("invalid space tag in snapshot");

    Grid g(static_cast<int>(n), static_cast<int>(m), length);
    std::vector<cplx> values(g.size());
    for (auto& v : values) {
        const double re = get_le<double>(in);
        const double im = get_le<double>(in);
        v = {re, im};
    }
    return {g, tag == 0 ? Space::physical : Space::frequency, std::move(values)};
}

void save_snapshot(const std::filesystem::path& path, const SpectralField& field) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open " + path.string() + " for writing");
    write_snapshot(out, field);
}

SpectralField load_snapshot(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open " + path.string());
    return read_snapshot(in);
}

}  // namespace imlab
