#pragma once

#include "fbm/core/field.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fbm {

//
// FBM1 snapshot file:
//
//   FBM1\n
//   <n> <N> <L> <gamma> <beta> <time_tag>\n
//   N^n complex values, each as two little-endian IEEE-754 float64 (re, im),
//   in the row-major FFT-order lattice layout of Grid.
//
struct SnapshotHeader {
    int dim = 1;
    int points = 0;
    double length = 0.0;
    double gamma = 0.0;
    double beta = 0.0;
    double time = 0.0;
};

struct Snapshot {
    SnapshotHeader header;
    SpectralField field;
};

namespace detail {

inline std::uint64_t to_little_endian(std::uint64_t v) {
    if constexpr (std::endian::native == std::endian::big) {
        std::uint64_t r = 0;
        for (int i = 0; i < 8; ++i)
            r |= ((v >> (8 * i)) & 0xffu) << (8 * (7 - i));
        return r;
    }
    return v;
}

inline std::string format_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

} // namespace detail

inline void write_snapshot(std::ostream& os, const SpectralField& f, double gamma, double beta) {
    const auto& g = f.grid();
    os << "FBM1\n"
       << g.dim() << ' ' << g.points() << ' ' << detail::format_double(g.length()) << ' '
       << detail::format_double(gamma) << ' ' << detail::format_double(beta) << ' '
       << detail::format_double(f.time()) << '\n';
    for (const auto& c : f.coeffs()) {
        for (double part : {c.real(), c.imag()}) {
            const auto bits = detail::to_little_endian(std::bit_cast<std::uint64_t>(part));
            char buf[8];
            std::memcpy(buf, &bits, 8);
            os.write(buf, 8);
        }
    }
    if (!os)
        throw error("snapshot: write failed");
}

inline void write_snapshot(const std::filesystem::path& path, const SpectralField& f, double gamma, double beta) {
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw error("snapshot: cannot open " + path.string() + " for writing");
    write_snapshot(os, f, gamma, beta);
}

inline Snapshot read_snapshot(std::istream& is) {
    std::string magic;
    if (!std::getline(is, magic) || magic != "FBM1")
        throw error("snapshot: missing FBM1 magic");
    std::string line;
    if (!std::getline(is, line))
        throw error("snapshot: missing header line");
    std::istringstream hs(line);
    SnapshotHeader h;
    if (!(hs >> h.dim >> h.points >> h.length >> h.gamma >> h.beta >> h.time))
        throw error("snapshot: malformed header '" + line + "'");
    Grid grid(h.dim, h.points, h.length);
    std::vector<Complex> coeffs(grid.size());
    for (auto& c : coeffs) {
        double parts[2];
        for (double& part : parts) {
            char buf[8];
            if (!is.read(buf, 8))
                throw error("snapshot: truncated payload");
            std::uint64_t bits;
            std::memcpy(&bits, buf, 8);
            part = std::bit_cast<double>(detail::to_little_endian(bits));
        }
        c = {parts[0], parts[1]};
    }
    return Snapshot{h, SpectralField(grid, std::move(coeffs), h.time)};
}

inline Snapshot read_snapshot(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw error("snapshot: cannot open " + path.string());
    return read_snapshot(is);
}

} // namespace fbm
