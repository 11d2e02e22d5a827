#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#include "levyfit/errors.hpp"
#include "levyfit/trajectory.hpp"

namespace levyfit {

// Binary trajectory format, little-endian:
//   8 bytes magic "LEVYTRAJ"
//   u16 format version (currently 1)
//   u64 n
//   f64 dt, f64 x0
//   n * f64 values
inline constexpr std::array<char, 8> trajectory_magic = {'L', 'E', 'V', 'Y', 'T', 'R', 'A', 'J'};
inline constexpr std::uint16_t trajectory_format_version = 1;

namespace detail {

inline void put_u64le(std::string& buf, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
inline void put_u16le(std::string& buf, std::uint16_t v) {
    buf.push_back(static_cast<char>(v & 0xff));
    buf.push_back(static_cast<char>((v >> 8) & 0xff));
}
inline void put_f64le(std::string& buf, double d) { put_u64le(buf, std::bit_cast<std::uint64_t>(d)); }

struct ByteReader {
    const unsigned char* p;
    std::size_t len;
    std::size_t pos = 0;

    void need(std::size_t k) const {
        if (pos + k > len) throw format_error("trajectory file truncated");
    }
    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[pos + i]) << (8 * i);
        pos += 8;
        return v;
    }
    std::uint16_t u16() {
        need(2);
        std::uint16_t v = static_cast<std::uint16_t>(p[pos] | (p[pos + 1] << 8));
        pos += 2;
        return v;
    }
    double f64() { return std::bit_cast<double>(u64()); }
};

}  // namespace detail

inline void save_trajectory(const Trajectory& t, const std::filesystem::path& path) {
    if (t.values.size() < 2) throw config_error("save_trajectory: need at least 2 values");
    std::string buf;
    buf.reserve(26 + 8 * t.values.size());
    buf.append(trajectory_magic.data(), trajectory_magic.size());
    detail::put_u16le(buf, trajectory_format_version);
    detail::put_u64le(buf, t.values.size());
    detail::put_f64le(buf, t.dt);
    detail::put_f64le(buf, t.x0);
    for (double v : t.values) detail::put_f64le(buf, v);

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw io_error("cannot open for writing: " + path.string());
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) throw io_error("write failed: " + path.string());
}

inline Trajectory load_trajectory(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open for reading: " + path.string());
    std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw io_error("read failed: " + path.string());

    detail::ByteReader r{reinterpret_cast<const unsigned char*>(buf.data()), buf.size()};
    r.need(trajectory_magic.size());
    if (std::memcmp(buf.data(), trajectory_magic.data(), trajectory_magic.size()) != 0)
        throw format_error("not a trajectory file (bad magic)");
    r.pos = trajectory_magic.size();

    const std::uint16_t version = r.u16();
    if (version != trajectory_format_version)
        throw format_error("unsupported trajectory format version " + std::to_string(version));

    const std::uint64_t n = r.u64();
    if (n < 2) throw format_error("trajectory file holds fewer than 2 values");

    Trajectory t;
    t.dt = r.f64();
    t.x0 = r.f64();
    if (!(t.dt > 0.0) || !std::isfinite(t.dt)) throw format_error("trajectory file has invalid dt");
    r.need(8 * n);
    t.values.resize(n);
    for (std::uint64_t i = 0; i < n; ++i) t.values[i] = r.f64();
    if (r.pos != r.len) throw format_error("trailing bytes after trajectory payload");
    return t;
}

/// CSV export with header `index,value`.
inline void export_trajectory_csv(const Trajectory& t, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw io_error("cannot open for writing: " + path.string());
    out << "index,value\n";
    char line[48];
    for (std::size_t i = 0; i < t.values.size(); ++i) {
        std::snprintf(line, sizeof line, "%zu,%.17g\n", i, t.values[i]);
        out << line;
    }
    if (!out) throw io_error("write failed: " + path.string());
}

}  // namespace levyfit
