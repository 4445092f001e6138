#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>

#include "spinphase/types.hpp"

namespace spinphase {

namespace detail {

// Shortest decimal form that round-trips the double exactly.
inline std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    if (res.ec != std::errc{}) throw std::runtime_error("format_double: conversion failed");
    return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& s, const char* who) {
    double x = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw std::runtime_error(std::string(who) + ": bad number '" + s + "'");
    return x;
}

inline int parse_int(const std::string& s, const char* who) {
    int x = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw std::runtime_error(std::string(who) + ": bad integer '" + s + "'");
    return x;
}

}  // namespace detail

// FNV-1a 64-bit over the canonical parameter string; printed as 16 hex
// digits so every emitted file can be traced back to one parameter set.
inline std::string params_digest(const std::string& canonical) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : canonical) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    static const char* hex = "0123456789abcdef";
    for (int i = 15; i >= 0; --i) {
        buf[i] = hex[h & 0xf];
        h >>= 4;
    }
    buf[16] = '\0';
    return std::string(buf, 16);
}

// Grid snapshot with enough header metadata to rehydrate it: dimension,
// kind, time stamp, and the parameter digest. Rows are
//   m,n,theta_n,value
// with m the outer loop and theta_n = pi n / ell the exported angle label.
struct GridFile {
    PhaseGrid grid;
    double time = 0.0;
    std::string digest;
};

inline void write_grid(std::ostream& os, const PhaseGrid& g, double time,
                       const std::string& digest) {
    os << "# n_dim=" << g.dim.n_dim << "\n";
    os << "# kind=" << grid_kind_name(g.kind) << "\n";
    os << "# time=" << detail::format_double(time) << "\n";
    os << "# params=" << digest << "\n";
    os << "m,n,theta_n,value\n";
    for (int m = -g.dim.ell; m <= g.dim.ell; ++m)
        for (int n = -g.dim.ell; n <= g.dim.ell; ++n)
            os << m << "," << n << ","
               << detail::format_double(std::numbers::pi * n / g.dim.ell) << ","
               << detail::format_double(g.at(m, n)) << "\n";
    if (!os) throw std::runtime_error("write_grid: stream failure");
}

inline void write_grid_file(const std::string& path, const PhaseGrid& g, double time,
                            const std::string& digest) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("write_grid_file: cannot open " + path);
    write_grid(os, g, time, digest);
}

inline GridFile read_grid(std::istream& is) {
    auto header_value = [&](const char* key) {
        std::string line;
        if (!std::getline(is, line)) throw std::runtime_error("read_grid: truncated header");
        const std::string prefix = std::string("# ") + key + "=";
        if (line.rfind(prefix, 0) != 0)
            throw std::runtime_error("read_grid: expected header '" + prefix + "', got '" + line + "'");
        return line.substr(prefix.size());
    };
    const int n_dim = detail::parse_int(header_value("n_dim"), "read_grid");
    const GridKind kind = grid_kind_from_name(header_value("kind"));
    const double time = detail::parse_double(header_value("time"), "read_grid");
    const std::string digest = header_value("params");

    std::string line;
    if (!std::getline(is, line) || line != "m,n,theta_n,value")
        throw std::runtime_error("read_grid: missing column header");

    const LatticeDim dim = LatticeDim::of(n_dim);
    PhaseGrid g = PhaseGrid::zero(dim, kind);
    int rows = 0;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string fm, fn, ftheta, fval;
        if (!std::getline(ls, fm, ',') || !std::getline(ls, fn, ',') ||
            !std::getline(ls, ftheta, ',') || !std::getline(ls, fval))
            throw std::runtime_error("read_grid: malformed row '" + line + "'");
        const int m = detail::parse_int(fm, "read_grid");
        const int n = detail::parse_int(fn, "read_grid");
        dim.require_label(m, "m");
        dim.require_label(n, "n");
        g.at(m, n) = detail::parse_double(fval, "read_grid");
        ++rows;
    }
    if (rows != n_dim * n_dim)
        throw std::runtime_error("read_grid: expected " + std::to_string(n_dim * n_dim) +
                                 " rows, got " + std::to_string(rows));
    return {std::move(g), time, digest};
}

inline GridFile read_grid_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("read_grid_file: cannot open " + path);
    return read_grid(is);
}

// 8-bit binary PGM of a grid: the minimum maps to black, the maximum to
// white, everything linear in between. A flat grid renders mid-gray. A
// nonempty digest is embedded as a header comment.
inline void write_pgm(std::ostream& os, const PhaseGrid& g, const std::string& digest = "") {
    const int n = g.dim.n_dim;
    const double lo = g.min_value(), hi = g.max_value();
    os << "P5\n";
    if (!digest.empty()) os << "# params=" << digest << "\n";
    os << n << " " << n << "\n255\n";
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            int pix;
            if (hi == lo) {
                pix = 128;
            } else {
                const double x = (g.values(a, b) - lo) / (hi - lo);
                pix = int(std::floor(x * 255.0 + 0.5));
            }
            os.put(static_cast<char>(static_cast<unsigned char>(pix)));
        }
    }
    if (!os) throw std::runtime_error("write_pgm: stream failure");
}

inline void write_pgm_file(const std::string& path, const PhaseGrid& g,
                           const std::string& digest = "") {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("write_pgm_file: cannot open " + path);
    write_pgm(os, g, digest);
}

}  // namespace spinphase
