#pragma once
// File formats: CSV fields/estimates/trajectories, segment CSV input,
// 16-bit PGM heatmap export with min/max sidecar. Every output starts with
// a comment line carrying the tool version and the scenario hash.

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mfpt/grid.hpp"
#include "mfpt/mc.hpp"
#include "mfpt/segments.hpp"
#include "mfpt/version.hpp"

namespace mfpt {

/// FNV-1a 64-bit over a byte string.
inline std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

/// Reproducibility metadata carried into every output header line.
struct OutputMeta {
    std::string scenario_hash{"none"};
    std::string extra;  ///< e.g. "D=0.5"

    std::string header_line() const {
        std::string line = "# mfpt ";
        line += kVersion;
        line += " scenario=";
        line += scenario_hash;
        if (!extra.empty()) {
            line += ' ';
            line += extra;
        }
        line += '\n';
        return line;
    }
};

namespace detail {

/// Shortest-round-trip decimal formatting; "inf" for infinities.
inline std::string fmt(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::ofstream open_out(const std::string& path, bool binary = false) {
    std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    return out;
}

}  // namespace detail

inline void write_scalar_csv(const std::string& path, const ScalarField& f,
                             const OutputMeta& meta, const char* value_name = "value") {
    auto out = detail::open_out(path);
    out << meta.header_line() << "x1,x2," << value_name << "\n";
    for (int k = 0; k < f.grid.n2; ++k)
        for (int j = 0; j < f.grid.n1; ++j)
            out << detail::fmt(f.grid.x1(j)) << ',' << detail::fmt(f.grid.x2(k)) << ','
                << detail::fmt(f.at(j, k)) << "\n";
}

inline void write_direction_csv(const std::string& path, const DirectionField& f,
                                const OutputMeta& meta) {
    auto out = detail::open_out(path);
    out << meta.header_line() << "x1,x2,g1,g2\n";
    for (int k = 0; k < f.grid.n2; ++k)
        for (int j = 0; j < f.grid.n1; ++j)
            out << detail::fmt(f.grid.x1(j)) << ',' << detail::fmt(f.grid.x2(k)) << ','
                << detail::fmt(f.at(j, k).x) << ',' << detail::fmt(f.at(j, k).y) << "\n";
}

inline void write_radial_csv(const std::string& path, const std::vector<double>& r,
                             const std::vector<double>& T, const OutputMeta& meta) {
    auto out = detail::open_out(path);
    out << meta.header_line() << "r,T\n";
    for (std::size_t i = 0; i < r.size(); ++i)
        out << detail::fmt(r[i]) << ',' << detail::fmt(T[i]) << "\n";
}

inline void write_estimates_csv(const std::string& path, const std::vector<Start>& starts,
                                const std::vector<FptEstimate>& ests, const OutputMeta& meta) {
    auto out = detail::open_out(path);
    int n_moments = 0;
    for (const auto& e : ests) n_moments = std::max<int>(n_moments, e.moments.size());
    out << meta.header_line() << "x1,x2,theta1,stderr";
    for (int m = 2; m <= n_moments; ++m) out << ",theta" << m;
    out << ",capped_count\n";
    for (std::size_t i = 0; i < ests.size(); ++i) {
        out << detail::fmt(starts[i].x.x) << ',' << detail::fmt(starts[i].x.y) << ','
            << detail::fmt(ests[i].mean) << ',' << detail::fmt(ests[i].stderr_of_mean);
        for (int m = 2; m <= n_moments; ++m)
            out << ',' << detail::fmt(m <= static_cast<int>(ests[i].moments.size())
                                          ? ests[i].moments[m - 1]
                                          : 0.0);
        out << ',' << ests[i].capped << "\n";
    }
}

/// CSV `run_id,t,x1,x2`, one row per event point. Empty run list produces a
/// header-only file.
inline void write_trajectories_csv(const std::string& path, const std::vector<Trajectory>& runs,
                                   const OutputMeta& meta) {
    auto out = detail::open_out(path);
    out << meta.header_line() << "run_id,t,x1,x2\n";
    for (std::size_t id = 0; id < runs.size(); ++id)
        for (const auto& p : runs[id])
            out << id << ',' << detail::fmt(p.t) << ',' << detail::fmt(p.x.x) << ','
                << detail::fmt(p.x.y) << "\n";
}

/// Segment CSV: `x1a,x2a,x1b,x2b` per line, optional header line.
inline SegmentSet read_segments_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open segment file: " + path);
    SegmentSet segs;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        double v[4];
        char comma;
        bool ok = true;
        for (int i = 0; i < 4 && ok; ++i) {
            if (!(ss >> v[i])) ok = false;
            if (i < 3 && ok && !(ss >> comma && comma == ',')) ok = false;
        }
        if (!ok) {
            if (first) {  // header row
                first = false;
                continue;
            }
            throw std::runtime_error("malformed segment line in " + path + ": " + line);
        }
        first = false;
        segs.push_back({{v[0], v[1]}, {v[2], v[3]}});
    }
    validate_segments(segs);
    return segs;
}

/// 16-bit big-endian PGM heatmap: values mapped linearly onto [0,65535] by
/// the field min/max, which go to a `<path>.txt` sidecar.
inline void write_pgm16_heatmap(const std::string& path, const ScalarField& f,
                                const OutputMeta& meta) {
    double lo = f.value.empty() ? 0.0 : f.value[0];
    double hi = lo;
    for (double v : f.value) {
        if (!std::isfinite(v)) throw std::invalid_argument("pgm heatmap: field must be finite");
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const double span = hi > lo ? hi - lo : 1.0;
    auto out = detail::open_out(path, true);
    out << "P5\n"
        << "# mfpt " << kVersion << " scenario=" << meta.scenario_hash << "\n"
        << f.grid.n1 << ' ' << f.grid.n2 << "\n65535\n";
    // image rows run top-down; the grid's x2 axis runs bottom-up
    for (int k = f.grid.n2 - 1; k >= 0; --k) {
        for (int j = 0; j < f.grid.n1; ++j) {
            const double t = (f.at(j, k) - lo) / span;
            const auto q = static_cast<std::uint16_t>(std::lround(t * 65535.0));
            const unsigned char bytes[2] = {static_cast<unsigned char>(q >> 8),
                                            static_cast<unsigned char>(q & 0xff)};
            out.write(reinterpret_cast<const char*>(bytes), 2);
        }
    }
    auto side = detail::open_out(path + ".txt");
    side << meta.header_line() << "min=" << detail::fmt(lo) << "\nmax=" << detail::fmt(hi)
         << "\n";
}

inline void write_survival_csv(const std::string& path, const SurvivalCurve& c,
                               const OutputMeta& meta) {
    auto out = detail::open_out(path);
    out << meta.header_line() << "t,S\n";
    for (std::size_t i = 0; i < c.t.size(); ++i)
        out << detail::fmt(c.t[i]) << ',' << detail::fmt(c.survival[i]) << "\n";
}

}  // namespace mfpt
