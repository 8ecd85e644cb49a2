#pragma once
// Linear features as segment sets: nearest-feature distance and orientation
// queries, both pointwise (Monte Carlo) and gridded (solver fields).

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "mfpt/grid.hpp"
#include "mfpt/vec2.hpp"

namespace mfpt {

struct Segment {
    Vec2 p;
    Vec2 q;

    void validate() const {
        if (!(std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(q.x) && std::isfinite(q.y)))
            throw std::invalid_argument("segment: endpoints must be finite");
        if (p.x == q.x && p.y == q.y)
            throw std::invalid_argument("segment: endpoints must be distinct");
    }

    /// Unit axis in the canonical sign convention.
    Vec2 axis() const { return canonical_axis((q - p).normalized()); }
};

using SegmentSet = std::vector<Segment>;

inline void validate_segments(const SegmentSet& segs) {
    if (segs.empty()) throw std::invalid_argument("segment set must be non-empty");
    for (const auto& s : segs) s.validate();
}

struct NearestFeature {
    double distance;
    Vec2 axis;     ///< orientation of the arg-min segment (canonical sign)
    int segment;   ///< arg-min index; equidistant features resolve to the lowest index
};

/// Distance and orientation of the nearest segment to a point.
inline NearestFeature nearest_segment(const SegmentSet& segs, Vec2 x) {
    validate_segments(segs);
    double best_d2 = std::numeric_limits<double>::infinity();
    int best = -1;
    for (int i = 0; i < static_cast<int>(segs.size()); ++i) {
        const Vec2 v = segs[i].q - segs[i].p;
        double t = (x - segs[i].p).dot(v) / v.norm2();
        t = t < 0.0 ? 0.0 : (t > 1.0 ? 1.0 : t);
        const Vec2 closest = segs[i].p + v * t;
        const double d2 = (x - closest).norm2();
        if (d2 < best_d2) {  // strict: ties keep the lowest index
            best_d2 = d2;
            best = i;
        }
    }
    return {std::sqrt(best_d2), segs[best].axis(), best};
}

/// Gridded distance / orientation fields from a segment set.
inline std::pair<ScalarField, DirectionField> distance_direction_from_segments(
    const GridSpec& grid, const SegmentSet& segs) {
    validate_segments(segs);
    ScalarField dist(grid);
    DirectionField dirs(grid);
    for (int k = 0; k < grid.n2; ++k) {
        for (int j = 0; j < grid.n1; ++j) {
            const NearestFeature nf = nearest_segment(segs, grid.node(j, k));
            dist.at(j, k) = nf.distance;
            dirs.at(j, k) = nf.axis;
        }
    }
    return {std::move(dist), std::move(dirs)};
}

}  // namespace mfpt
