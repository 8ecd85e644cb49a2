#pragma once
// Minimal 2D vector used throughout the geometry, field and Monte Carlo code.

#include <cmath>

namespace mfpt {

struct Vec2 {
    double x{0.0};
    double y{0.0};

    constexpr Vec2() = default;
    constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

    constexpr Vec2 operator+(Vec2 r) const { return {x + r.x, y + r.y}; }
    constexpr Vec2 operator-(Vec2 r) const { return {x - r.x, y - r.y}; }
    constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
    friend constexpr Vec2 operator*(double s, Vec2 v) { return {v.x * s, v.y * s}; }
    constexpr Vec2 operator-() const { return {-x, -y}; }
    Vec2& operator+=(Vec2 r) { x += r.x; y += r.y; return *this; }
    Vec2& operator-=(Vec2 r) { x -= r.x; y -= r.y; return *this; }

    constexpr double dot(Vec2 r) const { return x * r.x + y * r.y; }
    constexpr double norm2() const { return x * x + y * y; }
    double norm() const { return std::hypot(x, y); }

    /// Returns {0,0} when the norm is below eps.
    Vec2 normalized(double eps = 0.0) const {
        const double n = norm();
        if (n <= eps) return {0.0, 0.0};
        return {x / n, y / n};
    }

    /// Counter-clockwise perpendicular.
    constexpr Vec2 perp() const { return {-y, x}; }
};

/// Symmetric 2x2 matrix (tensors, covariances).
struct SymMat2 {
    double xx{0.0};
    double xy{0.0};
    double yy{0.0};

    constexpr SymMat2 operator+(SymMat2 r) const { return {xx + r.xx, xy + r.xy, yy + r.yy}; }
    constexpr SymMat2 operator-(SymMat2 r) const { return {xx - r.xx, xy - r.xy, yy - r.yy}; }
    constexpr SymMat2 operator*(double s) const { return {xx * s, xy * s, yy * s}; }
    constexpr double trace() const { return xx + yy; }
    constexpr double det() const { return xx * yy - xy * xy; }

    static constexpr SymMat2 identity() { return {1.0, 0.0, 1.0}; }
    static constexpr SymMat2 outer(Vec2 g) { return {g.x * g.x, g.x * g.y, g.y * g.y}; }
};

/// Specular reflection of direction d across the plane with unit normal n.
inline Vec2 reflect(Vec2 d, Vec2 n) {
    const double p = 2.0 * d.dot(n);
    return {d.x - p * n.x, d.y - p * n.y};
}

/// Canonical sign for an orientation axis: first component non-negative,
/// ties broken toward non-negative second component. Orientations are
/// axes (v and -v equivalent), so one representative is fixed.
inline Vec2 canonical_axis(Vec2 g) {
    if (g.x < 0.0 || (g.x == 0.0 && g.y < 0.0)) return {-g.x, -g.y};
    return g;
}

}  // namespace mfpt
