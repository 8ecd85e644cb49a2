#pragma once
// Domains with absorbing/reflecting boundary pieces and exact ray-boundary
// intersection, used by the Monte Carlo walker.

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <variant>

#include "mfpt/vec2.hpp"

namespace mfpt {

enum class BoundaryRole { Absorbing, Reflecting };
enum class AnnulusExit { Inner, Outer, Both };

/// A boundary hit along x + v*s: earliest parameter s, the hit point snapped
/// exactly onto the boundary piece, the outward unit normal there, and
/// whether the piece absorbs.
struct BoundaryHit {
    double s;
    Vec2 point;
    Vec2 normal;
    bool absorbing;
};

namespace detail {

/// Earliest s > s_min with |x + v s| = R, or +inf. `inward` selects the
/// root hitting the circle from outside-in (inner circle of an annulus).
inline double circle_hit(Vec2 x, Vec2 v, double radius, double s_min, bool inward) {
    const double a = v.norm2();
    const double b = x.dot(v);
    const double c = x.norm2() - radius * radius;
    const double inf = std::numeric_limits<double>::infinity();
    if (a == 0.0) return inf;
    if (inward) {
        // from the region c >= 0; real roots share the sign of -b
        if (b >= 0.0) return inf;
        const double disc = b * b - a * c;
        if (disc <= 0.0) return inf;
        const double s = c / (-b + std::sqrt(disc));  // smaller root, cancellation-free
        return s > s_min ? s : inf;
    }
    // from the region c <= 0; exactly one root is positive
    const double disc = b * b - a * c;
    const double s = (-b + std::sqrt(std::max(disc, 0.0))) / a;
    return s > s_min ? s : inf;
}

}  // namespace detail

struct DiskDomain {
    double radius;
    BoundaryRole role{BoundaryRole::Absorbing};

    DiskDomain(double r, BoundaryRole ro = BoundaryRole::Absorbing) : radius(r), role(ro) {
        if (!(radius > 0.0)) throw std::invalid_argument("disk: radius must be positive");
        if (role != BoundaryRole::Absorbing)
            throw std::invalid_argument("disk: boundary must be absorbing (MFPT undefined otherwise)");
    }

    bool contains(Vec2 p) const { return p.norm2() <= radius * radius * (1.0 + 1e-12); }

    bool on_absorbing(Vec2 p, double eps) const {
        return std::abs(p.norm() - radius) <= eps;
    }

    std::optional<BoundaryHit> first_hit(Vec2 x, Vec2 v, double s_max, double s_min) const {
        const double s = detail::circle_hit(x, v, radius, s_min, false);
        if (s > s_max) return std::nullopt;
        const Vec2 n = (x + v * s).normalized();
        return BoundaryHit{s, n * radius, n, true};
    }
};

struct AnnulusDomain {
    double rho;
    double radius;
    AnnulusExit exit{AnnulusExit::Both};

    AnnulusDomain(double rho_, double r, AnnulusExit e) : rho(rho_), radius(r), exit(e) {
        if (!(rho > 0.0 && rho < radius))
            throw std::invalid_argument("annulus: need 0 < rho < R0");
    }

    bool inner_absorbing() const { return exit != AnnulusExit::Outer; }
    bool outer_absorbing() const { return exit != AnnulusExit::Inner; }

    bool contains(Vec2 p) const {
        const double r2 = p.norm2();
        return r2 >= rho * rho * (1.0 - 1e-12) && r2 <= radius * radius * (1.0 + 1e-12);
    }

    bool on_absorbing(Vec2 p, double eps) const {
        const double r = p.norm();
        return (inner_absorbing() && std::abs(r - rho) <= eps) ||
               (outer_absorbing() && std::abs(r - radius) <= eps);
    }

    std::optional<BoundaryHit> first_hit(Vec2 x, Vec2 v, double s_max, double s_min) const {
        const double so = detail::circle_hit(x, v, radius, s_min, false);
        const double si = detail::circle_hit(x, v, rho, s_min, true);
        const double s = std::min(so, si);
        if (s > s_max) return std::nullopt;
        const Vec2 n = (x + v * s).normalized();
        if (si < so) return BoundaryHit{s, n * rho, -n, inner_absorbing()};
        return BoundaryHit{s, n * radius, n, outer_absorbing()};
    }
};

struct RectDomain {
    double a, b, c, d;
    // edge order: x=a, x=b, y=c, y=d
    BoundaryRole roles[4]{BoundaryRole::Absorbing, BoundaryRole::Absorbing,
                          BoundaryRole::Absorbing, BoundaryRole::Absorbing};

    RectDomain(double a_, double b_, double c_, double d_) : a(a_), b(b_), c(c_), d(d_) {
        if (!(a < b && c < d)) throw std::invalid_argument("rectangle: need a<b and c<d");
    }

    bool any_absorbing() const {
        for (auto r : roles)
            if (r == BoundaryRole::Absorbing) return true;
        return false;
    }

    bool contains(Vec2 p) const {
        const double ex = 1e-12 * (b - a), ey = 1e-12 * (d - c);
        return p.x >= a - ex && p.x <= b + ex && p.y >= c - ey && p.y <= d + ey;
    }

    bool on_absorbing(Vec2 p, double eps) const {
        if (roles[0] == BoundaryRole::Absorbing && std::abs(p.x - a) <= eps) return true;
        if (roles[1] == BoundaryRole::Absorbing && std::abs(p.x - b) <= eps) return true;
        if (roles[2] == BoundaryRole::Absorbing && std::abs(p.y - c) <= eps) return true;
        if (roles[3] == BoundaryRole::Absorbing && std::abs(p.y - d) <= eps) return true;
        return false;
    }

    std::optional<BoundaryHit> first_hit(Vec2 x, Vec2 v, double s_max, double s_min) const {
        double best = std::numeric_limits<double>::infinity();
        int edge = -1;
        const auto consider = [&](double s, int e) {
            if (s > s_min && s < best) { best = s; edge = e; }
        };
        if (v.x < 0.0) consider((a - x.x) / v.x, 0);
        if (v.x > 0.0) consider((b - x.x) / v.x, 1);
        if (v.y < 0.0) consider((c - x.y) / v.y, 2);
        if (v.y > 0.0) consider((d - x.y) / v.y, 3);
        if (edge < 0 || best > s_max) return std::nullopt;
        static constexpr Vec2 normals[4] = {{-1, 0}, {1, 0}, {0, -1}, {0, 1}};
        Vec2 p = x + v * best;
        switch (edge) {  // snap the hit coordinate exactly onto the edge
            case 0: p.x = a; break;
            case 1: p.x = b; break;
            case 2: p.y = c; break;
            case 3: p.y = d; break;
        }
        return BoundaryHit{best, p, normals[edge], roles[edge] == BoundaryRole::Absorbing};
    }
};

using Domain = std::variant<DiskDomain, AnnulusDomain, RectDomain>;

inline bool domain_contains(const Domain& dom, Vec2 p) {
    return std::visit([&](const auto& d) { return d.contains(p); }, dom);
}

/// Longest chord, used to scale intersection epsilons.
inline double domain_extent(const Domain& dom) {
    if (const auto* disk = std::get_if<DiskDomain>(&dom)) return 2.0 * disk->radius;
    if (const auto* ann = std::get_if<AnnulusDomain>(&dom)) return 2.0 * ann->radius;
    const auto& r = std::get<RectDomain>(dom);
    return std::hypot(r.b - r.a, r.d - r.c);
}

}  // namespace mfpt
