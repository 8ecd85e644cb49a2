#pragma once
// Uniform rectangular grid and the fields living on it.

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "mfpt/vec2.hpp"

namespace mfpt {

/// Node (j,k) sits at (a + j*dx1, c + k*dx2), j in [0,n1), k in [0,n2).
struct GridSpec {
    int n1{0};
    int n2{0};
    double a{0.0}, b{0.0}, c{0.0}, d{0.0};

    GridSpec() = default;
    GridSpec(int n1_, int n2_, double a_, double b_, double c_, double d_)
        : n1(n1_), n2(n2_), a(a_), b(b_), c(c_), d(d_) {
        if (n1 < 3 || n2 < 3) throw std::invalid_argument("grid: node counts must be >= 3");
        if (!(a < b && c < d)) throw std::invalid_argument("grid: bounds must satisfy a<b, c<d");
    }

    double dx1() const { return (b - a) / (n1 - 1); }
    double dx2() const { return (d - c) / (n2 - 1); }
    double x1(int j) const { return a + j * dx1(); }
    double x2(int k) const { return c + k * dx2(); }
    Vec2 node(int j, int k) const { return {x1(j), x2(k)}; }
    std::size_t size() const { return static_cast<std::size_t>(n1) * n2; }
    /// Flat index; rows of constant x2 are contiguous.
    std::size_t index(int j, int k) const { return static_cast<std::size_t>(k) * n1 + j; }
    bool boundary(int j, int k) const { return j == 0 || j == n1 - 1 || k == 0 || k == n2 - 1; }

    bool same_shape(const GridSpec& o) const {
        return n1 == o.n1 && n2 == o.n2 && a == o.a && b == o.b && c == o.c && d == o.d;
    }
};

struct ScalarField {
    GridSpec grid;
    std::vector<double> value;

    ScalarField() = default;
    explicit ScalarField(const GridSpec& g, double fill = 0.0) : grid(g), value(g.size(), fill) {}

    double& at(int j, int k) { return value[grid.index(j, k)]; }
    double at(int j, int k) const { return value[grid.index(j, k)]; }
};

/// Orientation field: a unit axis per node plus a flag for nodes where the
/// orientation had to fall back to a default (degenerate neighborhoods,
/// feature junctions).
struct DirectionField {
    GridSpec grid;
    std::vector<Vec2> dir;
    std::vector<unsigned char> flagged;

    DirectionField() = default;
    explicit DirectionField(const GridSpec& g)
        : grid(g), dir(g.size(), Vec2{1.0, 0.0}), flagged(g.size(), 0) {}

    Vec2& at(int j, int k) { return dir[grid.index(j, k)]; }
    Vec2 at(int j, int k) const { return dir[grid.index(j, k)]; }
};

/// Pointwise difference between two fields on the same grid.
inline ScalarField difference_map(const ScalarField& a, const ScalarField& b) {
    if (!a.grid.same_shape(b.grid)) throw std::invalid_argument("difference_map: grid mismatch");
    ScalarField out(a.grid);
    for (std::size_t i = 0; i < out.value.size(); ++i) out.value[i] = a.value[i] - b.value[i];
    return out;
}

}  // namespace mfpt
