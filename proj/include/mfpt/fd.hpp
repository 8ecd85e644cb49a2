#pragma once
// Finite-difference solvers for the parabolic-limit MFPT equation
//   D(x) : grad grad T = -1.
//
// 2D path: the 9-point stencil on a rectangle with Dirichlet edges,
//   D11 (T[j+1,k] - 2T[j,k] + T[j-1,k]) / dx1^2
// + D12 (T[j+1,k+1] - T[j+1,k-1] - T[j-1,k+1] + T[j-1,k-1]) / (2 dx1 dx2)
// + D22 (T[j,k+1] - 2T[j,k] + T[j,k-1]) / dx2^2  =  -1,
// exact on globally quadratic solutions. Dirichlet rows are eliminated into
// the right-hand side, never kept as identity rows. Curved domains can be
// embedded by masking outside nodes (pinned to 0); that path is first-order
// accurate near the embedded boundary.
//
// 1D path: central differences for the radial equation
//   ((1+alpha)/2) T'' + ((1-alpha)/(2r)) T' = rhs(r),
// tridiagonal Thomas solve, one-sided second-order reflecting conditions,
// ghost-node regularization at the disk origin.

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mfpt/analytic.hpp"
#include "mfpt/anisotropy.hpp"
#include "mfpt/grid.hpp"

namespace mfpt {

/// Stencil weights for the 3x3 neighborhood; w[dj+1][dk+1] multiplies
/// T[j+dj, k+dk]. Rows sum to zero for any tensor (consistency on
/// constants).
inline std::array<std::array<double, 3>, 3> stencil_coefficients(const SymMat2& D, double dx1,
                                                                 double dx2) {
    const double c11 = D.xx / (dx1 * dx1);
    const double c22 = D.yy / (dx2 * dx2);
    const double c12 = D.xy / (2.0 * dx1 * dx2);
    return {{{c12, c11, -c12},                            // dj = -1: (k-1, k, k+1)
             {c22, -2.0 * (c11 + c22), c22},              // dj =  0
             {-c12, c11, c12}}};                          // dj = +1
}

struct SolveFailure : std::runtime_error {
    double residual;
    explicit SolveFailure(const std::string& what, double res)
        : std::runtime_error(what), residual(res) {}
};

/// Assembled discrete system over the interior unknowns.
struct LinearSystem {
    Eigen::SparseMatrix<double, Eigen::RowMajor> matrix;
    Eigen::VectorXd rhs;
    GridSpec grid;
    std::vector<int> unknown_of_node;  ///< -1 for Dirichlet/masked nodes
    std::vector<double> fixed_value;   ///< value at non-unknown nodes
};

/// Assembles the 9-point system on the grid. All four edges are Dirichlet;
/// `boundary_value` provides the data (zero for plain absorbing edges).
/// `active` optionally masks interior nodes (inactive nodes are pinned to 0).
inline LinearSystem assemble_2d(const TensorField& tensor, const GridSpec& grid,
                                const std::function<double(Vec2)>& boundary_value = {},
                                const std::vector<unsigned char>* active = nullptr) {
    if (!tensor.grid.same_shape(grid))
        throw std::invalid_argument("assemble_2d: tensor and grid shapes differ");
    if (active && active->size() != grid.size())
        throw std::invalid_argument("assemble_2d: mask size mismatch");

    LinearSystem sys;
    sys.grid = grid;
    sys.unknown_of_node.assign(grid.size(), -1);
    sys.fixed_value.assign(grid.size(), 0.0);

    int n_unknown = 0;
    for (int k = 0; k < grid.n2; ++k) {
        for (int j = 0; j < grid.n1; ++j) {
            const std::size_t i = grid.index(j, k);
            const bool masked = active && !(*active)[i];
            if (grid.boundary(j, k) || masked) {
                if (!masked && boundary_value) sys.fixed_value[i] = boundary_value(grid.node(j, k));
            } else {
                sys.unknown_of_node[i] = n_unknown++;
            }
        }
    }

    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<std::size_t>(n_unknown) * 9);
    sys.rhs = Eigen::VectorXd::Constant(n_unknown, -1.0);
    const double dx1 = grid.dx1(), dx2 = grid.dx2();
    for (int k = 1; k < grid.n2 - 1; ++k) {
        for (int j = 1; j < grid.n1 - 1; ++j) {
            const int row = sys.unknown_of_node[grid.index(j, k)];
            if (row < 0) continue;
            const auto w = stencil_coefficients(tensor.at(j, k), dx1, dx2);
            for (int dj = -1; dj <= 1; ++dj) {
                for (int dk = -1; dk <= 1; ++dk) {
                    const double coef = w[dj + 1][dk + 1];
                    if (coef == 0.0) continue;
                    const std::size_t ni = grid.index(j + dj, k + dk);
                    const int col = sys.unknown_of_node[ni];
                    if (col >= 0) {
                        trips.emplace_back(row, col, coef);
                    } else {
                        sys.rhs[row] -= coef * sys.fixed_value[ni];
                    }
                }
            }
        }
    }
    sys.matrix.resize(n_unknown, n_unknown);
    sys.matrix.setFromTriplets(trips.begin(), trips.end());
    return sys;
}

enum class SolveMethod { Auto, Direct, Iterative };

/// Solves the assembled system to the requested infinity-norm relative
/// residual. Direct sparse LU for systems up to 512^2 unknowns, BiCGStab
/// with diagonal preconditioning above (iteration cap 1e4). The residual
/// contract holds for either path; violation throws SolveFailure.
inline ScalarField solve_system(const LinearSystem& sys, double tol = 1e-10,
                                SolveMethod method = SolveMethod::Auto) {
    const Eigen::Index n = sys.matrix.rows();
    if (method == SolveMethod::Auto)
        method = n <= 512 * 512 ? SolveMethod::Direct : SolveMethod::Iterative;

    Eigen::VectorXd x;
    if (method == SolveMethod::Direct) {
        Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
        Eigen::SparseMatrix<double> colmajor = sys.matrix;
        lu.compute(colmajor);
        if (lu.info() != Eigen::Success)
            throw SolveFailure("solve_system: sparse LU factorization failed",
                               std::numeric_limits<double>::infinity());
        x = lu.solve(sys.rhs);
    } else {
        Eigen::BiCGSTAB<Eigen::SparseMatrix<double, Eigen::RowMajor>,
                        Eigen::DiagonalPreconditioner<double>>
            krylov;
        krylov.setMaxIterations(10000);
        krylov.setTolerance(tol * 1e-2);
        krylov.compute(sys.matrix);
        x = krylov.solve(sys.rhs);
    }

    const double bnorm = sys.rhs.lpNorm<Eigen::Infinity>();
    const double res = (sys.matrix * x - sys.rhs).lpNorm<Eigen::Infinity>() /
                       (bnorm > 0.0 ? bnorm : 1.0);
    if (!(res <= tol))
        throw SolveFailure("solve_system: residual " + std::to_string(res) +
                               " exceeds tolerance " + std::to_string(tol),
                           res);

    ScalarField out(sys.grid);
    for (std::size_t i = 0; i < sys.unknown_of_node.size(); ++i) {
        const int u = sys.unknown_of_node[i];
        out.value[i] = u >= 0 ? x[u] : sys.fixed_value[i];
    }
    return out;
}

// ---------------------------------------------------------------------------
// Radial solver.

struct RadialSolution {
    std::vector<double> r;
    std::vector<double> T;

    /// Linear interpolation between nodes.
    double at(double radius) const {
        if (radius <= r.front()) return T.front();
        if (radius >= r.back()) return T.back();
        const double h = r[1] - r[0];
        const std::size_t i =
            std::min(r.size() - 2, static_cast<std::size_t>((radius - r.front()) / h));
        const double t = (radius - r[i]) / h;
        return (1.0 - t) * T[i] + t * T[i + 1];
    }
};

namespace detail {

/// Tridiagonal system with optional second-superdiagonal entry in the first
/// row and second-subdiagonal entry in the last (one-sided boundary rows).
/// Those extras are eliminated against the adjacent interior rows, then a
/// Thomas sweep runs.
struct AlmostTridiagonal {
    std::vector<double> sub, diag, sup, rhs;
    double first_extra{0.0};  ///< coefficient of x[2] in row 0
    double last_extra{0.0};   ///< coefficient of x[n-3] in row n-1

    std::vector<double> solve() {
        const std::size_t n = diag.size();
        if (first_extra != 0.0) {
            const double f = first_extra / sup[1];
            diag[0] -= f * sub[1];
            sup[0] -= f * diag[1];
            rhs[0] -= f * rhs[1];
            first_extra = 0.0;
        }
        if (last_extra != 0.0) {
            const double f = last_extra / sub[n - 2];
            diag[n - 1] -= f * sup[n - 2];
            sub[n - 1] -= f * diag[n - 2];
            rhs[n - 1] -= f * rhs[n - 2];
            last_extra = 0.0;
        }
        for (std::size_t i = 1; i < n; ++i) {
            const double m = sub[i] / diag[i - 1];
            diag[i] -= m * sup[i - 1];
            rhs[i] -= m * rhs[i - 1];
        }
        std::vector<double> x(n);
        x[n - 1] = rhs[n - 1] / diag[n - 1];
        for (std::size_t i = n - 1; i-- > 0;) x[i] = (rhs[i] - sup[i] * x[i + 1]) / diag[i];
        return x;
    }
};

}  // namespace detail

/// Central-difference solve of ((1+alpha)/2) T'' + ((1-alpha)/(2r)) T' =
/// rhs(r) on [r_lo, r_hi]. `origin` switches the low end to the disk-origin
/// ghost regularization; otherwise boundary kinds follow the flags.
inline RadialSolution radial_solve_equation(double r_lo, double r_hi, int n,
                                            const std::function<double(double)>& alpha,
                                            const std::function<double(double)>& rhs,
                                            bool lo_absorbing, bool hi_absorbing, bool origin) {
    if (n < 16) throw std::invalid_argument("radial solve: need at least 16 nodes");
    const double h = (r_hi - r_lo) / (n - 1);
    detail::AlmostTridiagonal sys;
    sys.sub.assign(n, 0.0);
    sys.diag.assign(n, 0.0);
    sys.sup.assign(n, 0.0);
    sys.rhs.assign(n, 0.0);

    RadialSolution out;
    out.r.resize(n);
    for (int i = 0; i < n; ++i) out.r[i] = r_lo + i * h;

    for (int i = 1; i < n - 1; ++i) {
        const double r = out.r[i];
        const double a = alpha(r);
        const double c2 = 0.5 * (1.0 + a) / (h * h);
        const double c1 = 0.5 * (1.0 - a) / r / (2.0 * h);
        sys.sub[i] = c2 - c1;
        sys.diag[i] = -2.0 * c2;
        sys.sup[i] = c2 + c1;
        sys.rhs[i] = rhs(r);
    }

    if (origin) {
        // symmetry ghost at r=0: T''(0) ~ 2(T1 - T0)/h^2, isotropic branch
        sys.diag[0] = -2.0 / (h * h);
        sys.sup[0] = 2.0 / (h * h);
        sys.rhs[0] = rhs(0.0);
    } else if (lo_absorbing) {
        sys.diag[0] = 1.0;
        sys.rhs[0] = 0.0;
    } else {
        // one-sided second-order T'(r_lo) = 0: (-3T0 + 4T1 - T2)/(2h) = 0
        sys.diag[0] = -3.0;
        sys.sup[0] = 4.0;
        sys.first_extra = -1.0;
        sys.rhs[0] = 0.0;
    }
    if (hi_absorbing) {
        sys.diag[n - 1] = 1.0;
        sys.rhs[n - 1] = 0.0;
    } else {
        // (3T[n-1] - 4T[n-2] + T[n-3])/(2h) = 0
        sys.diag[n - 1] = 3.0;
        sys.sub[n - 1] = -4.0;
        sys.last_extra = 1.0;
        sys.rhs[n - 1] = 0.0;
    }

    out.T = sys.solve();
    return out;
}

/// MFPT radial solve for a disk/annulus problem; rhs is -1/(2D).
inline RadialSolution radial_solve(const RadialProblem& p, int n) {
    p.validate();
    const double rhs_val = -1.0 / (2.0 * p.D);
    const auto rhs = [rhs_val](double) { return rhs_val; };
    if (p.geometry == RadialProblem::Geometry::Disk)
        return radial_solve_equation(0.0, p.R0, n, p.alpha, rhs, false, true, true);
    const bool lo_abs = p.exit != AnnulusExit::Outer;
    const bool hi_abs = p.exit != AnnulusExit::Inner;
    return radial_solve_equation(p.rho, p.R0, n, p.alpha, rhs, lo_abs, hi_abs, false);
}

}  // namespace mfpt
