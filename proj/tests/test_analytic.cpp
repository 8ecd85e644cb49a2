#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "mfpt/analytic.hpp"
#include "mfpt/fd.hpp"

using namespace mfpt;

namespace {
constexpr double kRho = 0.5, kR0 = 3.0, kD = 0.5;

/// ODE residual (1+a)/(2r) (r T')' - (a/r) T' + 1/(2D) under central
/// differences, evaluated in long double to keep differencing noise below
/// the 1e-6 bar.
template <class F>
long double ode_residual(F T, long double r, long double a, long double D,
                         long double h = 1e-4L) {
    const long double tp = (T(r + h) - T(r - h)) / (2 * h);
    const long double tpp = (T(r + h) - 2 * T(r) + T(r - h)) / (h * h);
    return (1 + a) / 2 * tpp + (1 - a) / (2 * r) * tp + 1 / (2 * D);
}

}  // namespace

TEST_CASE("disk exit time") {
    CHECK(disk_exit_time(3.0, 3.0, 0.5) == 0.0);
    CHECK_THAT(disk_exit_time(0.0, 3.0, 0.5), Catch::Matchers::WithinRel(4.5, 1e-15));
    CHECK_THAT(disk_exit_time(1.5, 3.0, 0.5), Catch::Matchers::WithinRel(3.375, 1e-15));
    CHECK_THROWS_AS(disk_exit_time(3.1, 3.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(disk_exit_time(-0.1, 3.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(disk_exit_time(1.0, 3.0, 0.0), std::invalid_argument);
}

TEST_CASE("annulus inner exit: boundary and isotropic limit") {
    CHECK(annulus_mfpt(kRho, kRho, kR0, kD, 0.37, AnnulusExit::Inner) == 0.0);
    // alpha -> 0 log form: (rho^2-r^2)/(4D) + R0^2/(2D) log(r/rho) at r=1
    const double expect = (0.25 - 1.0) / 2.0 + 9.0 * std::log(2.0);
    CHECK_THAT(annulus_mfpt(1.0, kRho, kR0, kD, 0.0, AnnulusExit::Inner),
               Catch::Matchers::WithinRel(expect, 1e-12));
    // the branch at |alpha| = 1e-8 is continuous: cross-check against 1e-6
    CHECK_THAT(annulus_mfpt(1.0, kRho, kR0, kD, 1e-6, AnnulusExit::Inner),
               Catch::Matchers::WithinRel(expect, 1e-4));
    CHECK_THAT(annulus_mfpt(1.0, kRho, kR0, kD, 1e-9, AnnulusExit::Inner),
               Catch::Matchers::WithinRel(expect, 1e-7));
}

TEST_CASE("annulus argument validation") {
    CHECK_THROWS_AS(annulus_mfpt(0.4, kRho, kR0, kD, 0.0, AnnulusExit::Inner),
                    std::invalid_argument);
    CHECK_THROWS_AS(annulus_mfpt(3.1, kRho, kR0, kD, 0.0, AnnulusExit::Inner),
                    std::invalid_argument);
    CHECK_THROWS_AS(annulus_mfpt(1.0, kRho, kR0, kD, 1.0, AnnulusExit::Inner),
                    std::invalid_argument);
    CHECK_THROWS_AS(annulus_mfpt(1.0, kRho, kR0, kD, -1.0, AnnulusExit::Inner),
                    std::invalid_argument);
}

TEST_CASE("annulus both-exit approaches the circular limit as alpha -> -1") {
    for (double r : {0.75, 1.25, 1.75, 2.5}) {
        const double lim = (kR0 * kR0 - r * r) / (4.0 * kD);
        CHECK_THAT(annulus_mfpt(r, kRho, kR0, kD, -0.999, AnnulusExit::Both),
                   Catch::Matchers::WithinRel(lim, 1e-6));
    }
    CHECK(annulus_mfpt(kRho, kRho, kR0, kD, -0.999, AnnulusExit::Both) == 0.0);
}

TEST_CASE("annulus limit-regime values") {
    CHECK(annulus_limit(kRho, kRho, kR0, kD, RadialLimit::Radial, AnnulusExit::Inner) == 0.0);
    CHECK(std::isinf(
        annulus_limit(1.2, kRho, kR0, kD, RadialLimit::Circular, AnnulusExit::Inner)));
    CHECK(annulus_limit(kRho, kRho, kR0, kD, RadialLimit::Circular, AnnulusExit::Inner) == 0.0);
    // circular + outer: (R0^2 - r^2)/(4D)
    CHECK_THAT(annulus_limit(1.5, kRho, kR0, kD, RadialLimit::Circular, AnnulusExit::Outer),
               Catch::Matchers::WithinRel((9.0 - 2.25) / 2.0, 1e-14));
    // radial limits meet at the exact midpoint
    const double mid = 0.5 * (kRho + kR0);
    CHECK_THAT(annulus_limit(mid, kRho, kR0, kD, RadialLimit::Radial, AnnulusExit::Inner),
               Catch::Matchers::WithinRel(
                   annulus_limit(mid, kRho, kR0, kD, RadialLimit::Radial, AnnulusExit::Outer),
                   1e-13));
}

TEST_CASE("closed forms approach their limit regimes") {
    // alpha -> 1 approaches the radial limit, alpha -> -1 the circular one
    for (auto exit : {AnnulusExit::Inner, AnnulusExit::Outer, AnnulusExit::Both}) {
        for (double r : {0.8, 1.6, 2.4}) {
            const double radial =
                annulus_limit(r, kRho, kR0, kD, RadialLimit::Radial, exit);
            CHECK_THAT(annulus_mfpt(r, kRho, kR0, kD, 0.9999, exit),
                       Catch::Matchers::WithinRel(radial, 1e-3));
        }
    }
    for (double r : {0.8, 1.6, 2.4}) {
        const double circ =
            annulus_limit(r, kRho, kR0, kD, RadialLimit::Circular, AnnulusExit::Outer);
        CHECK_THAT(annulus_mfpt(r, kRho, kR0, kD, -0.9999, AnnulusExit::Outer),
                   Catch::Matchers::WithinRel(circ, 1e-3));
    }
}

TEST_CASE("closed forms satisfy the radial ODE (residual property)") {
    for (long double a : {-0.5L, 0.3L, 0.7L}) {
        for (auto exit : {AnnulusExit::Inner, AnnulusExit::Outer, AnnulusExit::Both}) {
            auto T = [&](long double r) {
                return annulus_mfpt<long double>(r, kRho, kR0, kD, a, exit);
            };
            for (long double r : {1.0L, 1.4L, 1.9L, 2.4L, 2.8L}) {
                const long double res = ode_residual(T, r, a, (long double)kD);
                CHECK(std::abs(double(res)) <= 1e-6);
            }
        }
    }
    // disk form: residual for several alpha (the solution is alpha-free)
    for (long double a : {-0.9L, 0.0L, 0.9L}) {
        auto T = [&](long double r) { return disk_exit_time<long double>(r, kR0, kD); };
        for (long double r : {0.5L, 1.5L, 2.5L})
            CHECK(std::abs(double(ode_residual(T, r, a, (long double)kD))) <= 1e-6);
    }
}

TEST_CASE("boundary conditions hold: T=0 absorbing, T'=0 reflecting") {
    const long double h = 1e-5L;
    for (long double a : {-0.5L, 0.3L, 0.7L}) {
        // inner exit: absorbing at rho, reflecting at R0
        auto Ti = [&](long double r) {
            return annulus_mfpt<long double>(r, kRho, kR0, kD, a, AnnulusExit::Inner);
        };
        CHECK(Ti(kRho) == 0.0L);
        const long double dhi = (3 * Ti(kR0) - 4 * Ti(kR0 - h) + Ti(kR0 - 2 * h)) / (2 * h);
        CHECK(std::abs(double(dhi)) <= 1e-6);
        // outer exit: reflecting at rho, absorbing at R0
        auto To = [&](long double r) {
            return annulus_mfpt<long double>(r, kRho, kR0, kD, a, AnnulusExit::Outer);
        };
        CHECK(To(kR0) == 0.0L);
        const long double dlo = (-3 * To(kRho) + 4 * To(kRho + h) - To(kRho + 2 * h)) / (2 * h);
        CHECK(std::abs(double(dlo)) <= 1e-6);
        // both: absorbing at both ends
        auto Tb = [&](long double r) {
            return annulus_mfpt<long double>(r, kRho, kR0, kD, a, AnnulusExit::Both);
        };
        CHECK(Tb(kRho) == 0.0L);
        CHECK(Tb(kR0) == 0.0L);
    }
}

TEST_CASE("monotonicity in r") {
    for (double a : {-0.5, 0.0, 0.3, 0.7}) {
        double prev_i = -1.0, prev_o = 1e300;
        for (int i = 0; i <= 40; ++i) {
            const double r = kRho + (kR0 - kRho) * i / 40.0;
            const double ti = annulus_mfpt(r, kRho, kR0, kD, a, AnnulusExit::Inner);
            const double to = annulus_mfpt(r, kRho, kR0, kD, a, AnnulusExit::Outer);
            CHECK(ti > prev_i - 1e-12);   // inner exit: increasing
            CHECK(to < prev_o + 1e-12);   // outer exit: decreasing
            prev_i = ti;
            prev_o = to;
        }
    }
}

TEST_CASE("inner-exit MFPT diverges as alpha -> -1 (strictly increasing sequence)") {
    const double r = 1.0;
    double prev = 0.0;
    for (double a : {-0.9, -0.99, -0.999}) {
        const double t = annulus_mfpt(r, kRho, kR0, kD, a, AnnulusExit::Inner);
        CHECK(t > prev);
        prev = t;
    }
}

TEST_CASE("both-exit MFPT is below either single-exit MFPT") {
    for (double a : {-0.5, 0.0, 0.3, 0.7}) {
        for (int i = 0; i <= 25; ++i) {
            const double r = kRho + (kR0 - kRho) * i / 25.0;
            const double tb = annulus_mfpt(r, kRho, kR0, kD, a, AnnulusExit::Both);
            const double ti = annulus_mfpt(r, kRho, kR0, kD, a, AnnulusExit::Inner);
            const double to = annulus_mfpt(r, kRho, kR0, kD, a, AnnulusExit::Outer);
            CHECK(tb <= std::min(ti, to) + 1e-10);
        }
    }
}

TEST_CASE("radial-mode inner exit beats the isotropic mode") {
    for (int i = 0; i <= 12; ++i) {
        const double r = (kRho + 0.05) + (kR0 - kRho - 0.05) * i / 12.0;
        CHECK(annulus_limit(r, kRho, kR0, kD, RadialLimit::Radial, AnnulusExit::Inner) <=
              annulus_limit(r, kRho, kR0, kD, RadialLimit::Isotropic, AnnulusExit::Inner) +
                  1e-12);
    }
}

TEST_CASE("quadrature route matches the closed forms (constant alpha)") {
    for (double a : {-0.5, 0.3, 0.7}) {
        const auto alpha = [a](double) { return a; };
        for (auto exit : {AnnulusExit::Inner, AnnulusExit::Outer, AnnulusExit::Both}) {
            for (int i = 1; i <= 10; ++i) {
                const double r = kRho + (kR0 - kRho) * i / 11.0;
                const double exact = annulus_mfpt(r, kRho, kR0, kD, a, exit);
                const double quad = annulus_mfpt_quadrature(r, kRho, kR0, kD, alpha, exit);
                CHECK_THAT(quad, Catch::Matchers::WithinRel(exact, 1e-8));
            }
        }
    }
}

TEST_CASE("quadrature route on the disk reduces to the closed form") {
    const auto iso = [](double) { return 0.0; };
    for (double r : {0.0, 0.8, 2.0, 2.9}) {
        CHECK_THAT(disk_mfpt_quadrature(r, kR0, kD, iso),
                   Catch::Matchers::WithinRel(disk_exit_time(r, kR0, kD), 1e-9));
    }
    // alpha-independence holds numerically on the quadrature route too
    const auto a7 = [](double) { return 0.7; };
    CHECK_THAT(disk_mfpt_quadrature(1.5, kR0, kD, a7),
               Catch::Matchers::WithinRel(3.375, 1e-8));
}

TEST_CASE("two zero-derivative conditions are rejected as singular") {
    CHECK_THROWS_AS(RadialQuadratureSolver([](double) { return 0.0; }, kD,
                                           RadialBC::reflecting(kRho),
                                           RadialBC::reflecting(kR0), kRho),
                    std::invalid_argument);
}

TEST_CASE("piecewise alpha: T and T' continuous at the coefficient jump") {
    // alpha = 0.5 for r < 1, 0 beyond; annulus inner exit
    const auto alpha = [](double r) { return r < 1.0 ? 0.5 : 0.0; };
    RadialQuadratureSolver solver(alpha, kD, RadialBC::absorbing(kRho),
                                  RadialBC::reflecting(kR0), kRho);

    // continuity of T and T' across r = 1
    const double h = 1e-6;
    CHECK_THAT(solver(1.0 + h), Catch::Matchers::WithinRel(solver(1.0 - h), 1e-4));
    const double dl = solver.derivative(1.0 - 1e-9);
    const double dr = solver.derivative(1.0 + 1e-9);
    CHECK_THAT(dr, Catch::Matchers::WithinRel(dl, 1e-6));

    // fine radial FD oracle agrees with the quadrature solution
    const auto problem = RadialProblem::annulus(kRho, kR0, kD, AnnulusExit::Inner, alpha);
    const RadialSolution fd = radial_solve(problem, 16385);
    double worst = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < fd.r.size(); i += 512) {
        worst = std::max(worst, std::abs(fd.T[i] - solver(fd.r[i])));
        scale = std::max(scale, std::abs(fd.T[i]));
    }
    CHECK(worst / scale < 1e-4);
}
