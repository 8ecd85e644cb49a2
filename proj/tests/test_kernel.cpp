#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "mfpt/anisotropy.hpp"
#include "mfpt/kernel.hpp"
#include "oracles.hpp"

using namespace mfpt;

namespace {

DirectionalKernel bimodal(double k, Vec2 g = {1.0, 0.0}, double sigma = 1.0) {
    return {KernelType::BimodalVonMises, k, g, sigma};
}

/// Quadrature moments over V = sigma*S^1: dv = sigma dtheta.
KernelMoments quadrature_moments(const DirectionalKernel& kern) {
    const double s = kern.sigma;
    auto q = [&](double th) { return density(kern, th); };
    KernelMoments m;
    m.mean.x = oracles::periodic_integral([&](double th) { return s * std::cos(th) * q(th) * s; });
    m.mean.y = oracles::periodic_integral([&](double th) { return s * std::sin(th) * q(th) * s; });
    auto cov = [&](auto f) {
        return oracles::periodic_integral([&](double th) {
            const double vx = s * std::cos(th) - m.mean.x;
            const double vy = s * std::sin(th) - m.mean.y;
            return f(vx, vy) * q(th) * s;
        });
    };
    m.cov.xx = cov([](double vx, double) { return vx * vx; });
    m.cov.xy = cov([](double vx, double vy) { return vx * vy; });
    m.cov.yy = cov([](double, double vy) { return vy * vy; });
    return m;
}

}  // namespace

TEST_CASE("densities integrate to one over V") {
    for (double k : {0.0, 0.5, 1.0, 5.0, 25.0, 100.0}) {
        for (auto type : {KernelType::Uniform, KernelType::VonMises,
                          KernelType::BimodalVonMises}) {
            const DirectionalKernel kern{type, k, {0.6, 0.8}, 2.0};
            const double total = oracles::periodic_integral(
                [&](double th) { return density(kern, th) * kern.sigma; });
            CHECK_THAT(total, Catch::Matchers::WithinAbs(1.0, 1e-10));
        }
    }
}

TEST_CASE("uniform and k=0 bimodal densities are flat") {
    const double sigma = 2.5;
    const double expect = 1.0 / (2.0 * M_PI * sigma);
    for (double th : {0.0, 0.3, 2.0, 5.5}) {
        CHECK_THAT(density({KernelType::Uniform, 0.0, {1, 0}, sigma}, th),
                   Catch::Matchers::WithinRel(expect, 1e-14));
        CHECK_THAT(density(bimodal(0.0, {1, 0}, sigma), th),
                   Catch::Matchers::WithinRel(expect, 1e-14));
    }
}

TEST_CASE("bimodal density ratio cosh(k) at k=2") {
    const auto kern = bimodal(2.0);
    const double ratio = density(kern, 0.0) / density(kern, M_PI / 2.0);
    CHECK_THAT(ratio, Catch::Matchers::WithinRel(std::cosh(2.0), 1e-12));
}

TEST_CASE("bimodal symmetry q(v) = q(-v) exactly") {
    const auto kern = bimodal(7.3, Vec2{0.28, 0.96});
    for (double th = 0.0; th < 2.0 * M_PI; th += 0.17) {
        const Vec2 u{std::cos(th), std::sin(th)};
        CHECK(density_direction(kern, u) == density_direction(kern, -u));
        // angle form agrees up to trig rounding of theta + pi
        CHECK_THAT(density(kern, th + M_PI),
                   Catch::Matchers::WithinRel(density(kern, th), 1e-12));
    }
}

TEST_CASE("strict alignment rejects density queries") {
    CHECK_THROWS_AS(density({KernelType::StrictAlignment, 0.0, {1, 0}, 1.0}, 0.3),
                    std::domain_error);
}

TEST_CASE("closed-form moments match quadrature") {
    for (double k : {0.0, 0.5, 1.0, 5.0, 25.0}) {
        for (auto type : {KernelType::VonMises, KernelType::BimodalVonMises}) {
            const DirectionalKernel kern{type, k, {0.6, 0.8}, 1.3};
            const KernelMoments exact = kernel_moments(kern);
            const KernelMoments quad = quadrature_moments(kern);
            CHECK_THAT(exact.mean.x, Catch::Matchers::WithinAbs(quad.mean.x, 1e-8));
            CHECK_THAT(exact.mean.y, Catch::Matchers::WithinAbs(quad.mean.y, 1e-8));
            CHECK_THAT(exact.cov.xx, Catch::Matchers::WithinAbs(quad.cov.xx, 1e-8));
            CHECK_THAT(exact.cov.xy, Catch::Matchers::WithinAbs(quad.cov.xy, 1e-8));
            CHECK_THAT(exact.cov.yy, Catch::Matchers::WithinAbs(quad.cov.yy, 1e-8));
        }
    }
}

TEST_CASE("bimodal moment special cases") {
    const double s = 1.7, s2 = s * s;
    // k = 0: V = (sigma^2/2) I
    const KernelMoments m0 = kernel_moments(bimodal(0.0, {1, 0}, s));
    CHECK(m0.mean.x == 0.0);
    CHECK_THAT(m0.cov.xx, Catch::Matchers::WithinRel(0.5 * s2, 1e-14));
    CHECK_THAT(m0.cov.yy, Catch::Matchers::WithinRel(0.5 * s2, 1e-14));
    CHECK(m0.cov.xy == 0.0);
    // k -> infinity approaches sigma^2 g g^T
    const KernelMoments minf = kernel_moments(bimodal(1e3, {1, 0}, s));
    CHECK_THAT(minf.cov.xx, Catch::Matchers::WithinRel(s2, 1e-2));
    CHECK(minf.cov.yy < 1e-2 * s2);
    // strict alignment = the exact limit
    const KernelMoments ms = kernel_moments({KernelType::StrictAlignment, 0.0, {0, 1}, s});
    CHECK(ms.mean.x == 0.0);
    CHECK(ms.cov.yy == s2);
    CHECK(ms.cov.xx == 0.0);
}

TEST_CASE("von Mises mean from Bessel ratio at k=1") {
    const DirectionalKernel kern{KernelType::VonMises, 1.0, {1, 0}, 2.0};
    const KernelMoments m = kernel_moments(kern);
    const double expect = 2.0 * bessel_i(1, 1.0) / bessel_i(0, 1.0);
    CHECK_THAT(m.mean.x, Catch::Matchers::WithinRel(expect, 1e-13));
    CHECK(m.mean.y == 0.0);
}

TEST_CASE("diffusion tensor equals bimodal covariance over mu") {
    const double sigma = 1.4, mu = 3.0, k0 = 25.0;
    const Vec2 g = Vec2{2.0, 1.0}.normalized();
    const KernelMoments m = kernel_moments(bimodal(k0, g, sigma));

    GridSpec grid(3, 3, -1, 1, -1, 1);
    ScalarField dist(grid, 0.0);  // d = 0 < d0 everywhere: k = k0
    DirectionField dirs(grid);
    for (auto& dd : dirs.dir) dd = g;
    const TensorField tf =
        tensor_field(anisotropy_from_distance(dist, dirs, k0, 1.0), sigma, mu, +1);
    CHECK_THAT(tf.d11[0], Catch::Matchers::WithinAbs(m.cov.xx / mu, 1e-10));
    CHECK_THAT(tf.d12[0], Catch::Matchers::WithinAbs(m.cov.xy / mu, 1e-10));
    CHECK_THAT(tf.d22[0], Catch::Matchers::WithinAbs(m.cov.yy / mu, 1e-10));
}

TEST_CASE("sampling: k=0 angles are uniform (KS at the 1% level)") {
    Xoshiro256pp rng(20240801);
    const std::size_t n = 100000;
    std::vector<double> angles;
    angles.reserve(n);
    const auto kern = bimodal(0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 d = sample_direction(kern, rng);
        double a = std::atan2(d.y, d.x);
        if (a < 0) a += 2.0 * M_PI;
        angles.push_back(a);
    }
    CHECK(oracles::ks_uniform_angle(std::move(angles)) < oracles::ks_critical_1pct(n));
}

TEST_CASE("sampling: bimodal mean vanishes") {
    Xoshiro256pp rng(77);
    const std::size_t n = 100000;
    const double sigma = 2.0;
    for (double k : {0.7, 25.0}) {
        const auto kern = bimodal(k, Vec2{0.6, -0.8}, sigma);
        Vec2 sum{0, 0};
        for (std::size_t i = 0; i < n; ++i) sum += sample_direction(kern, rng) * sigma;
        const Vec2 mean = sum * (1.0 / n);
        CHECK(mean.norm() <= 4.0 * sigma / std::sqrt(static_cast<double>(n)));
    }
}

TEST_CASE("sampling: empirical covariance matches V_q at k=25") {
    Xoshiro256pp rng(1234);
    const std::size_t n = 1000000;
    const double sigma = 1.0;
    const auto kern = bimodal(25.0, {1, 0}, sigma);
    const KernelMoments m = kernel_moments(kern);
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 v = sample_direction(kern, rng) * sigma;
        sxx += v.x * v.x;
        sxy += v.x * v.y;
        syy += v.y * v.y;
    }
    const double tol = 5e-3 * sigma * sigma;
    CHECK_THAT(sxx / n, Catch::Matchers::WithinAbs(m.cov.xx, tol));
    CHECK_THAT(sxy / n, Catch::Matchers::WithinAbs(m.cov.xy, tol));
    CHECK_THAT(syy / n, Catch::Matchers::WithinAbs(m.cov.yy, tol));
}

TEST_CASE("sampling: von Mises empirical mean matches I1/I0 drift") {
    Xoshiro256pp rng(5150);
    const std::size_t n = 200000;
    const DirectionalKernel kern{KernelType::VonMises, 2.0, {0, 1}, 1.0};
    Vec2 sum{0, 0};
    for (std::size_t i = 0; i < n; ++i) sum += sample_direction(kern, rng);
    const Vec2 mean = sum * (1.0 / n);
    const double expect = bessel_i(1, 2.0) / bessel_i(0, 2.0);
    CHECK_THAT(mean.y, Catch::Matchers::WithinAbs(expect, 4.0 / std::sqrt(double(n))));
    CHECK_THAT(mean.x, Catch::Matchers::WithinAbs(0.0, 4.0 / std::sqrt(double(n))));
}

TEST_CASE("sampling: strict alignment returns the axis up to sign") {
    Xoshiro256pp rng(9);
    const Vec2 g = Vec2{3.0, 4.0}.normalized();
    const DirectionalKernel kern{KernelType::StrictAlignment, 0.0, g, 1.0};
    int plus = 0;
    const int n = 10000;
    for (int i = 0; i < n; ++i) {
        const Vec2 d = sample_direction(kern, rng);
        const double c = d.dot(g);
        CHECK((c == 1.0 || c == -1.0));
        if (c > 0) ++plus;
    }
    CHECK(std::abs(plus - n / 2) < 4 * std::sqrt(n / 4.0));
}

TEST_CASE("kernel validation") {
    CHECK_THROWS_AS(density({KernelType::BimodalVonMises, -1.0, {1, 0}, 1.0}, 0.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(density({KernelType::BimodalVonMises, 1.0, {2, 0}, 1.0}, 0.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(density({KernelType::BimodalVonMises, 1.0, {1, 0}, 0.0}, 0.0),
                    std::invalid_argument);
}
