#pragma once
// Directional turning kernels on the velocity circle V = sigma*S^1:
// densities, exact first/second moments, and samplers.
//
// The bimodal von Mises kernel
//     q(x,v) = cosh(k g.theta) / (2 pi sigma I0(k))
// is the workhorse: it is symmetric (q(x,-v) = q(x,v)), has zero mean and
// covariance
//     V_q = sigma^2 [ (1-I2/I0)/2 * Id + (I2/I0) g g^T ],
// which is what feeds the anisotropic diffusion tensor D = V_q / mu.
//
// Strict alignment is handled as the bimodal k->infinity limit: sampling
// returns +/-g with equal probability, moments are E = 0, V = sigma^2 g g^T,
// and density queries are rejected (the distribution is singular).

#include <cmath>
#include <stdexcept>

#include "mfpt/bessel.hpp"
#include "mfpt/rng.hpp"
#include "mfpt/vec2.hpp"

namespace mfpt {

enum class KernelType { Uniform, VonMises, BimodalVonMises, StrictAlignment };

struct DirectionalKernel {
    KernelType type{KernelType::Uniform};
    double k{0.0};     ///< concentration, >= 0 (ignored for Uniform)
    Vec2 gamma{1.0, 0.0};  ///< preferred orientation, unit length
    double sigma{1.0};     ///< particle speed, > 0

    void validate() const {
        if (!(sigma > 0.0)) throw std::invalid_argument("kernel: sigma must be positive");
        if (!(k >= 0.0)) throw std::invalid_argument("kernel: k must be non-negative");
        if (type != KernelType::Uniform && std::abs(gamma.norm() - 1.0) > 1e-9)
            throw std::invalid_argument("kernel: gamma must be a unit vector");
    }
};

struct KernelMoments {
    Vec2 mean;      ///< E_q, units of speed
    SymMat2 cov;    ///< V_q, units of speed^2
};

/// Probability density q(x,v) for the unit direction u on V = sigma*S^1.
/// Singular variants (strict alignment) reject the query. The bimodal case
/// is evaluated through |gamma.u|, which makes q(u) = q(-u) bit-exact.
inline double density_direction(const DirectionalKernel& kern, Vec2 u) {
    kern.validate();
    const double inv_circle = 1.0 / (2.0 * M_PI * kern.sigma);
    const double c = kern.gamma.dot(u);
    switch (kern.type) {
        case KernelType::Uniform:
            return inv_circle;
        case KernelType::VonMises:
            // exp(k c)/I0(k), evaluated in scaled form so large k cannot overflow
            return inv_circle * std::exp(kern.k * (c - 1.0)) / bessel_i_scaled(0, kern.k);
        case KernelType::BimodalVonMises: {
            const double ac = std::abs(c);
            return inv_circle * 0.5 *
                   (std::exp(kern.k * (ac - 1.0)) + std::exp(-kern.k * (ac + 1.0))) /
                   bessel_i_scaled(0, kern.k);
        }
        case KernelType::StrictAlignment:
            throw std::domain_error("density: strict alignment has no density");
    }
    throw std::logic_error("density: unknown kernel type");
}

/// Density at the angle theta.
inline double density(const DirectionalKernel& kern, double theta) {
    return density_direction(kern, {std::cos(theta), std::sin(theta)});
}

/// Closed-form moments of the kernel over V.
inline KernelMoments kernel_moments(const DirectionalKernel& kern) {
    kern.validate();
    const double s2 = kern.sigma * kern.sigma;
    const SymMat2 id = SymMat2::identity();
    const SymMat2 gg = SymMat2::outer(kern.gamma);
    switch (kern.type) {
        case KernelType::Uniform:
            return {{0.0, 0.0}, id * (0.5 * s2)};
        case KernelType::VonMises: {
            const double i0 = bessel_i_scaled(0, kern.k);
            const double r1 = bessel_i_scaled(1, kern.k) / i0;
            const double r2 = bessel_i_scaled(2, kern.k) / i0;
            const Vec2 mean = kern.gamma * (kern.sigma * r1);
            const SymMat2 cov = id * (0.5 * s2 * (1.0 - r2)) + gg * (s2 * (r2 - r1 * r1));
            return {mean, cov};
        }
        case KernelType::BimodalVonMises: {
            const double a = alpha_of_k(kern.k);
            return {{0.0, 0.0}, id * (0.5 * s2 * (1.0 - a)) + gg * (s2 * a)};
        }
        case KernelType::StrictAlignment:
            // bimodal k->infinity convention
            return {{0.0, 0.0}, gg * s2};
    }
    throw std::logic_error("kernel_moments: unknown kernel type");
}

/// Sampler state for the von Mises rejection scheme (Best & Fisher 1979,
/// wrapped-Cauchy envelope). Setup depends on k only, so it is precomputed
/// once and reused across draws in the Monte Carlo hot loop.
class VonMisesSampler {
  public:
    explicit VonMisesSampler(double k) : k_(k) {
        if (k > kUniformCutoff) {
            const double tau = 1.0 + std::sqrt(1.0 + 4.0 * k * k);
            const double rho = (tau - std::sqrt(2.0 * tau)) / (2.0 * k);
            r_ = (1.0 + rho * rho) / (2.0 * rho);
        }
    }

    /// Unit vector with angle ~ vonMises(k) about the axis `mean`.
    Vec2 sample(Vec2 mean, Xoshiro256pp& rng) const {
        if (k_ <= kUniformCutoff) return rng.next_unit_vector();
        double f;
        for (;;) {
            const double z = std::cos(M_PI * rng.next_double());
            f = (1.0 + r_ * z) / (r_ + z);
            const double c = k_ * (r_ - f);
            const double u2 = rng.next_double_oc();
            if (c * (2.0 - c) - u2 > 0.0) break;
            if (std::log(c / u2) + 1.0 - c >= 0.0) break;
        }
        // cos(offset) = f; random sign for the sine
        const double s = (rng.next_bool() ? 1.0 : -1.0) * std::sqrt(std::max(0.0, 1.0 - f * f));
        return {mean.x * f - mean.y * s, mean.y * f + mean.x * s};
    }

    double k() const { return k_; }

    static constexpr double kUniformCutoff = 1e-12;

  private:
    double k_{0.0};
    double r_{0.0};
};

/// One direction draw from the kernel. The bimodal variant samples a
/// unimodal von Mises about gamma and negates with probability 1/2;
/// strict alignment returns +/-gamma with probability 1/2 each.
inline Vec2 sample_direction(const DirectionalKernel& kern, Xoshiro256pp& rng) {
    kern.validate();
    switch (kern.type) {
        case KernelType::Uniform:
            return rng.next_unit_vector();
        case KernelType::VonMises:
            return VonMisesSampler(kern.k).sample(kern.gamma, rng);
        case KernelType::BimodalVonMises: {
            const Vec2 d = VonMisesSampler(kern.k).sample(kern.gamma, rng);
            return rng.next_bool() ? -d : d;
        }
        case KernelType::StrictAlignment:
            return rng.next_bool() ? -kern.gamma : kern.gamma;
    }
    throw std::logic_error("sample_direction: unknown kernel type");
}

}  // namespace mfpt
