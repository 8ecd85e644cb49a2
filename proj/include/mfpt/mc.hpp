#pragma once
// Event-driven Monte Carlo for the velocity-jump process: straight flights
// at speed sigma, Poisson(mu) turning times, directions redrawn from the
// local kernel at the turn position, exact analytic boundary crossings
// (quadratic solve on circles, slab clipping on rectangles), specular
// reflection on reflecting pieces.
//
// Reproducibility: each walker owns an RNG stream derived from
// (master seed, start index, walker index). Statistics are reduced from the
// per-walker sample array in index order, so results are bit-identical for
// any worker count.

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <thread>
#include <vector>

#include "mfpt/anisotropy.hpp"
#include "mfpt/domain.hpp"
#include "mfpt/kernel.hpp"
#include "mfpt/rng.hpp"
#include "mfpt/segments.hpp"

namespace mfpt {

struct McConfig {
    double mu{1.0};
    double sigma{1.0};
    std::uint64_t event_cap{100000000};  ///< turns + reflections per walker
    bool permit_boundary_start{false};
};

struct ExitSample {
    double time{0.0};
    Vec2 exit_point;
    bool capped{false};
};

struct TrajectoryPoint {
    double t;
    Vec2 x;
};
using Trajectory = std::vector<TrajectoryPoint>;

// --- kernel fields -----------------------------------------------------
// A field answers "draw a new direction at position x". The von Mises
// sampler setup is cached: scenarios use a single concentration value.

namespace detail {

inline Vec2 draw_kernel(KernelType type, const VonMisesSampler& vm, Vec2 gamma,
                        Xoshiro256pp& rng) {
    switch (type) {
        case KernelType::Uniform:
            return rng.next_unit_vector();
        case KernelType::VonMises:
            return vm.sample(gamma, rng);
        case KernelType::BimodalVonMises: {
            const Vec2 d = vm.sample(gamma, rng);
            return rng.next_bool() ? -d : d;
        }
        case KernelType::StrictAlignment:
            return rng.next_bool() ? -gamma : gamma;
    }
    return {1.0, 0.0};
}

}  // namespace detail

/// No directional bias anywhere.
struct UniformField {
    Vec2 sample_direction(Vec2, Xoshiro256pp& rng) const { return rng.next_unit_vector(); }
};

/// Uniform concentration, radial (gamma = x_hat) or circular
/// (gamma = x_hat rotated 90 degrees) orientation. At the origin the
/// orientation is undefined; a fixed fallback axis is used.
struct RadialField {
    KernelType type{KernelType::BimodalVonMises};
    double k{0.0};
    bool circular{false};
    VonMisesSampler vm;

    RadialField(KernelType t, double k_, bool circular_)
        : type(t), k(k_), circular(circular_), vm(k_) {}

    Vec2 sample_direction(Vec2 x, Xoshiro256pp& rng) const {
        const double r2 = x.norm2();
        Vec2 g{1.0, 0.0};
        if (r2 > 0.0) {
            const double inv = 1.0 / std::sqrt(r2);
            g = {x.x * inv, x.y * inv};
        }
        if (circular) g = g.perp();
        return detail::draw_kernel(type, vm, g, rng);
    }
};

/// Distance-gated kernel around linear features: bimodal von Mises with
/// concentration k0 within d0 of the nearest segment, uniform beyond.
struct SegmentField {
    SegmentSet segments;
    double k0{0.0};
    double d0{0.0};
    KernelType type{KernelType::BimodalVonMises};
    VonMisesSampler vm;

    SegmentField(SegmentSet segs, double k0_, double d0_,
                 KernelType t = KernelType::BimodalVonMises)
        : segments(std::move(segs)), k0(k0_), d0(d0_), type(t), vm(k0_) {
        validate_segments(segments);
    }

    Vec2 sample_direction(Vec2 x, Xoshiro256pp& rng) const {
        const NearestFeature nf = nearest_segment(segments, x);
        if (nf.distance < d0) return detail::draw_kernel(type, vm, nf.axis, rng);
        return rng.next_unit_vector();
    }
};

/// Frozen gridded field (raster path): nearest-node lookup of (k, gamma).
struct GridField {
    const AnisotropyField* field;
    KernelType type{KernelType::BimodalVonMises};
    VonMisesSampler vm;

    explicit GridField(const AnisotropyField& f, KernelType t = KernelType::BimodalVonMises)
        : field(&f), type(t), vm(f.k0) {}

    Vec2 sample_direction(Vec2 x, Xoshiro256pp& rng) const {
        const GridSpec& g = field->grid;
        int j = static_cast<int>(std::lround((x.x - g.a) / g.dx1()));
        int k = static_cast<int>(std::lround((x.y - g.c) / g.dx2()));
        j = j < 0 ? 0 : (j >= g.n1 ? g.n1 - 1 : j);
        k = k < 0 ? 0 : (k >= g.n2 ? g.n2 - 1 : k);
        const std::size_t i = g.index(j, k);
        if (field->k[i] <= 0.0) return rng.next_unit_vector();
        return detail::draw_kernel(type, vm, field->gamma[i], rng);
    }
};

/// Fixed orientation axis everywhere (tests, sanity runs).
struct FixedAxisField {
    KernelType type{KernelType::BimodalVonMises};
    Vec2 gamma{1.0, 0.0};
    VonMisesSampler vm;

    FixedAxisField(KernelType t, double k, Vec2 g) : type(t), gamma(g), vm(k) {}

    Vec2 sample_direction(Vec2, Xoshiro256pp& rng) const {
        return detail::draw_kernel(type, vm, gamma, rng);
    }
};

// --- single-walker simulation ------------------------------------------

/// One walker from x0 to absorption. dir0 empty = kernel-drawn initial
/// direction. Returns the exact analytic crossing time of the absorbing
/// boundary; marks the sample capped once event_cap turns+reflections pass.
template <class DomainT, class Field>
ExitSample simulate_exit(const DomainT& dom, const Field& field, const McConfig& cfg, Vec2 x0,
                         std::optional<Vec2> dir0, Xoshiro256pp& rng,
                         Trajectory* traj = nullptr) {
    if (!(cfg.mu > 0.0) || !(cfg.sigma > 0.0))
        throw std::invalid_argument("simulate_exit: mu and sigma must be positive");
    if (!dom.contains(x0)) throw std::invalid_argument("simulate_exit: start outside the domain");
    const double scale = domain_extent(Domain{dom});
    if (cfg.permit_boundary_start && dom.on_absorbing(x0, 1e-12 * scale)) {
        if (traj) traj->push_back({0.0, x0});
        return {0.0, x0, false};
    }
    const double s_eps = 1e-13 * scale / cfg.sigma;  // flight-time epsilon

    Vec2 x = x0;
    Vec2 dir = dir0 ? *dir0 : field.sample_direction(x0, rng);
    double t = 0.0;
    std::uint64_t events = 0;
    if (traj) traj->push_back({0.0, x0});

    for (;;) {
        double remaining = rng.next_exponential(cfg.mu);
        for (;;) {
            const Vec2 v = dir * cfg.sigma;
            const auto hit = dom.first_hit(x, v, remaining, s_eps);
            if (!hit) break;
            t += hit->s;
            remaining -= hit->s;
            x = hit->point;
            if (hit->absorbing) {
                if (traj) traj->push_back({t, x});
                return {t, x, false};
            }
            dir = reflect(dir, hit->normal);
            if (traj) traj->push_back({t, x});
            if (++events >= cfg.event_cap) return {t, x, true};
        }
        x += dir * (cfg.sigma * remaining);
        t += remaining;
        dir = field.sample_direction(x, rng);
        if (traj) traj->push_back({t, x});
        if (++events >= cfg.event_cap) return {t, x, true};
    }
}

// --- ensemble estimators -------------------------------------------------

struct Start {
    Vec2 x;
    std::optional<Vec2> dir;  ///< empty = drawn from the kernel
};

/// Exit-time sample statistics for one start. Moments are raw moments of
/// the exit time over completed walkers; Theta_0 = 1 by convention and is
/// not stored.
struct FptEstimate {
    std::size_t completed{0};
    std::size_t capped{0};
    double mean{0.0};
    double stderr_of_mean{0.0};
    std::vector<double> moments;  ///< Theta_m, m = 1..M
    std::vector<double> samples;  ///< per-walker exit times (kept on request)
};

struct SurvivalCurve {
    std::vector<double> t;
    std::vector<double> survival;
};

namespace detail {

template <class DomainT, class Field>
void run_walker_block(const DomainT& dom, const Field& field, const McConfig& cfg,
                      const Start& start, std::uint64_t seed, std::size_t start_idx,
                      std::size_t w_lo, std::size_t w_hi, std::vector<double>& times,
                      std::vector<unsigned char>& capped) {
    for (std::size_t w = w_lo; w < w_hi; ++w) {
        Xoshiro256pp rng(seed, static_cast<std::uint64_t>(start_idx),
                         static_cast<std::uint64_t>(w));
        const ExitSample s = simulate_exit(dom, field, cfg, start.x, start.dir, rng);
        times[w] = s.time;
        capped[w] = s.capped ? 1 : 0;
    }
}

inline std::size_t resolve_workers(int workers) {
    if (workers > 0) return static_cast<std::size_t>(workers);
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

}  // namespace detail

/// N independent walkers per start; per-walker streams from (seed, start
/// index, walker index). Capped walkers are excluded from the moments and
/// reported in `capped`.
template <class DomainT, class Field>
std::vector<FptEstimate> estimate_theta(const DomainT& dom, const Field& field,
                                        const McConfig& cfg, const std::vector<Start>& starts,
                                        std::size_t n_walkers, int n_moments,
                                        std::uint64_t seed, int workers = 0,
                                        bool keep_samples = false) {
    if (n_walkers < 2) throw std::invalid_argument("estimate_theta: need at least 2 walkers");
    if (n_moments < 1 || n_moments > 8)
        throw std::invalid_argument("estimate_theta: moment order must be in [1,8]");
    const std::size_t n_threads = std::min(detail::resolve_workers(workers), n_walkers);

    std::vector<FptEstimate> out;
    out.reserve(starts.size());
    std::vector<double> times(n_walkers);
    std::vector<unsigned char> capped(n_walkers);
    for (std::size_t si = 0; si < starts.size(); ++si) {
        if (n_threads <= 1) {
            detail::run_walker_block(dom, field, cfg, starts[si], seed, si, 0, n_walkers, times,
                                     capped);
        } else {
            std::vector<std::thread> pool;
            const std::size_t chunk = (n_walkers + n_threads - 1) / n_threads;
            for (std::size_t th = 0; th < n_threads; ++th) {
                const std::size_t lo = th * chunk;
                const std::size_t hi = std::min(n_walkers, lo + chunk);
                if (lo >= hi) break;
                pool.emplace_back([&, lo, hi] {
                    detail::run_walker_block(dom, field, cfg, starts[si], seed, si, lo, hi,
                                             times, capped);
                });
            }
            for (auto& th : pool) th.join();
        }

        FptEstimate est;
        est.moments.assign(static_cast<std::size_t>(n_moments), 0.0);
        long double mom[8] = {};  // index-order accumulation, worker-count independent
        const int m_acc = std::min(n_moments, 8);
        for (std::size_t w = 0; w < n_walkers; ++w) {
            if (capped[w]) {
                ++est.capped;
                continue;
            }
            ++est.completed;
            long double p = 1.0L;
            for (int m = 0; m < m_acc; ++m) {
                p *= times[w];
                mom[m] += p;
            }
        }
        if (est.completed == 0) throw std::runtime_error("estimate_theta: every walker hit the event cap");
        for (int m = 0; m < m_acc; ++m)
            est.moments[m] = static_cast<double>(mom[m] / est.completed);
        est.mean = est.moments[0];
        long double ss = 0.0L;
        for (std::size_t w = 0; w < n_walkers; ++w) {
            if (capped[w]) continue;
            const long double d = times[w] - est.mean;
            ss += d * d;
        }
        const double sd = est.completed > 1
                              ? std::sqrt(static_cast<double>(ss / (est.completed - 1)))
                              : 0.0;
        est.stderr_of_mean = sd / std::sqrt(static_cast<double>(est.completed));
        if (keep_samples) est.samples.assign(times.begin(), times.end());
        out.push_back(std::move(est));
    }
    return out;
}

/// Marginal survival estimate S(t_i) = fraction of walkers alive past t_i.
/// Capped walkers count as survivors at every grid time.
template <class DomainT, class Field>
SurvivalCurve estimate_survival(const DomainT& dom, const Field& field, const McConfig& cfg,
                                const Start& start, const std::vector<double>& time_grid,
                                std::size_t n_walkers, std::uint64_t seed, int workers = 0) {
    if (time_grid.empty() || time_grid.front() != 0.0)
        throw std::invalid_argument("estimate_survival: time grid must start at 0");
    for (std::size_t i = 1; i < time_grid.size(); ++i)
        if (!(time_grid[i] > time_grid[i - 1]))
            throw std::invalid_argument("estimate_survival: time grid must increase");
    auto est = estimate_theta(dom, field, cfg, {start}, n_walkers, 1, seed, workers, true);
    SurvivalCurve curve;
    curve.t = time_grid;
    curve.survival.assign(time_grid.size(), 0.0);
    for (std::size_t i = 0; i < time_grid.size(); ++i) {
        std::size_t alive = 0;
        for (double t : est[0].samples)
            if (t > time_grid[i]) ++alive;
        curve.survival[i] =
            static_cast<double>(alive) / static_cast<double>(est[0].samples.size());
    }
    curve.survival[0] = 1.0;
    return curve;
}

}  // namespace mfpt
