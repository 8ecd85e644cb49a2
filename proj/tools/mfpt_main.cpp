// Scenario-driven command line front end.
//
// Subcommands:
//   analytic  closed-form radial MFPT curve T(r)
//   solve     2D finite-difference MFPT field (+ isotropic baseline diff)
//   simulate  Monte Carlo exit-time estimates, survival, trajectories
//   env       environment fields (distance, orientation, alpha, tensor)
//   compare   analytic vs radial-FD vs Monte Carlo report with z-scores

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "mfpt/analytic.hpp"
#include "mfpt/anisotropy.hpp"
#include "mfpt/bessel.hpp"
#include "mfpt/fd.hpp"
#include "mfpt/io.hpp"
#include "mfpt/mc.hpp"
#include "mfpt/raster.hpp"
#include "mfpt/scenario.hpp"
#include "mfpt/segments.hpp"
#include "mfpt/version.hpp"

namespace {

using namespace mfpt;

struct CommonOpts {
    std::string scenario_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> raised_cap;
    std::optional<int> threads;
    bool baseline_isotropic = false;
};

std::string out_path(const Scenario& sc, const CommonOpts& opt, const std::string& name) {
    const std::string dir = !opt.out_dir.empty() ? opt.out_dir : sc.out_dir;
    std::filesystem::create_directories(dir);
    return (std::filesystem::path(dir) / name).string();
}

OutputMeta meta_for(const Scenario& sc) {
    char extra[64];
    std::snprintf(extra, sizeof(extra), "D=%.17g", sc.D());
    return OutputMeta{sc.hash_hex, extra};
}

Scenario load(const CommonOpts& opt) {
    Scenario sc = load_scenario(opt.scenario_path);
    if (opt.seed) sc.seed = *opt.seed;
    if (opt.raised_cap) sc.event_cap = *opt.raised_cap;
    if (opt.threads) sc.threads = *opt.threads;
    return sc;
}

/// Signed anisotropy indicator implied by the kernel block for radial
/// geometries: + for radial orientation, - for circular.
double scenario_alpha(const Scenario& sc) {
    double a = 0.0;
    switch (sc.kernel_type) {
        case KernelType::Uniform: a = 0.0; break;
        case KernelType::BimodalVonMises: a = alpha_of_k(sc.k0); break;
        case KernelType::StrictAlignment: a = 1.0; break;
        case KernelType::VonMises:
            throw std::runtime_error(
                "the unimodal von Mises kernel is asymmetric; no parabolic-limit MFPT "
                "applies (use bimodal_von_mises)");
    }
    return sc.orientation == Orientation::Circular ? -a : a;
}

int cmd_analytic(const CommonOpts& opt) {
    const Scenario sc = load(opt);
    const double D = sc.D();
    std::vector<double> rs, Ts;
    const int n = std::max(sc.n1, 2);

    if (const auto* disk = std::get_if<DiskDomain>(&sc.domain)) {
        for (int i = 0; i < n; ++i) {
            const double r = disk->radius * i / (n - 1);
            rs.push_back(r);
            Ts.push_back(disk_exit_time(r, disk->radius, D));
        }
    } else if (const auto* ann = std::get_if<AnnulusDomain>(&sc.domain)) {
        const double a = scenario_alpha(sc);
        for (int i = 0; i < n; ++i) {
            const double r = ann->rho + (ann->radius - ann->rho) * i / (n - 1);
            rs.push_back(r);
            if (sc.kernel_type == KernelType::StrictAlignment) {
                const RadialLimit mode =
                    sc.orientation == Orientation::Circular ? RadialLimit::Circular
                                                            : RadialLimit::Radial;
                Ts.push_back(annulus_limit(r, ann->rho, ann->radius, D, mode, ann->exit));
            } else {
                Ts.push_back(annulus_mfpt(r, ann->rho, ann->radius, D, a, ann->exit));
            }
        }
    } else {
        throw std::runtime_error("analytic: scenario domain must be a disk or an annulus");
    }
    write_radial_csv(out_path(sc, opt, "analytic.csv"), rs, Ts, meta_for(sc));
    return 0;
}

/// Builds the tensor field for a rectangle scenario per the kernel block.
TensorField scenario_tensor(const Scenario& sc, const GridSpec& grid, bool isotropic_baseline,
                            std::unique_ptr<AnisotropyField>& aniso_keepalive) {
    const double d0 = sc.d0.value_or(0.0);
    if (isotropic_baseline || sc.kernel_type == KernelType::Uniform || d0 <= 0.0) {
        AnisotropyField iso(grid);
        return tensor_field(iso, sc.sigma, sc.mu, +1);
    }
    if (sc.orientation == Orientation::Segments) {
        const SegmentSet segs = read_segments_csv(sc.resolve(sc.segments_path));
        auto [dist, dirs] = distance_direction_from_segments(grid, segs);
        aniso_keepalive =
            std::make_unique<AnisotropyField>(anisotropy_from_distance(dist, dirs, sc.k0, d0));
    } else if (sc.orientation == Orientation::Raster) {
        const Raster8 img = read_pgm8(sc.resolve(sc.raster_path));
        const RasterFields rf = fields_from_raster(img, sc.threshold, sc.window, grid);
        aniso_keepalive = std::make_unique<AnisotropyField>(
            anisotropy_from_distance(rf.distance, rf.direction, sc.k0, d0));
    } else {
        throw std::runtime_error("solve: rectangle scenarios need segments or raster orientation");
    }
    return tensor_field(*aniso_keepalive, sc.sigma, sc.mu, +1);
}

GridSpec scenario_grid(const Scenario& sc, const RectDomain& rect) {
    if (sc.orientation == Orientation::Raster) {
        const Raster8 img = read_pgm8(sc.resolve(sc.raster_path));
        return GridSpec(img.width, img.height, rect.a, rect.b, rect.c, rect.d);
    }
    return GridSpec(sc.n1, sc.n2, rect.a, rect.b, rect.c, rect.d);
}

int cmd_solve(const CommonOpts& opt) {
    const Scenario sc = load(opt);
    const auto* rect = std::get_if<RectDomain>(&sc.domain);
    if (!rect) throw std::runtime_error("solve: scenario domain must be a rectangle");
    for (auto role : rect->roles)
        if (role != BoundaryRole::Absorbing)
            throw std::runtime_error("solve: the 2D scheme needs all four edges absorbing");

    const GridSpec grid = scenario_grid(sc, *rect);
    std::unique_ptr<AnisotropyField> keepalive;
    const TensorField tensor = scenario_tensor(sc, grid, false, keepalive);
    const ScalarField T = solve_system(assemble_2d(tensor, grid), sc.tol);
    const OutputMeta meta = meta_for(sc);
    write_scalar_csv(out_path(sc, opt, "T.csv"), T, meta, "T");
    write_pgm16_heatmap(out_path(sc, opt, "T.pgm"), T, meta);

    if (opt.baseline_isotropic) {
        std::unique_ptr<AnisotropyField> keep2;
        const TensorField iso = scenario_tensor(sc, grid, true, keep2);
        const ScalarField T0 = solve_system(assemble_2d(iso, grid), sc.tol);
        const ScalarField diff = difference_map(T, T0);
        write_scalar_csv(out_path(sc, opt, "T_iso.csv"), T0, meta, "T");
        write_scalar_csv(out_path(sc, opt, "difference.csv"), diff, meta, "dT");
        write_pgm16_heatmap(out_path(sc, opt, "difference.pgm"), diff, meta);
    }
    return 0;
}

/// Dispatches estimate_theta over the domain variant and the kernel field
/// implied by the scenario. Returns estimates plus recorded trajectories.
struct McOutputs {
    std::vector<FptEstimate> estimates;
    std::vector<Trajectory> trajectories;
    SurvivalCurve survival;
    bool have_survival = false;
};

template <class Field>
McOutputs run_mc_with_field(const Scenario& sc, const Field& field, const McConfig& cfg) {
    McOutputs out;
    std::visit(
        [&](const auto& dom) {
            out.estimates = estimate_theta(dom, field, cfg, sc.starts, sc.walkers, sc.moments,
                                           sc.seed, sc.threads);
            if (sc.record_trajectories) {
                const int n_traj =
                    std::min<std::size_t>(sc.trajectory_count, sc.walkers);
                for (int w = 0; w < n_traj; ++w) {
                    Xoshiro256pp rng(sc.seed, 0, static_cast<std::uint64_t>(w));
                    Trajectory traj;
                    simulate_exit(dom, field, cfg, sc.starts[0].x, sc.starts[0].dir, rng, &traj);
                    out.trajectories.push_back(std::move(traj));
                }
            }
            if (!sc.time_grid.empty()) {
                out.survival = estimate_survival(dom, field, cfg, sc.starts[0], sc.time_grid,
                                                 sc.walkers, sc.seed, sc.threads);
                out.have_survival = true;
            }
        },
        sc.domain);
    return out;
}

McOutputs run_mc(const Scenario& sc, std::unique_ptr<AnisotropyField>& keepalive) {
    McConfig cfg;
    cfg.mu = sc.mu;
    cfg.sigma = sc.sigma;
    cfg.event_cap = sc.event_cap;
    if (sc.starts.empty()) throw std::runtime_error("simulate: mc.starts must be non-empty");

    if (sc.kernel_type == KernelType::Uniform)
        return run_mc_with_field(sc, UniformField{}, cfg);

    switch (sc.orientation) {
        case Orientation::Radial:
        case Orientation::Circular: {
            RadialField field(sc.kernel_type, sc.k0, sc.orientation == Orientation::Circular);
            return run_mc_with_field(sc, field, cfg);
        }
        case Orientation::Segments: {
            SegmentField field(read_segments_csv(sc.resolve(sc.segments_path)), sc.k0,
                               sc.d0.value_or(0.0), sc.kernel_type);
            return run_mc_with_field(sc, field, cfg);
        }
        case Orientation::Raster: {
            const auto* rect = std::get_if<RectDomain>(&sc.domain);
            if (!rect) throw std::runtime_error("simulate: raster orientation needs a rectangle");
            const Raster8 img = read_pgm8(sc.resolve(sc.raster_path));
            const GridSpec grid(img.width, img.height, rect->a, rect->b, rect->c, rect->d);
            const RasterFields rf = fields_from_raster(img, sc.threshold, sc.window, grid);
            keepalive = std::make_unique<AnisotropyField>(
                anisotropy_from_distance(rf.distance, rf.direction, sc.k0, sc.d0.value_or(0.0)));
            GridField field(*keepalive, sc.kernel_type);
            return run_mc_with_field(sc, field, cfg);
        }
    }
    throw std::logic_error("simulate: unhandled orientation");
}

/// A circular-orientation inner-exit annulus has a provably infinite MFPT as
/// alpha -> -1; refuse to burn the event cap unless it was raised knowingly.
bool diverging_inner_exit(const Scenario& sc) {
    const auto* ann = std::get_if<AnnulusDomain>(&sc.domain);
    if (!ann || ann->exit != AnnulusExit::Inner) return false;
    if (sc.orientation != Orientation::Circular) return false;
    if (sc.kernel_type == KernelType::StrictAlignment) return true;
    return sc.kernel_type == KernelType::BimodalVonMises && alpha_of_k(sc.k0) > 0.9;
}

int cmd_simulate(const CommonOpts& opt) {
    const Scenario sc = load(opt);
    if (diverging_inner_exit(sc) && !opt.raised_cap) {
        std::cerr << "simulate: refusing a circular-orientation inner-exit annulus run "
                     "(alpha -> -1 has infinite MFPT); pass --raise-event-cap to force\n";
        return 2;
    }
    std::unique_ptr<AnisotropyField> keepalive;
    const McOutputs out = run_mc(sc, keepalive);
    const OutputMeta meta = meta_for(sc);
    write_estimates_csv(out_path(sc, opt, "estimates.csv"), sc.starts, out.estimates, meta);
    if (sc.record_trajectories)
        write_trajectories_csv(out_path(sc, opt, "trajectories.csv"), out.trajectories, meta);
    if (out.have_survival)
        write_survival_csv(out_path(sc, opt, "survival.csv"), out.survival, meta);
    return 0;
}

int cmd_env(const CommonOpts& opt) {
    const Scenario sc = load(opt);
    const auto* rect = std::get_if<RectDomain>(&sc.domain);
    if (!rect) throw std::runtime_error("env: scenario domain must be a rectangle");
    const GridSpec grid = scenario_grid(sc, *rect);

    ScalarField dist(grid);
    DirectionField dirs(grid);
    if (sc.orientation == Orientation::Segments) {
        const SegmentSet segs = read_segments_csv(sc.resolve(sc.segments_path));
        auto fields = distance_direction_from_segments(grid, segs);
        dist = std::move(fields.first);
        dirs = std::move(fields.second);
    } else if (sc.orientation == Orientation::Raster) {
        const Raster8 img = read_pgm8(sc.resolve(sc.raster_path));
        RasterFields rf = fields_from_raster(img, sc.threshold, sc.window, grid);
        dist = std::move(rf.distance);
        dirs = std::move(rf.direction);
    } else {
        throw std::runtime_error("env: needs segments or raster orientation");
    }

    const AnisotropyField aniso =
        anisotropy_from_distance(dist, dirs, sc.k0, sc.d0.value_or(0.0));
    const TensorField tensor = tensor_field(aniso, sc.sigma, sc.mu, +1);
    const OutputMeta meta = meta_for(sc);
    write_scalar_csv(out_path(sc, opt, "distance.csv"), dist, meta, "d");
    write_direction_csv(out_path(sc, opt, "direction.csv"), dirs, meta);
    ScalarField alpha(grid), d11(grid), d12(grid), d22(grid);
    alpha.value = aniso.alpha;
    d11.value = tensor.d11;
    d12.value = tensor.d12;
    d22.value = tensor.d22;
    write_scalar_csv(out_path(sc, opt, "alpha.csv"), alpha, meta, "alpha");
    write_scalar_csv(out_path(sc, opt, "d11.csv"), d11, meta, "D11");
    write_scalar_csv(out_path(sc, opt, "d12.csv"), d12, meta, "D12");
    write_scalar_csv(out_path(sc, opt, "d22.csv"), d22, meta, "D22");
    return 0;
}

int cmd_compare(const CommonOpts& opt) {
    const Scenario sc = load(opt);
    const double D = sc.D();
    const double a = scenario_alpha(sc);

    RadialProblem problem;
    if (const auto* disk = std::get_if<DiskDomain>(&sc.domain)) {
        problem = RadialProblem::disk(disk->radius, D, a);
    } else if (const auto* ann = std::get_if<AnnulusDomain>(&sc.domain)) {
        problem = RadialProblem::annulus(ann->rho, ann->radius, D, ann->exit,
                                         [a](double) { return a; });
    } else {
        throw std::runtime_error("compare: scenario domain must be a disk or an annulus");
    }
    const int n_fd = std::max(sc.n1, 17);
    const RadialSolution fd = radial_solve(problem, n_fd);

    std::unique_ptr<AnisotropyField> keepalive;
    std::vector<FptEstimate> mc;
    if (!sc.starts.empty()) mc = run_mc(sc, keepalive).estimates;

    auto out = std::ofstream(out_path(sc, opt, "compare.csv"));
    const OutputMeta meta = meta_for(sc);
    out << meta.header_line() << "r,analytic_T,fd_T,fd_rel_err,mc_mean,mc_stderr,z\n";
    char buf[256];
    for (std::size_t i = 0; i < sc.starts.size(); ++i) {
        const double r = sc.starts[i].x.norm();
        double exact;
        if (const auto* disk = std::get_if<DiskDomain>(&sc.domain))
            exact = disk_exit_time(r, disk->radius, D);
        else {
            const auto& ann = std::get<AnnulusDomain>(sc.domain);
            exact = annulus_mfpt(r, ann.rho, ann.radius, D, a, ann.exit);
        }
        const double fd_T = fd.at(r);
        const double fd_rel = std::abs(fd_T - exact) / std::max(std::abs(exact), 1e-300);
        const double z = mc[i].stderr_of_mean > 0.0
                             ? (mc[i].mean - exact) / mc[i].stderr_of_mean
                             : 0.0;
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.3e,%.17g,%.17g,%.3f\n", r, exact,
                      fd_T, fd_rel, mc[i].mean, mc[i].stderr_of_mean, z);
        out << buf;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mean first passage time toolkit"};
    app.set_version_flag("--version", mfpt::kVersion);
    app.require_subcommand(1);

    CommonOpts opt;
    const auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--scenario", opt.scenario_path, "scenario JSON file")
            ->required()
            ->check(CLI::ExistingFile);
        cmd->add_option("--out", opt.out_dir, "output directory (overrides scenario)");
        cmd->add_option("--seed", opt.seed, "master seed (overrides scenario)");
        cmd->add_option("--raise-event-cap", opt.raised_cap, "per-walker event cap override");
        cmd->add_option("--threads", opt.threads, "worker count (0 = hardware)");
    };

    auto* analytic = app.add_subcommand("analytic", "closed-form radial MFPT curve");
    add_common(analytic);
    auto* solve = app.add_subcommand("solve", "finite-difference MFPT field");
    add_common(solve);
    solve->add_flag("--baseline-isotropic", opt.baseline_isotropic,
                    "also solve the isotropic baseline and write the difference map");
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo exit-time estimates");
    add_common(simulate);
    auto* env = app.add_subcommand("env", "environment field export");
    add_common(env);
    auto* compare = app.add_subcommand("compare", "analytic vs fd vs mc report");
    add_common(compare);

    CLI11_PARSE(app, argc, argv);

    try {
        if (analytic->parsed()) return cmd_analytic(opt);
        if (solve->parsed()) return cmd_solve(opt);
        if (simulate->parsed()) return cmd_simulate(opt);
        if (env->parsed()) return cmd_env(opt);
        if (compare->parsed()) return cmd_compare(opt);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
