#pragma once
// Scenario files: a single JSON document describing domain, kernel, physics,
// solver and Monte Carlo settings. Validation collects every violation and
// reports them together; unknown keys are rejected. The diffusion constant
// D = sigma^2/(2 mu) is always derived, never user-set.

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mfpt/domain.hpp"
#include "mfpt/io.hpp"
#include "mfpt/kernel.hpp"
#include "mfpt/mc.hpp"

namespace mfpt {

struct ScenarioError : std::runtime_error {
    std::vector<std::string> violations;
    explicit ScenarioError(std::vector<std::string> v)
        : std::runtime_error(join(v)), violations(std::move(v)) {}

    static std::string join(const std::vector<std::string>& v) {
        std::string s = "scenario validation failed:";
        for (const auto& e : v) {
            s += "\n  - ";
            s += e;
        }
        return s;
    }
};

enum class Orientation { Radial, Circular, Segments, Raster };

struct Scenario {
    Domain domain{DiskDomain{1.0}};

    KernelType kernel_type{KernelType::Uniform};
    double k0{0.0};
    std::optional<double> d0;  ///< distance gate; absent = uniform concentration
    Orientation orientation{Orientation::Radial};
    std::string segments_path;
    std::string raster_path;
    int threshold{128};
    int window{5};

    double mu{1.0};
    double sigma{1.0};
    double D() const { return sigma * sigma / (2.0 * mu); }

    int n1{257};
    int n2{257};
    double tol{1e-10};

    std::size_t walkers{10000};
    int moments{2};
    std::uint64_t seed{1};
    std::uint64_t event_cap{100000000};
    std::vector<Start> starts;
    std::optional<Vec2> initial_direction;  ///< empty = kernel-drawn
    bool record_trajectories{false};
    int trajectory_count{3};
    int threads{0};
    std::vector<double> time_grid;

    std::string out_dir{"."};

    std::string hash_hex{"none"};
    std::string source_dir{"."};

    /// Paths inside the scenario resolve relative to the scenario file.
    std::string resolve(const std::string& p) const {
        std::filesystem::path fp(p);
        if (fp.is_absolute()) return p;
        return (std::filesystem::path(source_dir) / fp).string();
    }
};

namespace detail {

using nlohmann::json;

struct Validator {
    std::vector<std::string> errors;

    void fail(const std::string& msg) { errors.push_back(msg); }

    void check_keys(const json& j, const std::string& where,
                    std::initializer_list<const char*> allowed) {
        for (auto it = j.begin(); it != j.end(); ++it) {
            bool ok = false;
            for (const char* k : allowed)
                if (it.key() == k) ok = true;
            if (!ok) fail(where + ": unknown key '" + it.key() + "'");
        }
    }

    template <class T>
    T get(const json& j, const std::string& where, const char* key, std::optional<T> def = {}) {
        if (!j.contains(key)) {
            if (def) return *def;
            fail(where + ": missing required key '" + key + "'");
            return T{};
        }
        try {
            return j.at(key).get<T>();
        } catch (const json::exception&) {
            fail(where + ": key '" + std::string(key) + "' has the wrong type");
            return T{};
        }
    }
};

inline void parse_domain(Validator& v, const json& j, Scenario& sc) {
    v.check_keys(j, "domain", {"shape", "R0", "rho", "exit", "a", "b", "c", "d", "roles"});
    const auto shape = v.get<std::string>(j, "domain", "shape");
    const auto parse_role = [&](const std::string& s, const char* where) {
        if (s == "absorbing") return BoundaryRole::Absorbing;
        if (s == "reflecting") return BoundaryRole::Reflecting;
        v.fail(std::string(where) + ": role must be 'absorbing' or 'reflecting'");
        return BoundaryRole::Absorbing;
    };
    try {
        if (shape == "disk") {
            sc.domain = DiskDomain{v.get<double>(j, "domain", "R0")};
        } else if (shape == "annulus") {
            const auto exit = v.get<std::string>(j, "domain", "exit", std::optional<std::string>("both"));
            AnnulusExit e = AnnulusExit::Both;
            if (exit == "inner") e = AnnulusExit::Inner;
            else if (exit == "outer") e = AnnulusExit::Outer;
            else if (exit != "both") v.fail("domain: exit must be inner/outer/both");
            sc.domain = AnnulusDomain{v.get<double>(j, "domain", "rho"),
                                      v.get<double>(j, "domain", "R0"), e};
        } else if (shape == "rectangle") {
            RectDomain r{v.get<double>(j, "domain", "a"), v.get<double>(j, "domain", "b"),
                         v.get<double>(j, "domain", "c"), v.get<double>(j, "domain", "d")};
            if (j.contains("roles")) {
                const json& roles = j.at("roles");
                v.check_keys(roles, "domain.roles", {"left", "right", "bottom", "top"});
                const char* names[4] = {"left", "right", "bottom", "top"};
                for (int i = 0; i < 4; ++i)
                    if (roles.contains(names[i]))
                        r.roles[i] = parse_role(roles.at(names[i]).get<std::string>(), "domain.roles");
            }
            if (!r.any_absorbing())
                v.fail("domain: at least one boundary piece must be absorbing");
            sc.domain = r;
        } else {
            v.fail("domain: shape must be disk/annulus/rectangle");
        }
    } catch (const std::exception& e) {
        v.fail(std::string("domain: ") + e.what());
    }
}

inline void parse_kernel(Validator& v, const json& j, Scenario& sc) {
    v.check_keys(j, "kernel",
                 {"type", "k0", "d0", "orientation", "segments", "raster", "threshold", "window"});
    const auto type = v.get<std::string>(j, "kernel", "type");
    if (type == "uniform") sc.kernel_type = KernelType::Uniform;
    else if (type == "von_mises") sc.kernel_type = KernelType::VonMises;
    else if (type == "bimodal_von_mises") sc.kernel_type = KernelType::BimodalVonMises;
    else if (type == "strict_alignment") sc.kernel_type = KernelType::StrictAlignment;
    else v.fail("kernel: type must be uniform/von_mises/bimodal_von_mises/strict_alignment");

    sc.k0 = v.get<double>(j, "kernel", "k0", std::optional<double>(0.0));
    if (sc.k0 < 0.0) v.fail("kernel: k0 must be >= 0");
    if (j.contains("d0")) {
        sc.d0 = v.get<double>(j, "kernel", "d0");
        if (*sc.d0 < 0.0) v.fail("kernel: d0 must be >= 0");
    }
    const auto orient = v.get<std::string>(j, "kernel", "orientation",
                                           std::optional<std::string>("radial"));
    if (orient == "radial") sc.orientation = Orientation::Radial;
    else if (orient == "circular") sc.orientation = Orientation::Circular;
    else if (orient == "segments") sc.orientation = Orientation::Segments;
    else if (orient == "raster") sc.orientation = Orientation::Raster;
    else v.fail("kernel: orientation must be radial/circular/segments/raster");

    if (sc.orientation == Orientation::Segments) {
        sc.segments_path = v.get<std::string>(j, "kernel", "segments");
        if (!sc.d0) v.fail("kernel: segment orientation requires the cutoff distance d0");
    }
    if (sc.orientation == Orientation::Raster) {
        sc.raster_path = v.get<std::string>(j, "kernel", "raster");
        sc.threshold = v.get<int>(j, "kernel", "threshold", std::optional<int>(128));
        sc.window = v.get<int>(j, "kernel", "window", std::optional<int>(5));
        if (sc.threshold < 0 || sc.threshold > 255)
            v.fail("kernel: threshold must be an integer in [0,255]");
        if (sc.window < 1) v.fail("kernel: window must be >= 1 pixel");
        if (!sc.d0) v.fail("kernel: raster orientation requires the cutoff distance d0");
    }
}

inline void parse_mc(Validator& v, const json& j, Scenario& sc) {
    v.check_keys(j, "mc",
                 {"walkers", "moments", "seed", "event_cap", "starts", "initial_direction",
                  "record_trajectories", "trajectory_count", "threads", "time_grid"});
    sc.walkers = v.get<std::uint64_t>(j, "mc", "walkers", std::optional<std::uint64_t>(10000));
    sc.moments = v.get<int>(j, "mc", "moments", std::optional<int>(2));
    sc.seed = v.get<std::uint64_t>(j, "mc", "seed", std::optional<std::uint64_t>(1));
    sc.event_cap =
        v.get<std::uint64_t>(j, "mc", "event_cap", std::optional<std::uint64_t>(100000000));
    sc.record_trajectories =
        v.get<bool>(j, "mc", "record_trajectories", std::optional<bool>(false));
    sc.trajectory_count = v.get<int>(j, "mc", "trajectory_count", std::optional<int>(3));
    sc.threads = v.get<int>(j, "mc", "threads", std::optional<int>(0));
    if (sc.moments < 1 || sc.moments > 8) v.fail("mc: moments must be in [1,8]");
    if (sc.walkers < 2) v.fail("mc: walkers must be >= 2");
    if (j.contains("starts")) {
        try {
            for (const auto& s : j.at("starts")) {
                if (!s.is_array() || s.size() != 2) {
                    v.fail("mc: each start must be an [x1,x2] pair");
                    continue;
                }
                sc.starts.push_back({{s[0].get<double>(), s[1].get<double>()}, std::nullopt});
            }
        } catch (const json::exception&) {
            v.fail("mc: starts must be an array of [x1,x2] pairs");
        }
    }
    if (j.contains("initial_direction")) {
        const json& d = j.at("initial_direction");
        if (d.is_string() && d.get<std::string>() == "kernel") {
            sc.initial_direction.reset();
        } else if (d.is_array() && d.size() == 2) {
            const Vec2 g{d[0].get<double>(), d[1].get<double>()};
            if (g.norm() == 0.0) v.fail("mc: initial_direction must be nonzero");
            else sc.initial_direction = g.normalized();
        } else {
            v.fail("mc: initial_direction must be \"kernel\" or a [g1,g2] pair");
        }
    }
    if (j.contains("time_grid")) {
        try {
            sc.time_grid = j.at("time_grid").get<std::vector<double>>();
        } catch (const json::exception&) {
            v.fail("mc: time_grid must be an array of numbers");
        }
    }
    if (sc.initial_direction)
        for (auto& s : sc.starts) s.dir = sc.initial_direction;
}

}  // namespace detail

/// Parses and validates a scenario JSON document. `source_dir` anchors
/// relative paths; `hash` is the reproducibility hash of the raw bytes.
inline Scenario parse_scenario(const std::string& text, const std::string& source_dir,
                               const std::string& hash) {
    detail::Validator v;
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ScenarioError({std::string("not valid JSON: ") + e.what()});
    }
    Scenario sc;
    sc.source_dir = source_dir;
    sc.hash_hex = hash;

    v.check_keys(j, "scenario", {"domain", "kernel", "physics", "fd", "mc", "outputs"});
    if (j.contains("domain")) detail::parse_domain(v, j.at("domain"), sc);
    else v.fail("scenario: missing 'domain' block");

    if (j.contains("kernel")) detail::parse_kernel(v, j.at("kernel"), sc);
    else v.fail("scenario: missing 'kernel' block");

    if (j.contains("physics")) {
        const auto& p = j.at("physics");
        v.check_keys(p, "physics", {"mu", "sigma"});
        sc.mu = v.get<double>(p, "physics", "mu");
        sc.sigma = v.get<double>(p, "physics", "sigma");
        if (!(sc.mu > 0.0)) v.fail("physics: mu must be positive");
        if (!(sc.sigma > 0.0)) v.fail("physics: sigma must be positive");
    } else {
        v.fail("scenario: missing 'physics' block");
    }

    if (j.contains("fd")) {
        const auto& f = j.at("fd");
        v.check_keys(f, "fd", {"N1", "N2", "tol"});
        sc.n1 = v.get<int>(f, "fd", "N1", std::optional<int>(257));
        sc.n2 = v.get<int>(f, "fd", "N2", std::optional<int>(257));
        sc.tol = v.get<double>(f, "fd", "tol", std::optional<double>(1e-10));
        if (sc.n1 < 3 || sc.n2 < 3) v.fail("fd: node counts must be >= 3");
        if (!(sc.tol > 0.0)) v.fail("fd: tol must be positive");
    }

    if (j.contains("mc")) detail::parse_mc(v, j.at("mc"), sc);

    if (j.contains("outputs")) {
        const auto& o = j.at("outputs");
        v.check_keys(o, "outputs", {"dir"});
        sc.out_dir = v.get<std::string>(o, "outputs", "dir", std::optional<std::string>("."));
    }

    // referenced files must exist
    if (!sc.segments_path.empty() && !std::filesystem::exists(sc.resolve(sc.segments_path)))
        v.fail("kernel: segment file does not exist: " + sc.resolve(sc.segments_path));
    if (!sc.raster_path.empty() && !std::filesystem::exists(sc.resolve(sc.raster_path)))
        v.fail("kernel: raster file does not exist: " + sc.resolve(sc.raster_path));

    if (!v.errors.empty()) throw ScenarioError(std::move(v.errors));
    return sc;
}

inline Scenario load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open scenario file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();
    char hex[17];
    std::snprintf(hex, sizeof(hex), "%016" PRIx64, fnv1a(text));
    return parse_scenario(text, std::filesystem::path(path).parent_path().string(), hex);
}

}  // namespace mfpt
