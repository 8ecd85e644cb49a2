#pragma once
// Closed-form radial mean first passage times on the disk and annulus for
// the anisotropic parabolic-limit equation
//
//   (1+alpha(r))/(2r) (r T')' - (alpha(r)/r) T' = -1/(2D),   D = sigma^2/(2 mu),
//
// plus the quadrature path for radially varying alpha(r):
//
//   T(r) = -r^2/(4D) + H1 + H2 * Int exp[-Int (1/s)(1-alpha)/(1+alpha) ds] d eta.
//
// Constant-alpha solutions involve r^beta with beta = 2 alpha/(1+alpha) and
// the exponent beta/alpha = 2/(1+alpha). All exponents are evaluated through
// expm1 of log-space differences: this is exact in the alpha -> 0 limit and
// degrades gracefully to IEEE +inf when alpha -> -1 pushes values past the
// double range (the inner-exit MFPT genuinely diverges there).

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "mfpt/domain.hpp"
#include "mfpt/quadrature.hpp"

namespace mfpt {

enum class RadialLimit { Radial, Isotropic, Circular };

/// Exit time from a disk of radius R0; independent of the anisotropy
/// indicator, which is why alpha is absent from the signature.
template <class Real = double>
Real disk_exit_time(Real r, Real R0, Real D) {
    if (!(D > 0)) throw std::invalid_argument("disk_exit_time: D must be positive");
    if (!(r >= 0 && r <= R0)) throw std::invalid_argument("disk_exit_time: r outside [0,R0]");
    return (R0 * R0 - r * r) / (4 * D);
}

namespace detail {

/// expm1(b*z)/b, continuous through b = 0 (limit z).
template <class Real>
Real expm1_over(Real b, Real z) {
    const Real bz = b * z;
    if (std::abs(bz) < Real(1e-280)) return z;
    return std::expm1(bz) / b;
}

/// exp(e1) - exp(e2) without cancellation and without spurious NaN when one
/// exponent overflows or underflows; the result may be IEEE +/-inf.
template <class Real>
Real diff_exp(Real e1, Real e2) {
    if (e1 == e2) return Real(0);
    if (e1 > e2) return -std::exp(e1) * std::expm1(e2 - e1);
    return std::exp(e2) * std::expm1(e1 - e2);
}

template <class Real>
void check_annulus_args(Real r, Real rho, Real R0, Real D) {
    if (!(D > 0)) throw std::invalid_argument("annulus: D must be positive");
    if (!(rho > 0 && rho < R0)) throw std::invalid_argument("annulus: need 0 < rho < R0");
    if (!(r >= rho && r <= R0)) throw std::invalid_argument("annulus: r outside [rho,R0]");
}

}  // namespace detail

/// Annulus MFPT for constant alpha in (-1,1) and the chosen exit set.
/// Below |alpha| = 1e-8 the logarithmic alpha->0 limit forms are used.
template <class Real = double>
Real annulus_mfpt(Real r, Real rho, Real R0, Real D, Real alpha, AnnulusExit exit) {
    detail::check_annulus_args(r, rho, R0, D);
    if (!(alpha > -1 && alpha < 1))
        throw std::invalid_argument("annulus_mfpt: alpha must lie in (-1,1)");
    const Real Lr = std::log(r), Lrho = std::log(rho), LR = std::log(R0);
    if (std::abs(alpha) < Real(1e-8)) {
        switch (exit) {
            case AnnulusExit::Inner:
                return (rho * rho - r * r) / (4 * D) + R0 * R0 / (2 * D) * (Lr - Lrho);
            case AnnulusExit::Outer:
                return (R0 * R0 - r * r) / (4 * D) + rho * rho / (2 * D) * (Lr - LR);
            case AnnulusExit::Both:
                return ((R0 * R0 - rho * rho) * Lr - (r * r - rho * rho) * LR +
                        (r * r - R0 * R0) * Lrho) /
                       (4 * D * (LR - Lrho));
        }
        throw std::logic_error("annulus_mfpt: bad exit");
    }
    const Real beta = 2 * alpha / (1 + alpha);
    const Real exp_ratio = 2 / (1 + alpha);  // beta/alpha without the division
    switch (exit) {
        case AnnulusExit::Inner: {
            // (1/(2 beta D)) R0^(beta/alpha) (r^beta - rho^beta)
            const Real anisot =
                detail::diff_exp(exp_ratio * LR + beta * Lr, exp_ratio * LR + beta * Lrho) / beta;
            return (rho * rho - r * r) / (4 * D) + anisot / (2 * D);
        }
        case AnnulusExit::Outer: {
            // (1/(2 beta D)) rho^(beta/alpha) (r^beta - R0^beta)
            const Real anisot =
                detail::diff_exp(exp_ratio * Lrho + beta * Lr, exp_ratio * Lrho + beta * LR) / beta;
            return (R0 * R0 - r * r) / (4 * D) + anisot / (2 * D);
        }
        case AnnulusExit::Both: {
            // Anchored at rho^beta (the dominant power when beta < 0):
            //   T + r^2/(4D) = [rho^2 (E_R - E_r) + R0^2 E_r] / (4 D E_R),
            // with E_x = expm1(beta (log x - log rho)). Finite for every
            // alpha in (-1,1); the expm1 form is exact through alpha -> 0.
            const Real er = std::expm1(beta * (Lr - Lrho));
            const Real eR = std::expm1(beta * (LR - Lrho));
            return -r * r / (4 * D) + (rho * rho * (eR - er) + R0 * R0 * er) / (4 * D * eR);
        }
    }
    throw std::logic_error("annulus_mfpt: bad exit");
}

/// Limit-regime annulus values: purely radial, isotropic, purely circular.
/// Circular + inner exit returns +inf for r > rho (trapped walker).
template <class Real = double>
Real annulus_limit(Real r, Real rho, Real R0, Real D, RadialLimit mode, AnnulusExit exit) {
    detail::check_annulus_args(r, rho, R0, D);
    const Real inf = std::numeric_limits<Real>::infinity();
    switch (exit) {
        case AnnulusExit::Inner:
            switch (mode) {
                case RadialLimit::Radial:
                    return (rho * rho - r * r) / (4 * D) + R0 / (2 * D) * (r - rho);
                case RadialLimit::Isotropic:
                    return (rho * rho - r * r) / (4 * D) + R0 * R0 / (2 * D) * std::log(r / rho);
                case RadialLimit::Circular:
                    return r > rho ? inf : Real(0);
            }
            break;
        case AnnulusExit::Outer:
            switch (mode) {
                case RadialLimit::Radial:
                    return (R0 * R0 - r * r) / (4 * D) + rho / (2 * D) * (r - R0);
                case RadialLimit::Isotropic:
                    return (R0 * R0 - r * r) / (4 * D) + rho * rho / (2 * D) * std::log(r / R0);
                case RadialLimit::Circular:
                    return (R0 * R0 - r * r) / (4 * D);
            }
            break;
        case AnnulusExit::Both:
            switch (mode) {
                case RadialLimit::Radial:
                    return (rho - r) * (r - R0) / (4 * D);
                case RadialLimit::Isotropic:
                    return annulus_mfpt<Real>(r, rho, R0, D, Real(0), AnnulusExit::Both);
                case RadialLimit::Circular:
                    return r > rho ? (R0 * R0 - r * r) / (4 * D) : Real(0);
            }
            break;
    }
    throw std::invalid_argument("annulus_limit: invalid mode/exit combination");
}

/// A radially symmetric MFPT problem. beta = 2 alpha/(1+alpha) is always
/// derived on the fly, never stored.
struct RadialProblem {
    enum class Geometry { Disk, Annulus };

    Geometry geometry{Geometry::Disk};
    double rho{0.0};  ///< inner radius; annulus only
    double R0{1.0};
    AnnulusExit exit{AnnulusExit::Outer};
    double D{1.0};
    std::function<double(double)> alpha = [](double) { return 0.0; };

    static RadialProblem disk(double R0, double D, double alpha_const = 0.0) {
        RadialProblem p;
        p.geometry = Geometry::Disk;
        p.R0 = R0;
        p.exit = AnnulusExit::Outer;
        p.D = D;
        p.alpha = [alpha_const](double) { return alpha_const; };
        p.validate();
        return p;
    }

    static RadialProblem annulus(double rho, double R0, double D, AnnulusExit exit,
                                 std::function<double(double)> alpha_fn) {
        RadialProblem p;
        p.geometry = Geometry::Annulus;
        p.rho = rho;
        p.R0 = R0;
        p.exit = exit;
        p.D = D;
        p.alpha = std::move(alpha_fn);
        p.validate();
        return p;
    }

    void validate() const {
        if (!(D > 0)) throw std::invalid_argument("radial problem: D must be positive");
        if (!(R0 > 0)) throw std::invalid_argument("radial problem: R0 must be positive");
        if (geometry == Geometry::Disk && exit != AnnulusExit::Outer)
            throw std::invalid_argument("radial problem: a disk admits outer exit only");
        if (geometry == Geometry::Annulus && !(rho > 0 && rho < R0))
            throw std::invalid_argument("radial problem: need 0 < rho < R0");
    }

    double r_lo() const { return geometry == Geometry::Disk ? 0.0 : rho; }
};

// ---------------------------------------------------------------------------
// Quadrature path for radially varying alpha(r).

struct RadialBC {
    enum class Kind { Value, ZeroDerivative };
    Kind kind;
    double r;
    double value{0.0};  ///< used by Kind::Value only

    static RadialBC absorbing(double r) { return {Kind::Value, r, 0.0}; }
    static RadialBC reflecting(double r) { return {Kind::ZeroDerivative, r, 0.0}; }
};

/// General solution route: nested adaptive quadrature for the integrating
/// factor and the outer integral, then a 2x2 solve for H1, H2 from the two
/// boundary conditions. Lower integration limits sit at `anchor` (the
/// constants get absorbed into H1, H2).
class RadialQuadratureSolver {
  public:
    RadialQuadratureSolver(std::function<double(double)> alpha, double D, RadialBC lo,
                           RadialBC hi, double anchor, double tol = 1e-10)
        : alpha_(std::move(alpha)), D_(D), anchor_(anchor), tol_(tol) {
        if (!(D_ > 0)) throw std::invalid_argument("radial quadrature: D must be positive");
        if (lo.kind == RadialBC::Kind::ZeroDerivative && hi.kind == RadialBC::Kind::ZeroDerivative)
            throw std::invalid_argument("radial quadrature: two zero-derivative conditions are singular");
        // Row for each BC in the unknowns (H1, H2).
        double m[2][2], rhs[2];
        const RadialBC bcs[2] = {lo, hi};
        for (int i = 0; i < 2; ++i) {
            const RadialBC& bc = bcs[i];
            if (bc.kind == RadialBC::Kind::Value) {
                m[i][0] = 1.0;
                m[i][1] = big_g(bc.r);
                rhs[i] = bc.r * bc.r / (4.0 * D_) + bc.value;
            } else if (bc.r == 0.0) {
                // Regularity at the origin of a disk: the integrating factor
                // diverges, forcing H2 = 0.
                m[i][0] = 0.0;
                m[i][1] = 1.0;
                rhs[i] = 0.0;
            } else {
                m[i][0] = 0.0;
                m[i][1] = std::exp(-w(bc.r));
                rhs[i] = bc.r / (2.0 * D_);
            }
        }
        const double det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        if (det == 0.0 || !std::isfinite(det))
            throw std::runtime_error("radial quadrature: singular boundary-condition system");
        h1_ = (rhs[0] * m[1][1] - rhs[1] * m[0][1]) / det;
        h2_ = (m[0][0] * rhs[1] - m[1][0] * rhs[0]) / det;
    }

    double operator()(double r) const {
        // disk problems force H2 = 0; G may not even converge there
        if (h2_ == 0.0) return -r * r / (4.0 * D_) + h1_;
        return -r * r / (4.0 * D_) + h1_ + h2_ * big_g(r);
    }

    double derivative(double r) const { return -r / (2.0 * D_) + h2_ * std::exp(-w(r)); }

  private:
    /// W(eta) = Int_anchor^eta (1/s)(1-alpha)/(1+alpha) ds
    double w(double eta) const {
        return integrate(
            [&](double s) {
                const double a = alpha_(s);
                return (1.0 - a) / ((1.0 + a) * s);
            },
            anchor_, eta, 1e-12);
    }

    /// G(r) = Int_anchor^r exp(-W(eta)) d eta, refined to relative accuracy.
    double big_g(double r) const {
        const auto f = [&](double eta) { return std::exp(-w(eta)); };
        double g = integrate(f, anchor_, r, tol_);
        const double refined_tol = 1e-12 * std::abs(g);
        if (refined_tol > 0.0 && refined_tol < tol_) g = integrate(f, anchor_, r, refined_tol);
        return g;
    }

    std::function<double(double)> alpha_;
    double D_;
    double anchor_;
    double tol_;
    double h1_{0.0};
    double h2_{0.0};
};

/// Annulus MFPT with radially varying alpha(r) via the quadrature route.
inline double annulus_mfpt_quadrature(double r, double rho, double R0, double D,
                                      const std::function<double(double)>& alpha,
                                      AnnulusExit exit, double tol = 1e-10) {
    detail::check_annulus_args(r, rho, R0, D);
    RadialBC lo = exit != AnnulusExit::Outer ? RadialBC::absorbing(rho) : RadialBC::reflecting(rho);
    RadialBC hi = exit != AnnulusExit::Inner ? RadialBC::absorbing(R0) : RadialBC::reflecting(R0);
    return RadialQuadratureSolver(alpha, D, lo, hi, rho, tol)(r);
}

/// Disk MFPT via the quadrature route (regularity at the origin).
inline double disk_mfpt_quadrature(double r, double R0, double D,
                                   const std::function<double(double)>& alpha,
                                   double tol = 1e-10) {
    if (!(r >= 0 && r <= R0)) throw std::invalid_argument("disk quadrature: r outside [0,R0]");
    return RadialQuadratureSolver(alpha, D, RadialBC::reflecting(0.0), RadialBC::absorbing(R0),
                                  0.5 * R0, tol)(r);
}

/// Quadrature route for a RadialProblem.
inline double radial_mfpt_quadrature(const RadialProblem& p, double r, double tol = 1e-10) {
    p.validate();
    if (p.geometry == RadialProblem::Geometry::Disk)
        return disk_mfpt_quadrature(r, p.R0, p.D, p.alpha, tol);
    return annulus_mfpt_quadrature(r, p.rho, p.R0, p.D, p.alpha, p.exit, tol);
}

}  // namespace mfpt
