#pragma once

// Asymptotic bounds on the asymmetric restricted isometry constants of
// n x N matrices with i.i.d. N(0, 1/n) entries, in the proportional growth
// regime n/N -> delta, k/n -> rho.
//
// lambda_min(delta, rho) and lambda_max(delta, rho) are the zero level sets of
//     delta * psi(lambda, rho) + H(rho * delta)
// on lambda <= 1 - rho and lambda >= 1 + rho respectively, and
//     L(delta, rho) = 1 - lambda_min(delta, rho)
//     U(delta, rho) = min_{nu in [rho, 1]} lambda_max(delta, nu) - 1.

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "cspt/errors.hpp"

namespace cspt {

/// A point (delta, rho) = (n/N, k/n) of the phase space.
///
/// The top edges delta = 1 and rho = 1 are admitted: delta = 1 is the square
/// case n = N, and rho = 1 is reached by the nu-minimization inside U.
class PhasePoint {
public:
    PhasePoint(double delta, double rho) : delta_(delta), rho_(rho) {
        if (!(delta > 0.0 && delta <= 1.0) || !(rho > 0.0 && rho <= 1.0)) {
            std::ostringstream os;
            os << "phase point outside (0,1]^2: delta=" << delta << " rho=" << rho;
            throw DomainError(os.str());
        }
    }

    double delta() const { return delta_; }
    double rho() const { return rho_; }

private:
    double delta_;
    double rho_;
};

/// L(delta, rho) and U(delta, rho) at one phase point.
struct AsymptoticBounds {
    double L;
    double U;
    PhasePoint at;
};

/// Tunables of the implicit-equation solvers. Defaults reproduce the
/// published oversampling constants well inside 0.01%.
struct AsymptoticSettings {
    double residual_tolerance = 1e-10;
    double lambda_floor = 1e-300;  // lower end of the lambda_min bracket
    double lambda_cap = 1e12;      // upper end of the lambda_max expansion
    int nu_grid = 256;             // coarse grid for the U minimization
    double nu_tolerance = 1e-8;    // golden-section width in nu
};

/// Running record of implicit-equation residuals. Not thread safe; give each
/// worker its own and merge.
struct RootAudit {
    long roots = 0;
    double max_residual = 0.0;

    void record(double residual) {
        ++roots;
        max_residual = std::max(max_residual, std::abs(residual));
    }

    void merge(const RootAudit& other) {
        roots += other.roots;
        max_residual = std::max(max_residual, other.max_residual);
    }
};

/// A root of one of the implicit equations with its residual.
struct LambdaRoot {
    double lambda;
    double residual;
};

namespace detail {

// p*log(p) with the continuous extension 0*log(0) = 0.
inline double xlogx(double p) { return p > 0.0 ? p * std::log(p) : 0.0; }

inline std::string at_string(double delta, double rho) {
    std::ostringstream os;
    os.precision(17);
    os << "delta=" << delta << " rho=" << rho;
    return os.str();
}

} // namespace detail

/// Shannon entropy with natural logarithms; H(0) = H(1) = 0.
inline double shannon_entropy(double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw DomainError("shannon_entropy: p outside [0,1]");
    }
    return -detail::xlogx(p) - detail::xlogx(1.0 - p);
}

inline double psi_min(double lambda, double rho) {
    if (!(lambda > 0.0)) throw DomainError("psi_min: lambda must be positive");
    return shannon_entropy(rho) +
           0.5 * ((1.0 - rho) * std::log(lambda) + 1.0 - rho + detail::xlogx(rho) - lambda);
}

inline double psi_max(double lambda, double rho) {
    if (!(lambda > 0.0)) throw DomainError("psi_max: lambda must be positive");
    if (!(rho >= 0.0 && rho <= 1.0)) throw DomainError("psi_max: rho outside [0,1]");
    return 0.5 * ((1.0 + rho) * std::log(lambda) + 1.0 + rho - detail::xlogx(rho) - lambda);
}

namespace detail {

inline double lambda_min_equation(double lambda, double delta, double rho) {
    return delta * psi_min(lambda, rho) + shannon_entropy(rho * delta);
}

inline double lambda_max_equation(double lambda, double delta, double rho) {
    return delta * psi_max(lambda, rho) + shannon_entropy(rho * delta);
}

// Bisection on [lo, hi] where f(lo) and f(hi) have opposite signs. Runs until
// the bracket collapses to adjacent doubles or f vanishes.
template <class F>
LambdaRoot bisect(F&& f, double lo, double hi, double f_lo) {
    double best = lo;
    double best_f = f_lo;
    for (int it = 0; it < 2000; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (!(mid > lo && mid < hi)) break;
        const double f_mid = f(mid);
        if (std::abs(f_mid) < std::abs(best_f)) {
            best = mid;
            best_f = f_mid;
        }
        if (f_mid == 0.0) break;
        if ((f_mid < 0.0) == (f_lo < 0.0)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    const double f_hi = f(hi);
    if (std::abs(f_hi) < std::abs(best_f)) {
        best = hi;
        best_f = f_hi;
    }
    return {best, best_f};
}

} // namespace detail

/// Root of delta*psi_min(lambda, rho) + H(rho*delta) = 0 on (0, 1 - rho].
///
/// The equation is increasing in lambda on that interval and positive at
/// lambda = 1 - rho, so the root is unique when the bracket changes sign.
inline LambdaRoot solve_lambda_min_root(const PhasePoint& at,
                                        const AsymptoticSettings& s = {}) {
    const double delta = at.delta();
    const double rho = at.rho();
    if (!(rho < 1.0)) {
        throw DomainError("solve_lambda_min: rho must be < 1 (" +
                          detail::at_string(delta, rho) + ")");
    }
    auto f = [&](double lambda) { return detail::lambda_min_equation(lambda, delta, rho); };

    const double hi = 1.0 - rho;
    const double f_hi = f(hi);
    if (!(f_hi > 0.0)) {
        throw NoRootError("solve_lambda_min: equation not positive at 1-rho (" +
                          detail::at_string(delta, rho) + ")");
    }
    double upper = hi;
    double lo = 0.5 * hi;
    double f_lo = f(lo);
    while (f_lo > 0.0 && lo > s.lambda_floor) {
        upper = lo;
        lo = std::max(lo * 1e-2, s.lambda_floor);
        f_lo = f(lo);
    }
    if (f_lo > 0.0) {
        std::ostringstream os;
        os << "solve_lambda_min: no sign change on (" << s.lambda_floor << ", 1-rho] at "
           << detail::at_string(delta, rho);
        throw NoRootError(os.str());
    }
    const LambdaRoot root = detail::bisect(f, lo, upper, f_lo);
    if (!(std::abs(root.residual) <= s.residual_tolerance)) {
        throw NoRootError("solve_lambda_min: residual above tolerance at " +
                          detail::at_string(delta, rho));
    }
    return root;
}

/// Root of delta*psi_max(lambda, rho) + H(rho*delta) = 0 on [1 + rho, inf).
inline LambdaRoot solve_lambda_max_root(const PhasePoint& at,
                                        const AsymptoticSettings& s = {}) {
    const double delta = at.delta();
    const double rho = at.rho();
    auto f = [&](double lambda) { return detail::lambda_max_equation(lambda, delta, rho); };

    const double lo = 1.0 + rho;
    const double f_lo = f(lo);
    if (!(f_lo > 0.0)) {
        throw NoRootError("solve_lambda_max: equation not positive at 1+rho (" +
                          detail::at_string(delta, rho) + ")");
    }
    double left = lo;
    double f_left = f_lo;
    double hi = 2.0 * lo;
    for (double f_hi = f(hi); f_hi > 0.0; f_hi = f(hi)) {
        if (hi >= s.lambda_cap) {
            std::ostringstream os;
            os << "solve_lambda_max: no sign change below cap " << s.lambda_cap << " at "
               << detail::at_string(delta, rho);
            throw NoRootError(os.str());
        }
        left = hi;
        f_left = f_hi;
        hi *= 2.0;
    }
    const LambdaRoot root = detail::bisect(f, left, hi, f_left);
    if (!(std::abs(root.residual) <= s.residual_tolerance)) {
        throw NoRootError("solve_lambda_max: residual above tolerance at " +
                          detail::at_string(delta, rho));
    }
    return root;
}

inline double solve_lambda_min(const PhasePoint& at, const AsymptoticSettings& s = {}) {
    return solve_lambda_min_root(at, s).lambda;
}

inline double solve_lambda_max(const PhasePoint& at, const AsymptoticSettings& s = {}) {
    return solve_lambda_max_root(at, s).lambda;
}

/// L(delta, rho) = 1 - lambda_min(delta, rho).
inline double bound_L(const PhasePoint& at, const AsymptoticSettings& s = {},
                      RootAudit* audit = nullptr) {
    const LambdaRoot root = solve_lambda_min_root(at, s);
    if (audit) audit->record(root.residual);
    return 1.0 - root.lambda;
}

/// U(delta, rho) = min over nu in [rho, 1] of lambda_max(delta, nu) - 1.
///
/// lambda_max is not monotone in nu for large delta, so the minimum is located
/// on a uniform grid first and then refined by golden-section search inside
/// the two cells adjacent to the best grid node.
inline double bound_U(const PhasePoint& at, const AsymptoticSettings& s = {},
                      RootAudit* audit = nullptr) {
    const double delta = at.delta();
    const double rho = at.rho();
    auto lambda_at = [&](double nu) {
        const LambdaRoot root = solve_lambda_max_root(PhasePoint(delta, std::min(nu, 1.0)), s);
        if (audit) audit->record(root.residual);
        return root.lambda;
    };

    const int m = std::max(s.nu_grid, 2);
    const double h = (1.0 - rho) / (m - 1);
    if (!(h > 0.0)) return lambda_at(rho) - 1.0;

    int best_i = 0;
    double best = lambda_at(rho);
    for (int i = 1; i < m; ++i) {
        const double nu = i + 1 == m ? 1.0 : rho + i * h;
        const double v = lambda_at(nu);
        if (v < best) {
            best = v;
            best_i = i;
        }
    }

    double a = rho + std::max(best_i - 1, 0) * h;
    double b = std::min(rho + std::min(best_i + 1, m - 1) * h, 1.0);
    const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = lambda_at(c);
    double fd = lambda_at(d);
    while (b - a > s.nu_tolerance) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = lambda_at(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = lambda_at(d);
        }
    }
    best = std::min({best, fc, fd});
    return best - 1.0;
}

inline AsymptoticBounds asymptotic_bounds(const PhasePoint& at,
                                          const AsymptoticSettings& s = {},
                                          RootAudit* audit = nullptr) {
    return {bound_L(at, s, audit), bound_U(at, s, audit), at};
}

} // namespace cspt
