#pragma once

// Phase-transition curves rho_S(delta): the unique rho with mu(delta, rho) = 1,
// and more generally level sets of mu or of the stability ratio xi/(1-mu).
// Both functions are strictly increasing in rho wherever defined, so a
// bracketing bisection in rho finds the level set.

#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cspt/errors.hpp"
#include "cspt/recovery_factors.hpp"
#include "cspt/rip_asymptotic.hpp"

namespace cspt {

enum class LevelKind { mu, stability };

inline std::string_view to_string(LevelKind k) {
    return k == LevelKind::mu ? "mu-level" : "stability-level";
}

struct TransitionOptions {
    LevelKind kind = LevelKind::mu;
    double rho_lo = 1e-12;
    double level_tolerance = 1e-6;
    double epsilon = 0.0;  // evaluate at (1 + epsilon) rho
    AsymptoticSettings settings{};
};

struct TransitionPoint {
    double delta = 0.0;
    double rho_star = std::numeric_limits<double>::quiet_NaN();
    double residual = std::numeric_limits<double>::quiet_NaN();  // level - target
    double oversampling = std::numeric_limits<double>::quiet_NaN();
    RootAudit roots{};
    std::optional<std::string> error;
};

struct TransitionTable {
    AlgorithmId algorithm = AlgorithmId::cosamp;
    LevelKind kind = LevelKind::mu;
    double target = 1.0;
    std::vector<TransitionPoint> points;

    RootAudit roots() const {
        RootAudit all;
        for (const auto& p : points) all.merge(p.roots);
        return all;
    }

    bool all_ok() const {
        for (const auto& p : points) {
            if (p.error) return false;
        }
        return true;
    }
};

/// Largest sparsity multiple read by the algorithm's factor formulas.
inline int max_multiple(AlgorithmId alg) {
    switch (alg) {
    case AlgorithmId::cosamp: return 4;
    case AlgorithmId::sp: return 3;
    case AlgorithmId::iht: return 3;
    case AlgorithmId::l1: return 2;
    case AlgorithmId::romp: break;
    }
    throw DomainError("romp has no asymptotic transition (its threshold depends on n)");
}

/// mu(delta, rho) or xi/(1-mu)(delta, rho); the ratio is +inf once mu >= 1.
inline double level_value(AlgorithmId alg, double delta, double rho,
                          const TransitionOptions& opt = {}, RootAudit* audit = nullptr) {
    max_multiple(alg);
    const AsymptoticProvider b(delta, rho, opt.settings, audit, opt.epsilon);
    const FactorSet f = factors(alg, b);
    if (opt.kind == LevelKind::mu) return f.mu;
    if (!(f.mu < 1.0)) return std::numeric_limits<double>::infinity();
    return stability_ratio(f);
}

namespace detail {

struct Probe {
    bool ok;
    double value;
};

inline Probe probe(AlgorithmId alg, double delta, double rho, const TransitionOptions& opt,
                   RootAudit* audit) {
    try {
        const double v = level_value(alg, delta, rho, opt, audit);
        if (std::isnan(v)) return {false, v};
        if (opt.kind == LevelKind::mu && !std::isfinite(v)) return {false, v};
        return {true, v};
    } catch (const DomainError&) {
        return {false, std::numeric_limits<double>::quiet_NaN()};
    }
}

} // namespace detail

/// The rho at which the level function equals `target`.
///
/// The upper end of the bracket starts just below 1/max_multiple and shrinks
/// geometrically until the factors are defined there; the lower end is
/// opt.rho_lo. `hint`, when given, is tried first as the centre of a narrow
/// bracket (warm start along a delta sweep).
inline TransitionPoint rho_star_point(AlgorithmId alg, double delta, double target = 1.0,
                                      const TransitionOptions& opt = {},
                                      std::optional<double> hint = std::nullopt) {
    if (!(target > 0.0)) throw DomainError("rho_star: target must be positive");
    PhasePoint(delta, 0.5);
    TransitionPoint out;
    out.delta = delta;
    RootAudit* audit = &out.roots;
    const double cap = (1.0 - 1e-9) / max_multiple(alg) / (1.0 + opt.epsilon);

    double lo = opt.rho_lo, hi = cap;
    double f_lo = 0.0, f_hi = 0.0;
    bool bracketed = false;

    if (hint && *hint > opt.rho_lo && *hint < cap) {
        const double a = std::max(*hint / 1.5, opt.rho_lo);
        const double b = std::min(*hint * 1.5, cap);
        const auto pa = detail::probe(alg, delta, a, opt, audit);
        const auto pb = detail::probe(alg, delta, b, opt, audit);
        if (pa.ok && pb.ok && pa.value < target && pb.value >= target) {
            lo = a;
            hi = b;
            f_lo = pa.value;
            f_hi = pb.value;
            bracketed = true;
        }
    }

    if (!bracketed) {
        detail::Probe ph = detail::probe(alg, delta, hi, opt, audit);
        while (!ph.ok) {
            hi *= 0.9;
            if (hi <= opt.rho_lo) {
                std::ostringstream os;
                os << "rho_star: factors undefined on all of (" << opt.rho_lo << ", " << cap
                   << ") at delta=" << delta;
                throw DomainError(os.str());
            }
            ph = detail::probe(alg, delta, hi, opt, audit);
        }
        if (ph.value < target) {
            std::ostringstream os;
            os.precision(17);
            os << "rho_star: domain exhausted, level " << ph.value << " < target " << target
               << " at the largest admissible rho=" << hi << " (delta=" << delta << ")";
            throw DomainError(os.str());
        }
        const detail::Probe pl = detail::probe(alg, delta, lo, opt, audit);
        if (!pl.ok || !(pl.value < target)) {
            std::ostringstream os;
            os.precision(17);
            os << "rho_star: level at rho_lo=" << lo << " is not below target " << target
               << " (delta=" << delta << ")";
            throw DomainError(os.str());
        }
        f_lo = pl.value;
        f_hi = ph.value;
    }

    // invariant: f(lo) < target <= f(hi)
    double best_rho = std::isfinite(f_hi) && std::abs(f_hi - target) < std::abs(f_lo - target)
                          ? hi
                          : lo;
    double best_res = (best_rho == hi ? f_hi : f_lo) - target;
    const double stop = opt.level_tolerance * 1e-3;
    for (int it = 0; it < 400 && std::abs(best_res) > stop; ++it) {
        const double mid = hi > 4.0 * lo ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
        if (!(mid > lo && mid < hi)) break;
        const detail::Probe pm = detail::probe(alg, delta, mid, opt, audit);
        // undefined inside the bracket counts as above the target
        const double v = pm.ok ? pm.value : std::numeric_limits<double>::infinity();
        if (std::abs(v - target) < std::abs(best_res)) {
            best_rho = mid;
            best_res = v - target;
        }
        if (v < target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    out.rho_star = best_rho;
    out.residual = best_res;
    out.oversampling = 1.0 / best_rho;
    if (!(std::abs(best_res) <= opt.level_tolerance)) {
        std::ostringstream os;
        os.precision(17);
        os << "rho_star: level residual " << best_res << " above tolerance at delta=" << delta;
        throw DomainError(os.str());
    }
    return out;
}

inline double rho_star(AlgorithmId alg, double delta, double target = 1.0,
                       const TransitionOptions& opt = {}) {
    return rho_star_point(alg, delta, target, opt).rho_star;
}

namespace detail {

inline void check_grid(const std::vector<double>& deltas) {
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        if (!(deltas[i] > 0.0 && deltas[i] <= 1.0)) throw DomainError("delta grid outside (0,1]");
        if (i > 0 && !(deltas[i] > deltas[i - 1])) {
            throw DomainError("delta grid must be strictly increasing");
        }
    }
}

inline TransitionTable sweep(AlgorithmId alg, const std::vector<double>& deltas, double target,
                             const TransitionOptions& opt) {
    check_grid(deltas);
    TransitionTable table;
    table.algorithm = alg;
    table.kind = opt.kind;
    table.target = target;
    double hint = std::numeric_limits<double>::quiet_NaN();
    for (double delta : deltas) {
        try {
            table.points.push_back(rho_star_point(
                alg, delta, target, opt,
                std::isnan(hint) ? std::nullopt : std::optional<double>(hint)));
            hint = table.points.back().rho_star;
        } catch (const Error& e) {
            TransitionPoint p;
            p.delta = delta;
            p.error = e.what();
            table.points.push_back(p);
            hint = std::numeric_limits<double>::quiet_NaN();
        }
    }
    return table;
}

} // namespace detail

/// rho at which mu(delta, .) = target for each delta; warm-started along the
/// grid. Per-point failures are recorded in the table.
inline TransitionTable transition_curve(AlgorithmId alg, const std::vector<double>& deltas,
                                        double target = 1.0, TransitionOptions opt = {}) {
    opt.kind = LevelKind::mu;
    return detail::sweep(alg, deltas, target, opt);
}

/// rho at which xi/(1-mu)(delta, .) = level for each delta.
inline TransitionTable stability_level_curve(AlgorithmId alg, const std::vector<double>& deltas,
                                             double level, TransitionOptions opt = {}) {
    opt.kind = LevelKind::stability;
    return detail::sweep(alg, deltas, level, opt);
}

/// n points log-spaced on [lo, hi], endpoints exact.
inline std::vector<double> logspace(double lo, double hi, int n) {
    std::vector<double> out;
    if (n <= 0) return out;
    if (n == 1) return {hi};
    const double a = std::log(lo), b = std::log(hi);
    for (int i = 0; i < n; ++i) {
        out.push_back(i == 0 ? lo : i + 1 == n ? hi : std::exp(a + (b - a) * i / (n - 1)));
    }
    return out;
}

inline std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> out;
    if (n <= 0) return out;
    if (n == 1) return {hi};
    for (int i = 0; i < n; ++i) out.push_back(i + 1 == n ? hi : lo + (hi - lo) * i / (n - 1));
    return out;
}

/// Default delta grid: 50 log-spaced points on [1e-3, 1].
inline std::vector<double> default_delta_grid() { return logspace(1e-3, 1.0, 50); }

} // namespace cspt
