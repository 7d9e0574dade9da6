#pragma once

// CoSaMP, Subspace Pursuit and Iterative Hard Thresholding.
//
// The exact-arithmetic stopping rule ||y^l|| = 0 becomes ||y^l|| <= tol with
// tol = 1e-10 ||y|| by default. For noisy data a run also halts when the
// residual stops shrinking (||y^l|| > stall_factor ||y^{l-1}||) or after
// max_iterations.

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "cspt/errors.hpp"
#include "cspt/linalg.hpp"

namespace cspt {

enum class Termination { residual_zero, stalled, max_iterations };

inline std::string_view to_string(Termination t) {
    switch (t) {
    case Termination::residual_zero: return "residual-zero";
    case Termination::stalled: return "stalled";
    case Termination::max_iterations: return "max-iterations";
    }
    return "?";
}

struct RecoveryOptions {
    std::optional<int> max_iterations;        // default min(100 k, 3000)
    std::optional<double> residual_tolerance; // default 1e-10 ||y||
    double stall_factor = 0.999;
    std::optional<double> omega;              // IHT step, default 0.65
    bool debias = true;                       // IHT final least squares
    bool record_iterates = false;
};

inline constexpr double kDefaultIhtOmega = 0.65;

struct RecoveryResult {
    Vector estimate;
    Support support;                 // ascending
    int iterations = 0;
    std::vector<double> residual_trace;
    Termination termination = Termination::max_iterations;
    std::vector<Vector> iterates;    // x^1, x^2, ... when record_iterates
    std::vector<std::string> warnings;
};

namespace detail {

struct Settings {
    int max_iterations;
    double tolerance;
    double stall_factor;
};

inline Settings resolve(const RecoveryOptions& opt, Index k, const Vector& y) {
    Settings s{};
    s.max_iterations = opt.max_iterations ? *opt.max_iterations
                                          : static_cast<int>(std::min<Index>(100 * k, 3000));
    if (s.max_iterations < 1) throw DomainError("max_iterations must be >= 1");
    s.tolerance = opt.residual_tolerance ? *opt.residual_tolerance : 1e-10 * y.norm();
    if (s.tolerance < 0.0) throw DomainError("residual_tolerance must be >= 0");
    if (!(opt.stall_factor > 0.0 && opt.stall_factor <= 1.0)) {
        throw DomainError("stall_factor outside (0,1]");
    }
    s.stall_factor = opt.stall_factor;
    return s;
}

inline void check_problem(const Matrix& a, const Vector& y, Index k) {
    if (y.size() != a.rows()) {
        std::ostringstream os;
        os << "dimension mismatch: A is " << a.rows() << "x" << a.cols() << ", y has " << y.size()
           << " entries";
        throw DimensionError(os.str());
    }
    if (k < 1 || k > a.cols() || k > a.rows()) {
        std::ostringstream os;
        os << "sparsity k=" << k << " outside [1, min(n, N)] for A " << a.rows() << "x"
           << a.cols();
        throw DimensionError(os.str());
    }
}

inline Support sorted(Support s) {
    std::sort(s.begin(), s.end());
    return s;
}

// T_prev ∪ extra, keeping T_prev order first, without duplicates, at most `cap`.
inline Support merge_support(const Support& prev, const Support& extra, Index cap) {
    Support out;
    out.reserve(prev.size() + extra.size());
    for (Index i : prev) {
        if (static_cast<Index>(out.size()) < cap) out.push_back(i);
    }
    for (Index i : extra) {
        if (static_cast<Index>(out.size()) >= cap) break;
        if (std::find(out.begin(), out.end(), i) == out.end()) out.push_back(i);
    }
    return out;
}

// Returns true and sets `why` when the run should stop after this residual.
inline bool should_stop(const Settings& s, const std::vector<double>& trace, double previous,
                        Termination& why) {
    const double r = trace.back();
    if (r <= s.tolerance) {
        why = Termination::residual_zero;
        return true;
    }
    if (r > s.stall_factor * previous) {
        why = Termination::stalled;
        return true;
    }
    if (static_cast<int>(trace.size()) >= s.max_iterations) {
        why = Termination::max_iterations;
        return true;
    }
    return false;
}

// Entries of `coef` (aligned with `cols`) restricted to the top-k by magnitude.
inline Support top_k_of(const Support& cols, const Vector& coef, Index k) {
    const Support local = hard_threshold_support(coef, std::min<Index>(k, coef.size()));
    Support out;
    out.reserve(local.size());
    for (Index j : local) out.push_back(cols[j]);
    return out;
}

inline Vector restrict_to(const Vector& x, const Support& s) {
    Vector out = Vector::Zero(x.size());
    for (Index i : s) out(i) = x(i);
    return out;
}

} // namespace detail

/// CoSaMP: merge 2k proxy indices into the support, least squares on the
/// merged set, prune to k, residual y - A_T x_T.
inline RecoveryResult cosamp(const Matrix& a, const Vector& y, Index k,
                             const RecoveryOptions& opt = {}) {
    detail::check_problem(a, y, k);
    const detail::Settings s = detail::resolve(opt, k, y);
    const Index N = a.cols();
    RecoveryResult res;
    res.estimate = Vector::Zero(N);
    if (4 * k > a.rows()) {
        res.warnings.push_back("4k exceeds n; the merged least-squares support is clamped to n");
    }
    if (y.norm() <= s.tolerance) {
        res.termination = Termination::residual_zero;
        return res;
    }

    Support T;
    Vector residual = y;
    double previous = y.norm();
    Vector x_hat = Vector::Zero(N);
    for (;;) {
        const Vector proxy = a.transpose() * residual;
        const Support fresh = hard_threshold_support(proxy, std::min<Index>(2 * k, N));
        const Support merged = detail::merge_support(T, fresh, a.rows());
        const Vector coef = least_squares_on_support(a, merged, y);
        T = detail::top_k_of(merged, coef, k);
        x_hat = detail::restrict_to(scatter(N, merged, coef), T);
        residual = y - a * x_hat;
        res.residual_trace.push_back(residual.norm());
        if (opt.record_iterates) res.iterates.push_back(x_hat);
        if (detail::should_stop(s, res.residual_trace, previous, res.termination)) break;
        previous = res.residual_trace.back();
    }
    res.iterations = static_cast<int>(res.residual_trace.size());
    res.support = detail::sorted(T);
    res.estimate = x_hat;
    return res;
}

/// Subspace Pursuit: merge k proxy indices, least squares on the merged set,
/// prune to k, residual by projection onto span(A_T).
inline RecoveryResult subspace_pursuit(const Matrix& a, const Vector& y, Index k,
                                       const RecoveryOptions& opt = {}) {
    detail::check_problem(a, y, k);
    const detail::Settings s = detail::resolve(opt, k, y);
    const Index N = a.cols();
    RecoveryResult res;
    res.estimate = Vector::Zero(N);
    if (3 * k > a.rows()) res.warnings.push_back("3k exceeds n");
    if (y.norm() <= s.tolerance) {
        res.termination = Termination::residual_zero;
        return res;
    }

    Support T = hard_threshold_support(a.transpose() * y, k);
    Vector coef_T = least_squares_on_support(a, T, y);
    Vector residual = y - apply_columns(a, T, coef_T);
    double previous = residual.norm();
    if (previous <= s.tolerance) {
        res.support = detail::sorted(T);
        res.estimate = scatter(N, T, coef_T);
        res.termination = Termination::residual_zero;
        return res;
    }
    for (;;) {
        const Vector proxy = a.transpose() * residual;
        const Support fresh = hard_threshold_support(proxy, k);
        const Support merged = detail::merge_support(T, fresh, a.rows());
        const Vector coef = least_squares_on_support(a, merged, y);
        T = detail::top_k_of(merged, coef, k);
        coef_T = least_squares_on_support(a, T, y);
        residual = y - apply_columns(a, T, coef_T);
        res.residual_trace.push_back(residual.norm());
        if (opt.record_iterates) res.iterates.push_back(scatter(N, T, coef_T));
        if (detail::should_stop(s, res.residual_trace, previous, res.termination)) break;
        previous = res.residual_trace.back();
    }
    res.iterations = static_cast<int>(res.residual_trace.size());
    res.support = detail::sorted(T);
    res.estimate = scatter(N, T, coef_T);
    return res;
}

/// Iterative Hard Thresholding: x^l = x^{l-1}_T + omega A^T y^{l-1}, keep the
/// k largest entries, residual y - A_T x^l_T. With debias the final estimate
/// is the least-squares fit on the final support.
inline RecoveryResult iht(const Matrix& a, const Vector& y, Index k,
                          const RecoveryOptions& opt = {}) {
    detail::check_problem(a, y, k);
    const detail::Settings s = detail::resolve(opt, k, y);
    const double omega = opt.omega ? *opt.omega : kDefaultIhtOmega;
    if (!(omega > 0.0 && omega < 2.0)) throw DomainError("iht: omega outside (0,2)");
    const Index N = a.cols();
    RecoveryResult res;
    res.estimate = Vector::Zero(N);
    if (y.norm() <= s.tolerance) {
        res.termination = Termination::residual_zero;
        return res;
    }

    Vector x = Vector::Zero(N);
    Support T;
    Vector residual = y;
    double previous = y.norm();
    for (;;) {
        const Vector step = detail::restrict_to(x, T) + omega * (a.transpose() * residual);
        T = hard_threshold_support(step, k);
        x = detail::restrict_to(step, T);
        residual = y - a * x;
        res.residual_trace.push_back(residual.norm());
        if (opt.record_iterates) res.iterates.push_back(x);
        if (detail::should_stop(s, res.residual_trace, previous, res.termination)) break;
        previous = res.residual_trace.back();
    }
    res.iterations = static_cast<int>(res.residual_trace.size());
    res.support = detail::sorted(T);
    res.estimate = opt.debias ? scatter(N, res.support, least_squares_on_support(a, res.support, y))
                              : x;
    return res;
}

} // namespace cspt
