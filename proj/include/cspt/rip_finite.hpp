#pragma once

// Asymmetric restricted isometry constants of a concrete matrix:
//   L(order) = max over |I| = order of 1 - smin(A_I)^2   (clamped at 0)
//   U(order) = max over |I| = order of smax(A_I)^2 - 1   (clamped at 0)
// computed exactly by enumeration, or bounded below by random search.

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cspt/errors.hpp"
#include "cspt/linalg.hpp"
#include "cspt/parallel.hpp"
#include "cspt/random.hpp"

namespace cspt {

/// (k, n, N) for one finite problem instance.
class ProblemSize {
public:
    ProblemSize(Index k, Index n, Index N) : k_(k), n_(n), N_(N) {
        if (!(k >= 1 && k < n && n <= N)) {
            std::ostringstream os;
            os << "problem size requires 1 <= k < n <= N, got k=" << k << " n=" << n << " N=" << N;
            throw DomainError(os.str());
        }
    }
    Index k() const { return k_; }
    Index n() const { return n_; }
    Index N() const { return N_; }

private:
    Index k_, n_, N_;
};

enum class Provenance { exact, monte_carlo_lower };

inline const char* to_string(Provenance p) {
    return p == Provenance::exact ? "exact" : "monte-carlo-lower";
}

struct FiniteAripBounds {
    double L = 0.0;
    double U = 0.0;
    Index order = 0;
    Provenance provenance = Provenance::exact;
};

inline constexpr double kMaxExactSubsets = 1e7;

/// C(n, k) as a double; exact for the sizes the enumeration guard admits.
inline double binomial(Index n, Index k) {
    if (k < 0 || k > n) return 0.0;
    k = std::min(k, n - k);
    double c = 1.0;
    for (Index i = 1; i <= k; ++i) c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
    return std::round(c);
}

namespace detail {

struct Deviation {
    double lower = 0.0;  // 1 - smin^2
    double upper = 0.0;  // smax^2 - 1
};

inline Deviation deviation(const Matrix& a, std::span<const Index> cols) {
    const SingularPair s = submatrix_extreme_singvals(a, cols);
    return {1.0 - s.smin * s.smin, s.smax * s.smax - 1.0};
}

// Advance `c` (strictly increasing, values < n) to the next combination whose
// first element is unchanged. Returns false when exhausted.
inline bool next_combination_fixed_head(std::vector<Index>& c, Index n) {
    const Index k = static_cast<Index>(c.size());
    for (Index i = k - 1; i >= 1; --i) {
        if (c[i] < n - k + i) {
            ++c[i];
            for (Index j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
            return true;
        }
    }
    return false;
}

inline void check_order(const Matrix& a, Index order) {
    if (order < 1 || order > a.cols()) {
        std::ostringstream os;
        os << "aRIP order " << order << " outside [1," << a.cols() << "]";
        throw DimensionError(os.str());
    }
    if (order > a.rows()) {
        std::ostringstream os;
        os << "aRIP order " << order << " exceeds " << a.rows() << " rows";
        throw DimensionError(os.str());
    }
}

} // namespace detail

/// Exact aRIP constants of the given order by enumerating every column subset.
///
/// Subsets are partitioned by their smallest index and scanned in parallel;
/// max-reduction makes the result independent of the partitioning.
inline FiniteAripBounds exact_arip(const Matrix& a, Index order,
                                   double max_subsets = kMaxExactSubsets) {
    detail::check_order(a, order);
    const Index N = a.cols();
    const double count = binomial(N, order);
    if (count > max_subsets) {
        std::ostringstream os;
        os << "exact_arip: C(" << N << "," << order << ") = " << count << " subsets exceeds "
           << max_subsets << "; use estimate_arip_lower";
        throw CombinatorialBlowupError(os.str());
    }
    const std::size_t heads = static_cast<std::size_t>(N - order + 1);
    std::vector<detail::Deviation> per_head(heads);
    parallel_for(heads, [&](std::size_t h) {
        std::vector<Index> c(static_cast<std::size_t>(order));
        for (Index j = 0; j < order; ++j) c[j] = static_cast<Index>(h) + j;
        detail::Deviation best{-std::numeric_limits<double>::infinity(),
                               -std::numeric_limits<double>::infinity()};
        do {
            const detail::Deviation d = detail::deviation(a, c);
            best.lower = std::max(best.lower, d.lower);
            best.upper = std::max(best.upper, d.upper);
        } while (detail::next_combination_fixed_head(c, N));
        per_head[h] = best;
    });
    FiniteAripBounds out{0.0, 0.0, order, Provenance::exact};
    for (const auto& d : per_head) {
        out.L = std::max(out.L, d.lower);
        out.U = std::max(out.U, d.upper);
    }
    return out;
}

namespace detail {

inline std::vector<Index> random_subset(CounterRng& rng, Index N, Index order) {
    std::vector<Index> perm(static_cast<std::size_t>(N));
    for (Index i = 0; i < N; ++i) perm[i] = i;
    for (Index i = 0; i < order; ++i) {
        const Index j = i + static_cast<Index>(rng.below(static_cast<std::uint64_t>(N - i)));
        std::swap(perm[i], perm[j]);
    }
    perm.resize(static_cast<std::size_t>(order));
    std::sort(perm.begin(), perm.end());
    return perm;
}

// Single-column-swap hill climbing on one objective. First improvement wins.
template <class Objective>
double swap_ascent(const Matrix& a, std::vector<Index> subset, double value, Objective&& f,
                   int max_sweeps) {
    const Index N = a.cols();
    std::vector<char> used(static_cast<std::size_t>(N), 0);
    for (Index i : subset) used[i] = 1;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        bool improved = false;
        for (std::size_t pos = 0; pos < subset.size(); ++pos) {
            for (Index col = 0; col < N; ++col) {
                if (used[col]) continue;
                const Index old = subset[pos];
                subset[pos] = col;
                const double v = f(subset);
                if (v > value) {
                    value = v;
                    used[old] = 0;
                    used[col] = 1;
                    improved = true;
                } else {
                    subset[pos] = old;
                }
            }
        }
        if (!improved) break;
    }
    return value;
}

} // namespace detail

struct EstimateOptions {
    int candidates = 4;   // best random subsets refined per objective
    int max_sweeps = 50;
};

/// Lower estimates of the aRIP constants: random subsets followed by greedy
/// single-column-swap ascent from the best few, separately for L and U.
/// Deterministic given the seed; never exceeds exact_arip.
inline FiniteAripBounds estimate_arip_lower(const Matrix& a, Index order, int trials,
                                            std::uint64_t seed, const EstimateOptions& opt = {}) {
    detail::check_order(a, order);
    if (trials < 1) throw DomainError("estimate_arip_lower: trials must be >= 1");

    struct Candidate {
        std::vector<Index> subset;
        double value;
    };
    auto keep = [&](std::vector<Candidate>& best, const std::vector<Index>& s, double v) {
        best.push_back({s, v});
        std::stable_sort(best.begin(), best.end(),
                         [](const Candidate& x, const Candidate& y) { return x.value > y.value; });
        if (static_cast<int>(best.size()) > opt.candidates) best.pop_back();
    };

    CounterRng rng(seed);
    std::vector<Candidate> best_lower, best_upper;
    for (int t = 0; t < trials; ++t) {
        const auto subset = detail::random_subset(rng, a.cols(), order);
        const detail::Deviation d = detail::deviation(a, subset);
        keep(best_lower, subset, d.lower);
        keep(best_upper, subset, d.upper);
    }

    auto lower_of = [&](const std::vector<Index>& s) { return detail::deviation(a, s).lower; };
    auto upper_of = [&](const std::vector<Index>& s) { return detail::deviation(a, s).upper; };
    FiniteAripBounds out{0.0, 0.0, order, Provenance::monte_carlo_lower};
    for (const auto& c : best_lower) {
        out.L = std::max(out.L, detail::swap_ascent(a, c.subset, c.value, lower_of, opt.max_sweeps));
    }
    for (const auto& c : best_upper) {
        out.U = std::max(out.U, detail::swap_ascent(a, c.subset, c.value, upper_of, opt.max_sweeps));
    }
    return out;
}

/// Outcome of one family of aRIP-implied inequalities.
struct InequalityCheck {
    std::string name;
    long checks = 0;
    long violations = 0;
    double worst_slack = std::numeric_limits<double>::infinity();  // min(rhs - lhs)
    double max_lhs = 0.0;
};

struct ImplicationReport {
    std::array<InequalityCheck, 6> checks;
    std::vector<FiniteAripBounds> constants;  // orders 1..max_order

    bool all_hold() const {
        for (const auto& c : checks) {
            if (c.violations != 0) return false;
        }
        return true;
    }
};

struct ImplicationOptions {
    Index max_order = 2;          // bound on |I| + |J|
    int draws = 1000;
    std::uint64_t seed = 0;
    std::optional<double> omega;  // fixed step for (vi); default uniform on (0,1)
    double relative_tolerance = 1e-12;
};

/// Checks, on random disjoint I, J and random u, v, y, omega, the six
/// consequences of the aRIP with exact constants:
///   (i)   ||A_I^T y|| <= sqrt(1+U_|I|) ||y||
///   (ii)  (1-L_|I|)||u|| <= ||A_I^T A_I u|| <= (1+U_|I|)||u||
///   (iii) ||A_I^+ y|| <= (1-L_|I|)^{-1/2} ||y||
///   (iv)  |<A_I u, A_J v>| <= (L_m+U_m)/2 ||u|| ||v||,  m = |I|+|J|
///   (v)   ||A_I^T A_J v|| <= (L_m+U_m)/2 ||v||
/// The off-diagonal block A_I^T A_J of the Gram matrix has norm equal to the
/// supremum in (iv), so (v) carries the same constant. U_m alone is not a bound
/// once L_m > U_m.
///   (vi)  ||(Id - w A_I^T A_I) u|| <= max{w(1+U_|I|)-1, 1-w(1-L_|I|)} ||u||
inline ImplicationReport verify_arip_implications(const Matrix& a, const ImplicationOptions& opt) {
    if (opt.max_order < 1) throw DomainError("verify_arip_implications: max_order must be >= 1");
    ImplicationReport report;
    const char* names[6] = {"i", "ii", "iii", "iv", "v", "vi"};
    for (int i = 0; i < 6; ++i) report.checks[i].name = names[i];
    for (Index m = 1; m <= opt.max_order; ++m) report.constants.push_back(exact_arip(a, m));
    auto L = [&](Index m) { return report.constants[m - 1].L; };
    auto U = [&](Index m) { return report.constants[m - 1].U; };

    auto record = [&](int which, double lhs, double rhs) {
        InequalityCheck& c = report.checks[which];
        ++c.checks;
        const double slack = rhs - lhs;
        c.worst_slack = std::min(c.worst_slack, slack);
        c.max_lhs = std::max(c.max_lhs, lhs);
        if (slack < -opt.relative_tolerance * std::max(1.0, std::abs(rhs))) ++c.violations;
    };

    const Index N = a.cols();
    CounterRng rng(opt.seed);
    for (int d = 0; d < opt.draws; ++d) {
        const Index size_i =
            opt.max_order == 1 ? 1 : 1 + static_cast<Index>(rng.below(opt.max_order - 1));
        const Index size_j =
            opt.max_order == 1 ? 0
                               : 1 + static_cast<Index>(rng.below(opt.max_order - size_i));
        const auto chosen = detail::random_subset(rng, N, size_i + size_j);
        // random_subset sorts, so shuffle the split between I and J
        std::vector<Index> pool = chosen;
        for (std::size_t i = pool.size(); i > 1; --i) {
            std::swap(pool[i - 1], pool[rng.below(i)]);
        }
        const Support I(pool.begin(), pool.begin() + size_i);
        const Support J(pool.begin() + size_i, pool.end());

        Vector u(size_i), v(size_j), y(a.rows());
        for (Index i = 0; i < size_i; ++i) u(i) = rng.normal();
        for (Index i = 0; i < size_j; ++i) v(i) = rng.normal();
        for (Index i = 0; i < y.size(); ++i) y(i) = rng.normal();
        const double omega = opt.omega ? *opt.omega : rng.uniform_open_low() * (1.0 - 1e-12);

        const Matrix AI = columns(a, I);
        const Matrix gram = AI.transpose() * AI;
        const double Li = L(size_i), Ui = U(size_i);

        record(0, (AI.transpose() * y).norm(), std::sqrt(1.0 + Ui) * y.norm());

        const double gu = (gram * u).norm();
        record(1, std::max((1.0 - Li) * u.norm() - gu, gu - (1.0 + Ui) * u.norm()), 0.0);

        const double pinv_bound = Li < 1.0 ? y.norm() / std::sqrt(1.0 - Li)
                                           : std::numeric_limits<double>::infinity();
        record(2, least_squares_on_support(a, I, y).norm(), pinv_bound);

        if (size_j > 0) {
            const Index m = size_i + size_j;
            const Matrix AJ = columns(a, J);
            record(3, std::abs((AI * u).dot(AJ * v)), 0.5 * (L(m) + U(m)) * u.norm() * v.norm());
            record(4, (AI.transpose() * (AJ * v)).norm(), 0.5 * (L(m) + U(m)) * v.norm());
        }

        const Vector step = u - omega * (gram * u);
        const double contraction = std::max(omega * (1.0 + Ui) - 1.0, 1.0 - omega * (1.0 - Li));
        record(5, step.norm(), contraction * u.norm());
    }
    return report;
}

} // namespace cspt
