#pragma once

// Seeded Gaussian problem instances and empirical success-rate grids.
//
// Every random quantity is derived from a 64-bit seed through CounterRng, and
// grid trials use derive_seed(base, cell, trial), so results do not depend on
// the thread schedule.

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "cspt/errors.hpp"
#include "cspt/greedy_solvers.hpp"
#include "cspt/linalg.hpp"
#include "cspt/parallel.hpp"
#include "cspt/random.hpp"
#include "cspt/recovery_factors.hpp"
#include "cspt/rip_finite.hpp"

namespace cspt {

enum class SignalKind { sign, gaussian };

inline std::string_view to_string(SignalKind s) { return s == SignalKind::sign ? "sign" : "gaussian"; }

inline SignalKind parse_signal_kind(std::string_view s) {
    if (s == "sign") return SignalKind::sign;
    if (s == "gaussian") return SignalKind::gaussian;
    throw DomainError("unknown signal kind '" + std::string(s) + "' (expected sign|gaussian)");
}

/// n x N matrix with i.i.d. N(0, 1/n) entries, filled column by column.
inline Matrix gaussian_matrix(Index n, Index N, std::uint64_t seed) {
    if (n < 1 || N < 1) throw DimensionError("gaussian_matrix: n and N must be >= 1");
    CounterRng rng(seed);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    Matrix a(n, N);
    for (Index j = 0; j < N; ++j) {
        for (Index i = 0; i < n; ++i) a(i, j) = scale * rng.normal();
    }
    return a;
}

/// Length-N vector with exactly k nonzeros on a uniformly random support.
inline Vector sparse_signal(Index N, Index k, SignalKind kind, std::uint64_t seed) {
    if (k < 0 || k > N) throw DimensionError("sparse_signal: k outside [0, N]");
    CounterRng rng(seed);
    const Support support = detail::random_subset(rng, N, k);
    Vector x = Vector::Zero(N);
    for (Index i : support) {
        if (kind == SignalKind::sign) {
            x(i) = rng.uniform() < 0.5 ? -1.0 : 1.0;
        } else {
            double v = 0.0;
            while (v == 0.0) v = rng.normal();
            x(i) = v;
        }
    }
    return x;
}

inline constexpr double kExactSuccessTolerance = 1e-6;
inline constexpr double kNoisySuccessFactor = 10.0;

struct TrialSpec {
    ProblemSize size{1, 2, 3};
    SignalKind signal_kind = SignalKind::sign;
    double noise_level = 0.0;  // ||e|| / ||Ax||
    std::uint64_t seed = 0;
    AlgorithmId algorithm = AlgorithmId::cosamp;
    RecoveryOptions options{};
    // success threshold on ||x - x_hat|| / ||x||; default 1e-6 noiseless,
    // kNoisySuccessFactor * noise_level otherwise
    std::optional<double> success_tolerance;
};

struct TrialOutcome {
    bool success = false;
    double rel_error = std::numeric_limits<double>::quiet_NaN();
    RecoveryResult result{};
    std::optional<std::string> error;
};

struct TrialInstance {
    Matrix a;
    Vector x;
    Vector e;
    Vector y;
};

/// The (A, x, e, y) of a trial; A, x and e use independent sub-streams.
inline TrialInstance make_instance(const TrialSpec& spec) {
    if (!(spec.noise_level >= 0.0)) throw DomainError("noise_level must be >= 0");
    TrialInstance t;
    t.a = gaussian_matrix(spec.size.n(), spec.size.N(), derive_seed(spec.seed, 0));
    t.x = sparse_signal(spec.size.N(), spec.size.k(), spec.signal_kind, derive_seed(spec.seed, 1));
    const Vector clean = t.a * t.x;
    t.e = Vector::Zero(clean.size());
    if (spec.noise_level > 0.0) {
        CounterRng rng(derive_seed(spec.seed, 2));
        Vector dir(clean.size());
        for (Index i = 0; i < dir.size(); ++i) dir(i) = rng.normal();
        t.e = dir * (spec.noise_level * clean.norm() / dir.norm());
    }
    t.y = clean + t.e;
    return t;
}

inline RecoveryResult run_algorithm(AlgorithmId alg, const Matrix& a, const Vector& y, Index k,
                                    const RecoveryOptions& opt) {
    switch (alg) {
    case AlgorithmId::cosamp: return cosamp(a, y, k, opt);
    case AlgorithmId::sp: return subspace_pursuit(a, y, k, opt);
    case AlgorithmId::iht: return iht(a, y, k, opt);
    default: break;
    }
    throw DomainError("no recovery algorithm for '" + std::string(to_string(alg)) +
                      "' (expected cosamp|sp|iht)");
}

inline TrialOutcome run_trial(const TrialSpec& spec) {
    TrialOutcome out;
    try {
        const TrialInstance t = make_instance(spec);
        out.result = run_algorithm(spec.algorithm, t.a, t.y, spec.size.k(), spec.options);
        out.rel_error = (t.x - out.result.estimate).norm() / t.x.norm();
        const double tol = spec.success_tolerance ? *spec.success_tolerance
                           : spec.noise_level > 0.0 ? kNoisySuccessFactor * spec.noise_level
                                                    : kExactSuccessTolerance;
        out.success = out.rel_error <= tol;
    } catch (const Error& e) {
        out.error = e.what();
    }
    return out;
}

struct GridCell {
    double delta = 0.0;
    double rho = 0.0;
    Index k = 0, n = 0, N = 0;
    int trials = 0;
    int successes = 0;
    int failed_runs = 0;  // trials whose solver raised an error
};

struct SkippedCell {
    double delta = 0.0;
    double rho = 0.0;
    std::string reason;
};

struct SuccessGrid {
    AlgorithmId algorithm = AlgorithmId::cosamp;
    Index n = 0;
    int trials = 0;
    std::uint64_t base_seed = 0;
    std::vector<GridCell> cells;
    std::vector<SkippedCell> skipped;
};

struct GridOptions {
    SignalKind signal_kind = SignalKind::sign;
    double noise_level = 0.0;
    std::optional<double> success_tolerance;
    RecoveryOptions recovery{};
};

/// k = round(rho n), N = round(n / delta); the cell is skipped unless 1 <= k < n < N.
inline std::optional<ProblemSize> cell_size(double delta, double rho, Index n, std::string* why) {
    const double kd = std::round(rho * static_cast<double>(n));
    const double Nd = std::round(static_cast<double>(n) / delta);
    if (!(kd >= 1.0 && kd < static_cast<double>(n) && static_cast<double>(n) < Nd)) {
        if (why) {
            std::ostringstream os;
            os << "k=" << kd << ", n=" << n << ", N=" << Nd << " violates 1 <= k < n < N";
            *why = os.str();
        }
        return std::nullopt;
    }
    return ProblemSize(static_cast<Index>(kd), n, static_cast<Index>(Nd));
}

/// Success counts over the delta x rho grid, cell index = i_delta * |rhos| + i_rho.
inline SuccessGrid success_grid(AlgorithmId alg, const std::vector<double>& deltas,
                                const std::vector<double>& rhos, Index n, int trials,
                                std::uint64_t base_seed, const GridOptions& opt = {}) {
    if (trials < 1) throw DomainError("trials must be >= 1");
    if (n < 2) throw DomainError("n must be >= 2");
    for (double d : deltas) {
        if (!(d > 0.0 && d <= 1.0)) throw DomainError("delta grid outside (0,1]");
    }
    for (double r : rhos) {
        if (!(r > 0.0 && r <= 1.0)) throw DomainError("rho grid outside (0,1]");
    }
    run_algorithm(alg, Matrix::Identity(1, 1), Vector::Ones(1), 1, opt.recovery);

    SuccessGrid grid;
    grid.algorithm = alg;
    grid.n = n;
    grid.trials = trials;
    grid.base_seed = base_seed;

    std::vector<std::optional<ProblemSize>> sizes;
    for (double d : deltas) {
        for (double r : rhos) {
            std::string why;
            auto s = cell_size(d, r, n, &why);
            if (!s) grid.skipped.push_back({d, r, why});
            sizes.push_back(s);
        }
    }
    std::vector<std::size_t> live;
    for (std::size_t c = 0; c < sizes.size(); ++c) {
        if (sizes[c]) live.push_back(c);
    }

    std::vector<char> success(live.size() * trials, 0), failed(live.size() * trials, 0);
    parallel_for(live.size() * static_cast<std::size_t>(trials), [&](std::size_t job) {
        const std::size_t slot = job / trials;
        const int t = static_cast<int>(job % trials);
        TrialSpec spec;
        spec.size = *sizes[live[slot]];
        spec.signal_kind = opt.signal_kind;
        spec.noise_level = opt.noise_level;
        spec.seed = derive_seed(base_seed, live[slot], static_cast<std::uint64_t>(t));
        spec.algorithm = alg;
        spec.options = opt.recovery;
        spec.success_tolerance = opt.success_tolerance;
        const TrialOutcome o = run_trial(spec);
        success[job] = o.success ? 1 : 0;
        failed[job] = o.error ? 1 : 0;
    });

    for (std::size_t slot = 0; slot < live.size(); ++slot) {
        const std::size_t c = live[slot];
        const ProblemSize& s = *sizes[c];
        GridCell cell;
        cell.delta = deltas[c / rhos.size()];
        cell.rho = rhos[c % rhos.size()];
        cell.k = s.k();
        cell.n = s.n();
        cell.N = s.N();
        cell.trials = trials;
        for (int t = 0; t < trials; ++t) {
            cell.successes += success[slot * trials + t];
            cell.failed_runs += failed[slot * trials + t];
        }
        grid.cells.push_back(cell);
    }
    return grid;
}

} // namespace cspt
