#pragma once

// Convergence factor mu, stability factor xi and offset kappa of CoSaMP,
// Subspace Pursuit, IHT and l1-regularization, plus the ROMP condition.
//
// Every formula is written once against a BoundsProvider, which supplies
// (L_a, U_a) for the sparsity multiples a*k it is asked for. The same code
// therefore yields mu(k,n,N) from the constants of a concrete matrix and
// mu(delta,rho) from the asymptotic Gaussian bounds at (delta, a*rho).

#include <algorithm>
#include <array>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>

#include "cspt/errors.hpp"
#include "cspt/linalg.hpp"
#include "cspt/rip_asymptotic.hpp"
#include "cspt/rip_finite.hpp"

namespace cspt {

enum class AlgorithmId { cosamp, sp, iht, l1, romp };

inline std::string_view to_string(AlgorithmId a) {
    switch (a) {
    case AlgorithmId::cosamp: return "cosamp";
    case AlgorithmId::sp: return "sp";
    case AlgorithmId::iht: return "iht";
    case AlgorithmId::l1: return "l1";
    case AlgorithmId::romp: return "romp";
    }
    return "?";
}

inline AlgorithmId parse_algorithm(std::string_view s) {
    if (s == "cosamp" || s == "csp") return AlgorithmId::cosamp;
    if (s == "sp") return AlgorithmId::sp;
    if (s == "iht") return AlgorithmId::iht;
    if (s == "l1") return AlgorithmId::l1;
    if (s == "romp") return AlgorithmId::romp;
    throw DomainError("unknown algorithm '" + std::string(s) + "'");
}

/// (L, U) at one sparsity multiple.
struct AripPair {
    double L;
    double U;
};

template <class P>
concept BoundsProvider = requires(const P& p, int multiple) {
    { p.bounds(multiple) } -> std::convertible_to<AripPair>;
};

namespace detail {

inline std::size_t multiple_slot(int multiple) {
    if (multiple < 1 || multiple > 4) {
        throw DomainError("sparsity multiple " + std::to_string(multiple) + " outside 1..4");
    }
    return static_cast<std::size_t>(multiple);
}

} // namespace detail

/// Asymptotic Gaussian bounds at (delta, a * (1 + epsilon) * rho), memoized.
class AsymptoticProvider {
public:
    AsymptoticProvider(double delta, double rho, AsymptoticSettings settings = {},
                       RootAudit* audit = nullptr, double epsilon = 0.0)
        : delta_(delta), rho_(rho * (1.0 + epsilon)), settings_(settings), audit_(audit) {
        PhasePoint(delta, rho);
    }

    AripPair bounds(int multiple) const {
        auto& slot = cache_[detail::multiple_slot(multiple)];
        if (!slot) {
            const double r = multiple * rho_;
            if (!(r < 1.0)) {
                std::ostringstream os;
                os.precision(17);
                os << "factor undefined: " << multiple << "*rho = " << r << " >= 1 at delta="
                   << delta_;
                throw DomainError(os.str());
            }
            const PhasePoint at(delta_, r);
            // A lambda_min root below the bracket floor means L is 1 to
            // working precision; formulas that need L reject it, those that
            // only read U proceed.
            double L = 1.0;
            try {
                L = bound_L(at, settings_, audit_);
            } catch (const NoRootError&) {
            }
            slot = AripPair{L, bound_U(at, settings_, audit_)};
        }
        return *slot;
    }

    double delta() const { return delta_; }
    double rho() const { return rho_; }

private:
    double delta_;
    double rho_;
    AsymptoticSettings settings_;
    RootAudit* audit_;
    mutable std::array<std::optional<AripPair>, 5> cache_{};
};

enum class FiniteMode { exact, estimate };

/// Constants of a concrete matrix at orders a*k, memoized.
class FiniteProvider {
public:
    FiniteProvider(const Matrix& a, Index k, FiniteMode mode = FiniteMode::exact, int trials = 1000,
                   std::uint64_t seed = 0)
        : a_(&a), k_(k), mode_(mode), trials_(trials), seed_(seed) {
        if (k < 1) throw DomainError("FiniteProvider: k must be >= 1");
    }

    AripPair bounds(int multiple) const {
        auto& slot = cache_[detail::multiple_slot(multiple)];
        if (!slot) {
            const Index order = multiple * k_;
            if (order > a_->rows() || order > a_->cols()) {
                std::ostringstream os;
                os << "factor undefined: order " << order << " exceeds matrix dimensions "
                   << a_->rows() << "x" << a_->cols() << " (L = 1)";
                throw DomainError(os.str());
            }
            const FiniteAripBounds b =
                mode_ == FiniteMode::exact
                    ? exact_arip(*a_, order)
                    : estimate_arip_lower(*a_, order, trials_, derive_seed(seed_, order));
            slot = AripPair{b.L, b.U};
        }
        return *slot;
    }

private:
    const Matrix* a_;
    Index k_;
    FiniteMode mode_;
    int trials_;
    std::uint64_t seed_;
    mutable std::array<std::optional<AripPair>, 5> cache_{};
};

/// Explicit (L, U) per multiple; missing multiples are a domain error.
class TableProvider {
public:
    TableProvider() = default;
    explicit TableProvider(std::map<int, AripPair> table) : table_(std::move(table)) {}

    static TableProvider uniform(double L, double U) {
        TableProvider p;
        for (int a = 1; a <= 4; ++a) p.table_[a] = {L, U};
        return p;
    }

    TableProvider& set(int multiple, double L, double U) {
        table_[multiple] = {L, U};
        return *this;
    }

    AripPair bounds(int multiple) const {
        const auto it = table_.find(multiple);
        if (it == table_.end()) {
            throw DomainError("bounds table has no entry for multiple " + std::to_string(multiple));
        }
        return it->second;
    }

private:
    std::map<int, AripPair> table_;
};

struct FactorSet {
    AlgorithmId algorithm = AlgorithmId::cosamp;
    double mu = 0.0;
    double xi = 0.0;
    std::optional<double> kappa;       // absent for l1
    std::optional<double> omega_star;  // IHT only
};

namespace detail {

template <BoundsProvider P>
AripPair require(const P& b, int multiple) {
    const AripPair p = b.bounds(multiple);
    if (!(p.L < 1.0)) {
        std::ostringstream os;
        os.precision(17);
        os << "factor undefined: L at multiple " << multiple << " is " << p.L << " >= 1";
        throw DomainError(os.str());
    }
    return p;
}

} // namespace detail

/// CoSaMP, multiples {2, 3, 4}:
///   mu = 1/2 (2 + (L4+U4)/(1-L3)) (L2+U2+L4+U4)/(1-L2)
///   xi = 2 { (2 + (L4+U4)/(1-L3)) sqrt(1+U2)/(1-L2) + 1/sqrt(1-L3) },  kappa = 1
template <BoundsProvider P>
FactorSet cosamp_factors(const P& b) {
    const AripPair b2 = detail::require(b, 2);
    const AripPair b3 = detail::require(b, 3);
    const AripPair b4 = detail::require(b, 4);
    const double lead = 2.0 + (b4.L + b4.U) / (1.0 - b3.L);
    FactorSet f;
    f.algorithm = AlgorithmId::cosamp;
    f.mu = 0.5 * lead * ((b2.L + b2.U + b4.L + b4.U) / (1.0 - b2.L));
    f.xi = 2.0 * (lead * (std::sqrt(1.0 + b2.U) / (1.0 - b2.L)) + 1.0 / std::sqrt(1.0 - b3.L));
    f.kappa = 1.0;
    return f;
}

/// Subspace Pursuit, multiples {1, 2, 3}:
///   kappa = 1 + U2/(1-L1)
///   mu    = 2 U3/(1-L1) (1 + 2 U3/(1-L2)) kappa
///   xi    = sqrt(1+U1)/(1-L1) [1 - mu + 2 kappa (1 + 2 U3/(1-L2))] + 2 kappa/sqrt(1-L2)
template <BoundsProvider P>
FactorSet sp_factors(const P& b) {
    const AripPair b1 = detail::require(b, 1);
    const AripPair b2 = detail::require(b, 2);
    const AripPair b3 = b.bounds(3);
    const double kappa = 1.0 + b2.U / (1.0 - b1.L);
    const double inner = 1.0 + 2.0 * b3.U / (1.0 - b2.L);
    FactorSet f;
    f.algorithm = AlgorithmId::sp;
    f.kappa = kappa;
    f.mu = 2.0 * b3.U / (1.0 - b1.L) * inner * kappa;
    f.xi = std::sqrt(1.0 + b1.U) / (1.0 - b1.L) * (1.0 - f.mu + 2.0 * kappa * inner) +
           2.0 * kappa / std::sqrt(1.0 - b2.L);
    return f;
}

/// IHT with step omega, multiples {2, 3}:
///   mu = 2 sqrt2 max{omega(1+U3) - 1, 1 - omega(1-L3)},  xi = 2 omega sqrt(1+U2)
template <BoundsProvider P>
FactorSet iht_factors(const P& b, double omega) {
    if (!(omega > 0.0 && omega < 2.0)) throw DomainError("iht_factors: omega outside (0,2)");
    const AripPair b2 = b.bounds(2);
    const AripPair b3 = detail::require(b, 3);
    FactorSet f;
    f.algorithm = AlgorithmId::iht;
    f.mu = 2.0 * std::numbers::sqrt2 *
           std::max(omega * (1.0 + b3.U) - 1.0, 1.0 - omega * (1.0 - b3.L));
    f.xi = 2.0 * omega * std::sqrt(1.0 + b2.U);
    f.kappa = 1.0;
    return f;
}

/// The step that balances both arguments of the IHT max: 2/(2 + U3 - L3).
template <BoundsProvider P>
double iht_optimal_omega(const P& b) {
    const AripPair b3 = detail::require(b, 3);
    return 2.0 / (2.0 + b3.U - b3.L);
}

/// IHT at the balancing step omega*:
///   mu = 2 sqrt2 (L3+U3)/(2+U3-L3),  xi = 4 sqrt(1+U2)/(2+U3-L3)
template <BoundsProvider P>
FactorSet iht_factors(const P& b) {
    const AripPair b2 = b.bounds(2);
    const AripPair b3 = detail::require(b, 3);
    const double denom = 2.0 + b3.U - b3.L;
    FactorSet f;
    f.algorithm = AlgorithmId::iht;
    f.omega_star = 2.0 / denom;
    f.mu = 2.0 * std::numbers::sqrt2 * (b3.L + b3.U) / denom;
    f.xi = 4.0 * std::sqrt(1.0 + b2.U) / denom;
    f.kappa = 1.0;
    return f;
}

/// l1-regularization, multiple {2}:
///   mu = (1+sqrt2)/4 ((1+U2)/(1-L2) - 1),  xi = 3(1+sqrt2)/(1-L2)
template <BoundsProvider P>
FactorSet l1_factors(const P& b) {
    const AripPair b2 = detail::require(b, 2);
    FactorSet f;
    f.algorithm = AlgorithmId::l1;
    f.mu = (1.0 + std::numbers::sqrt2) / 4.0 * ((1.0 + b2.U) / (1.0 - b2.L) - 1.0);
    f.xi = 3.0 * (1.0 + std::numbers::sqrt2) / (1.0 - b2.L);
    return f;
}

/// Problem-size dependent ROMP threshold (1 + sqrt(5n/(n-1) (log n + 2)))^{-1}.
inline double romp_threshold(Index n) {
    if (n < 2) throw DomainError("romp_threshold: n must be >= 2");
    const double nn = static_cast<double>(n);
    return 1.0 / (1.0 + std::sqrt(5.0 * nn / (nn - 1.0) * (std::log(nn) + 2.0)));
}

struct RompCondition {
    double mu_r;
    double threshold;
    bool satisfied;
};

/// ROMP, multiple {2}: mu_r = U2 (1 + (1+U2)/(1-L2)), recovery if mu_r < threshold(n).
template <BoundsProvider P>
RompCondition romp_factor(const P& b, Index n) {
    const double threshold = romp_threshold(n);
    const AripPair b2 = detail::require(b, 2);
    const double mu_r = b2.U * (1.0 + (1.0 + b2.U) / (1.0 - b2.L));
    return {mu_r, threshold, mu_r < threshold};
}

/// Factors of any algorithm except ROMP (IHT at omega*).
template <BoundsProvider P>
FactorSet factors(AlgorithmId alg, const P& b) {
    switch (alg) {
    case AlgorithmId::cosamp: return cosamp_factors(b);
    case AlgorithmId::sp: return sp_factors(b);
    case AlgorithmId::iht: return iht_factors(b);
    case AlgorithmId::l1: return l1_factors(b);
    case AlgorithmId::romp: break;
    }
    throw DomainError("romp exposes mu_r and a threshold only; use romp_factor");
}

/// xi / (1 - mu); undefined for mu >= 1.
inline double stability_ratio(const FactorSet& f) {
    if (!(f.mu < 1.0)) {
        std::ostringstream os;
        os.precision(17);
        os << "stability ratio undefined: mu = " << f.mu << " >= 1";
        throw UndefinedRatioError(os.str());
    }
    return f.xi / (1.0 - f.mu);
}

/// Smallest nonzero magnitude of x over ||x||_2.
inline double nu_min(const Vector& x) {
    double smallest = std::numeric_limits<double>::infinity();
    for (Index i = 0; i < x.size(); ++i) {
        if (x(i) != 0.0) smallest = std::min(smallest, std::abs(x(i)));
    }
    if (!std::isfinite(smallest)) throw DomainError("nu_min: zero vector");
    return smallest / x.norm();
}

/// Iteration bound ceil((log nu - log kappa) / log mu) + 1, at least 1.
/// mu = 0 gives 1: an exact isometry recovers in a single step.
inline long max_iterations(const FactorSet& f, double nu) {
    if (!f.kappa) throw DomainError("max_iterations: algorithm has no iterative form");
    if (!(nu > 0.0 && nu <= 1.0)) throw DomainError("max_iterations: nu outside (0,1]");
    if (!(*f.kappa >= 1.0)) throw DomainError("max_iterations: kappa < 1");
    if (!(f.mu < 1.0) || f.mu < 0.0) throw DomainError("max_iterations: mu outside [0,1)");
    if (f.mu == 0.0) return 1;
    double steps = (std::log(nu) - std::log(*f.kappa)) / std::log(f.mu);
    const double nearest = std::round(steps);
    if (std::abs(steps - nearest) <= 1e-12 * std::max(1.0, std::abs(steps))) steps = nearest;
    return std::max(1L, static_cast<long>(std::ceil(steps)) + 1);
}

} // namespace cspt
