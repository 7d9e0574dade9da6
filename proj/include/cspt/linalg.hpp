#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <sstream>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "cspt/errors.hpp"

namespace cspt {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;
using Support = std::vector<Index>;

/// Columns of `a` listed in `cols`, in that order.
inline Matrix columns(const Matrix& a, std::span<const Index> cols) {
    Matrix out(a.rows(), static_cast<Index>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j) {
        if (cols[j] < 0 || cols[j] >= a.cols()) {
            throw DimensionError("column index out of range");
        }
        out.col(static_cast<Index>(j)) = a.col(cols[j]);
    }
    return out;
}

/// Extreme singular values of a column submatrix.
struct SingularPair {
    double smin;
    double smax;
};

/// Smallest and largest singular values of A_I.
///
/// Uses the eigenvalues of the |I| x |I| Gram matrix when |I| <= n/2 and a
/// direct SVD otherwise, where squaring would cost accuracy near rank loss.
inline SingularPair submatrix_extreme_singvals(const Matrix& a, std::span<const Index> cols) {
    if (static_cast<Index>(cols.size()) > a.rows()) {
        std::ostringstream os;
        os << "submatrix with " << cols.size() << " columns exceeds " << a.rows() << " rows";
        throw DimensionError(os.str());
    }
    if (cols.empty()) return {0.0, 0.0};
    const Matrix sub = columns(a, cols);
    if (2 * sub.cols() <= sub.rows()) {
        const Matrix gram = sub.transpose() * sub;
        Eigen::SelfAdjointEigenSolver<Matrix> eig(gram, Eigen::EigenvaluesOnly);
        const Vector& ev = eig.eigenvalues();
        return {std::sqrt(std::max(ev(0), 0.0)), std::sqrt(std::max(ev(ev.size() - 1), 0.0))};
    }
    Eigen::JacobiSVD<Matrix> svd(sub);
    const Vector& sv = svd.singularValues();
    return {sv(sv.size() - 1), sv(0)};
}

/// Indices of the m largest-magnitude entries, ties to the lowest index.
/// Returned in order of decreasing magnitude.
inline Support hard_threshold_support(const Vector& v, Index m) {
    if (m < 1 || m > v.size()) {
        std::ostringstream os;
        os << "hard_threshold_support: m=" << m << " outside [1," << v.size() << "]";
        throw DimensionError(os.str());
    }
    Support idx(static_cast<std::size_t>(v.size()));
    std::iota(idx.begin(), idx.end(), Index{0});
    auto larger = [&](Index a, Index b) {
        const double ma = std::abs(v(a));
        const double mb = std::abs(v(b));
        return ma > mb || (ma == mb && a < b);
    };
    std::partial_sort(idx.begin(), idx.begin() + m, idx.end(), larger);
    idx.resize(static_cast<std::size_t>(m));
    return idx;
}

inline constexpr double kRankTolerance = 1e-12;

/// argmin_z ||A_I z - y||_2 via Householder QR of A_I.
///
/// Throws RankDeficientError when smin(A_I) < 1e-12 * smax(A_I).
inline Vector least_squares_on_support(const Matrix& a, std::span<const Index> cols,
                                       const Vector& y) {
    if (y.size() != a.rows()) {
        std::ostringstream os;
        os << "least_squares_on_support: y has " << y.size() << " entries, A has " << a.rows()
           << " rows";
        throw DimensionError(os.str());
    }
    if (static_cast<Index>(cols.size()) > a.rows()) {
        throw DimensionError("least_squares_on_support: more columns than rows");
    }
    if (cols.empty()) return Vector(0);
    const Matrix sub = columns(a, cols);
    Eigen::JacobiSVD<Matrix> svd(sub);
    const Vector& sv = svd.singularValues();
    if (!(sv(sv.size() - 1) >= kRankTolerance * sv(0)) || sv(0) == 0.0) {
        throw RankDeficientError("least_squares_on_support: column submatrix is rank deficient");
    }
    return sub.householderQr().solve(y);
}

/// Scatter coefficients on `cols` into a length-n vector.
inline Vector scatter(Index n, std::span<const Index> cols, const Vector& coef) {
    Vector out = Vector::Zero(n);
    for (std::size_t j = 0; j < cols.size(); ++j) out(cols[j]) = coef(static_cast<Index>(j));
    return out;
}

/// A_I * coef.
inline Vector apply_columns(const Matrix& a, std::span<const Index> cols, const Vector& coef) {
    Vector out = Vector::Zero(a.rows());
    for (std::size_t j = 0; j < cols.size(); ++j) {
        out.noalias() += coef(static_cast<Index>(j)) * a.col(cols[j]);
    }
    return out;
}

} // namespace cspt
