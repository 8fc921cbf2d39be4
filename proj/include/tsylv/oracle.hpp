// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tsylv/dense_tensor.hpp"
#include "tsylv/errors.hpp"
#include "tsylv/matrix.hpp"
#include "tsylv/solver.hpp"
#include "tsylv/tensor_ops.hpp"

namespace tsylv {

inline constexpr std::size_t kDefaultOracleSizeCap = 4096;
inline constexpr double kDefaultRankTol = 1.0e-10;

namespace detail {

// Householder reflector H = I - tau v v^T with v(0) = 1 that maps column
// `col` of `a` (rows start..end) onto a multiple of e_start. v is written
// below the diagonal; the new diagonal entry is returned in place.
inline double make_reflector(Matrix& a, std::size_t start, std::size_t col) {
    const std::size_t m = a.rows();
    const double alpha = a(start, col);
    double tail = 0.0;
    for (std::size_t i = start + 1; i < m; ++i) tail += a(i, col) * a(i, col);
    if (tail == 0.0) return 0.0;
    const double beta = -std::copysign(std::sqrt(alpha * alpha + tail), alpha);
    const double tau = (beta - alpha) / beta;
    const double inv = 1.0 / (alpha - beta);
    for (std::size_t i = start + 1; i < m; ++i) a(i, col) *= inv;
    a(start, col) = beta;
    return tau;
}

// Applies the reflector stored in column `vcol` of `h` (rows start..) to the
// vector `x` (same row indexing).
inline void apply_reflector(const Matrix& h, std::size_t start, std::size_t vcol, double tau,
                            std::span<double> x) {
    if (tau == 0.0) return;
    double w = x[start];
    for (std::size_t i = start + 1; i < h.rows(); ++i) w += h(i, vcol) * x[i];
    w *= tau;
    x[start] -= w;
    for (std::size_t i = start + 1; i < h.rows(); ++i) x[i] -= w * h(i, vcol);
}

inline void apply_reflector_to_columns(Matrix& a, std::size_t start, std::size_t vcol,
                                       double tau, std::size_t first_col) {
    if (tau == 0.0) return;
    for (std::size_t j = first_col; j < a.cols(); ++j) {
        double w = a(start, j);
        for (std::size_t i = start + 1; i < a.rows(); ++i) w += a(i, vcol) * a(i, j);
        w *= tau;
        a(start, j) -= w;
        for (std::size_t i = start + 1; i < a.rows(); ++i) a(i, j) -= w * a(i, vcol);
    }
}

inline void require_finite(std::span<const double> v, const char* what) {
    for (double x : v) {
        if (!std::isfinite(x)) throw NumericalError(std::string(what) + " has non-finite entries");
    }
}

}  // namespace detail

/// Orthogonal factor Q of a Householder QR of a square matrix.
inline Matrix orthogonal_factor(const Matrix& a) {
    if (a.rows() != a.cols()) throw DimensionError("orthogonal_factor needs a square matrix");
    const std::size_t n = a.rows();
    Matrix h = a;
    std::vector<double> tau(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        tau[j] = detail::make_reflector(h, j, j);
        detail::apply_reflector_to_columns(h, j, j, tau[j], j + 1);
    }
    Matrix q = Matrix::identity(n);
    for (std::size_t c = 0; c < n; ++c) {
        std::span<double> col(q.data().data() + n * c, n);
        for (std::size_t j = n; j-- > 0;) detail::apply_reflector(h, j, j, tau[j], col);
    }
    return q;
}

struct LstsqResult {
    std::vector<double> solution;
    double residual_norm = 0.0;
    std::size_t numerical_rank = 0;
};

/// K P = Q [R11 R12; 0 R22] by column-pivoted Householder QR, truncated at the
/// numerical rank r, followed by [R11 R12] = [U^T 0] Z^T from a Householder
/// QR of [R11 R12]^T. The minimum-norm least-squares solution, a null-space
/// basis and the row-space projector all fall out of Q, Z and P.
class CompleteOrthogonalDecomposition {
public:
    explicit CompleteOrthogonalDecomposition(Matrix k, double rank_tol = kDefaultRankTol)
        : qr_(std::move(k)) {
        if (qr_.rows() == 0 || qr_.cols() == 0) throw DimensionError("empty matrix");
        if (!(rank_tol >= 0.0)) throw std::invalid_argument("rank_tol must be nonnegative");
        detail::require_finite(qr_.data(), "matrix");

        const std::size_t m = qr_.rows();
        const std::size_t n = qr_.cols();
        const std::size_t t = std::min(m, n);
        perm_.resize(n);
        std::iota(perm_.begin(), perm_.end(), std::size_t{0});
        tau_.assign(t, 0.0);

        for (std::size_t j = 0; j < t; ++j) {
            std::size_t best = j;
            double best_norm = -1.0;
            for (std::size_t c = j; c < n; ++c) {
                double s = 0.0;
                for (std::size_t i = j; i < m; ++i) s += qr_(i, c) * qr_(i, c);
                if (s > best_norm) {
                    best_norm = s;
                    best = c;
                }
            }
            if (best != j) {
                for (std::size_t i = 0; i < m; ++i) std::swap(qr_(i, j), qr_(i, best));
                std::swap(perm_[j], perm_[best]);
            }
            tau_[j] = detail::make_reflector(qr_, j, j);
            detail::apply_reflector_to_columns(qr_, j, j, tau_[j], j + 1);
        }

        const double lead = std::abs(qr_(0, 0));
        rank_ = 0;
        while (rank_ < t && lead > 0.0 && std::abs(qr_(rank_, rank_)) > rank_tol * lead) ++rank_;

        // Z from the QR of the transposed leading rows.
        z_ = Matrix(n, rank_);
        for (std::size_t i = 0; i < rank_; ++i)
            for (std::size_t j = i; j < n; ++j) z_(j, i) = qr_(i, j);
        ztau_.assign(rank_, 0.0);
        for (std::size_t j = 0; j < rank_; ++j) {
            ztau_[j] = detail::make_reflector(z_, j, j);
            detail::apply_reflector_to_columns(z_, j, j, ztau_[j], j + 1);
        }
    }

    [[nodiscard]] std::size_t rank() const noexcept { return rank_; }
    [[nodiscard]] std::size_t rows() const noexcept { return qr_.rows(); }
    [[nodiscard]] std::size_t cols() const noexcept { return qr_.cols(); }

    [[nodiscard]] LstsqResult solve(std::span<const double> rhs) const {
        if (rhs.size() != rows()) throw DimensionError("lstsq: rhs length mismatch");
        detail::require_finite(rhs, "rhs");
        std::vector<double> c(rhs.begin(), rhs.end());
        for (std::size_t j = 0; j < tau_.size(); ++j) detail::apply_reflector(qr_, j, j, tau_[j], c);

        LstsqResult res;
        res.numerical_rank = rank_;
        res.residual_norm = norm2(std::span<const double>(c).subspan(rank_));

        // U^T w = c(0:r), U^T lower triangular.
        std::vector<double> w(cols(), 0.0);
        for (std::size_t i = 0; i < rank_; ++i) {
            double s = c[i];
            for (std::size_t k = 0; k < i; ++k) s -= z_(k, i) * w[k];
            w[i] = s / z_(i, i);
        }
        apply_z(w);
        res.solution.assign(cols(), 0.0);
        for (std::size_t j = 0; j < cols(); ++j) res.solution[perm_[j]] = w[j];
        return res;
    }

    /// Orthonormal basis of the null space, cols() x (cols() - rank()).
    [[nodiscard]] Matrix null_space_basis() const {
        const std::size_t n = cols();
        Matrix basis(n, n - rank_);
        std::vector<double> w(n);
        for (std::size_t b = 0; b < n - rank_; ++b) {
            std::fill(w.begin(), w.end(), 0.0);
            w[rank_ + b] = 1.0;
            apply_z(w);
            for (std::size_t j = 0; j < n; ++j) basis(perm_[j], b) = w[j];
        }
        return basis;
    }

    /// Orthogonal projection onto the row space of K.
    [[nodiscard]] std::vector<double> project_row_space(std::span<const double> x) const {
        if (x.size() != cols()) throw DimensionError("project_row_space: length mismatch");
        std::vector<double> w(cols());
        for (std::size_t j = 0; j < cols(); ++j) w[j] = x[perm_[j]];
        for (std::size_t j = 0; j < rank_; ++j) detail::apply_reflector(z_, j, j, ztau_[j], w);
        std::fill(w.begin() + static_cast<std::ptrdiff_t>(rank_), w.end(), 0.0);
        apply_z(w);
        std::vector<double> out(cols());
        for (std::size_t j = 0; j < cols(); ++j) out[perm_[j]] = w[j];
        return out;
    }

private:
    void apply_z(std::span<double> w) const {
        for (std::size_t j = rank_; j-- > 0;) detail::apply_reflector(z_, j, j, ztau_[j], w);
    }

    Matrix qr_;
    std::vector<double> tau_;
    std::vector<std::size_t> perm_;
    std::size_t rank_ = 0;
    Matrix z_;
    std::vector<double> ztau_;
};

/// Minimum-2-norm solution of min ||K x - rhs||.
inline LstsqResult min_norm_lstsq(const Matrix& k, std::span<const double> rhs,
                                  double rank_tol = kDefaultRankTol) {
    return CompleteOrthogonalDecomposition(k, rank_tol).solve(rhs);
}

/// K vec(psi(X)) = vec(psi(D)) with K = I_n (x) psi(A) + psi(C)^T (x) I_m.
struct UnfoldedSystem {
    Matrix k;
    std::vector<double> rhs;
    std::size_t m = 0;
    std::size_t n = 0;
};

inline UnfoldedSystem unfold_system(const SylvesterProblem& problem,
                                    std::size_t size_cap = kDefaultOracleSizeCap) {
    const std::size_t m = problem.d().rows();
    const std::size_t n = problem.d().cols();
    if (m * n > size_cap) {
        throw SizeError("unfolded system has m*n = " + std::to_string(m * n) +
                        ", above the cap of " + std::to_string(size_cap));
    }
    const Matrix a = psi(problem.a()).to_matrix();
    const Matrix c = psi(problem.c()).to_matrix();
    Matrix k = kron(Matrix::identity(n), a);
    const Matrix right = kron(transposed(c), Matrix::identity(m));
    for (std::size_t i = 0; i < k.data().size(); ++i) k.data()[i] += right.data()[i];
    const auto d = problem.d().data();
    return UnfoldedSystem{std::move(k), std::vector<double>(d.begin(), d.end()), m, n};
}

struct OracleResult {
    bool consistent = false;
    DenseTensor min_norm_solution;
    double residual_norm = 0.0;
    std::size_t numerical_rank = 0;
};

/// Consistent iff the least-squares residual is at most rank_tol * ||rhs|| * m * n.
inline OracleResult oracle_solve(const SylvesterProblem& problem,
                                 double rank_tol = kDefaultRankTol,
                                 std::size_t size_cap = kDefaultOracleSizeCap) {
    const UnfoldedSystem sys = unfold_system(problem, size_cap);
    const LstsqResult ls = min_norm_lstsq(sys.k, sys.rhs, rank_tol);
    OracleResult out;
    out.residual_norm = ls.residual_norm;
    out.numerical_rank = ls.numerical_rank;
    out.consistent = ls.residual_norm <=
                     rank_tol * norm2(sys.rhs) * static_cast<double>(sys.m * sys.n);
    out.min_norm_solution = DenseTensor(problem.d().row_extents(), problem.d().col_extents(),
                                        ls.solution);
    return out;
}

}  // namespace tsylv
