// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tsylv/dense_tensor.hpp"
#include "tsylv/errors.hpp"
#include "tsylv/tensor_ops.hpp"

namespace tsylv {

/// The equation A *_M X + X *_N C = D.
class SylvesterProblem {
public:
    SylvesterProblem(DenseTensor a, DenseTensor c, DenseTensor d)
        : a_(std::move(a)), c_(std::move(c)), d_(std::move(d)) {
        if (a_.row_extents() != a_.col_extents()) {
            throw DimensionError("A must have equal row and column extents, got " +
                                 format_extents(a_.row_extents()) + "x" +
                                 format_extents(a_.col_extents()));
        }
        if (c_.row_extents() != c_.col_extents()) {
            throw DimensionError("C must have equal row and column extents, got " +
                                 format_extents(c_.row_extents()) + "x" +
                                 format_extents(c_.col_extents()));
        }
        if (d_.row_extents() != a_.row_extents() || d_.col_extents() != c_.row_extents()) {
            throw DimensionError("D must be " + format_extents(a_.row_extents()) + "x" +
                                 format_extents(c_.row_extents()) + ", got " +
                                 format_extents(d_.row_extents()) + "x" +
                                 format_extents(d_.col_extents()));
        }
        if (a_.row_order() == 0 || c_.row_order() == 0) {
            throw DimensionError("A and C need at least one mode per block");
        }
    }

    [[nodiscard]] const DenseTensor& a() const noexcept { return a_; }
    [[nodiscard]] const DenseTensor& c() const noexcept { return c_; }
    [[nodiscard]] const DenseTensor& d() const noexcept { return d_; }

    /// Zero tensor with the unknown's shape.
    [[nodiscard]] DenseTensor zero_unknown() const { return DenseTensor::zeros_like(d_); }

    void require_unknown_shape(const DenseTensor& x, const char* what) const {
        if (!x.same_shape(d_)) {
            throw DimensionError(std::string(what) + " must be " +
                                 format_extents(d_.row_extents()) + "x" +
                                 format_extents(d_.col_extents()) + ", got " +
                                 format_extents(x.row_extents()) + "x" +
                                 format_extents(x.col_extents()));
        }
    }

private:
    DenseTensor a_;
    DenseTensor c_;
    DenseTensor d_;
};

struct SolveOptions {
    double epsilon = 1.0e-10;
    double epsilon_p = 1.0e-12;
    std::size_t k_max = 1000;
    /// Stop on ||R|| < epsilon * ||D|| instead of the absolute test.
    bool relative_residual = false;

    void validate() const {
        if (!(epsilon > 0.0) || !std::isfinite(epsilon))
            throw std::invalid_argument("epsilon must be a positive finite number");
        if (!(epsilon_p > 0.0) || !std::isfinite(epsilon_p))
            throw std::invalid_argument("epsilon_p must be a positive finite number");
        if (k_max < 1) throw std::invalid_argument("k_max must be at least 1");
    }
};

enum class SolveStatus { Converged, Inconsistent, IterationLimit };

inline std::string_view to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Converged: return "Converged";
        case SolveStatus::Inconsistent: return "Inconsistent";
        case SolveStatus::IterationLimit: return "IterationLimit";
    }
    return "Unknown";
}

/// Snapshot handed to an iteration observer. `k` is the 1-based index of the
/// iterate X^(k); R and P are the residual and direction belonging to it.
/// `direction_preimage` is Q^(k) with P^(k) = adjoint(Q^(k)).
struct SolverState {
    const DenseTensor& X;
    const DenseTensor& R;
    const DenseTensor& P;
    const DenseTensor& direction_preimage;
    double r_norm_sq;
    std::size_t k;
};

using IterationObserver = std::function<void(const SolverState&)>;

struct SolveOutcome {
    SolveStatus status = SolveStatus::IterationLimit;
    DenseTensor solution;
    /// ||R^(k)|| for k = 1 .. iterations + 1.
    std::vector<double> residual_history;
    /// Number of X updates performed.
    std::size_t iterations = 0;
    double final_direction_norm = 0.0;
    double direction_threshold = 0.0;

    [[nodiscard]] double final_residual() const {
        return residual_history.empty() ? 0.0 : residual_history.back();
    }
};

/// A *_M X + X *_N C
inline DenseTensor apply_operator(const DenseTensor& a, const DenseTensor& c,
                                  const DenseTensor& x) {
    if (x.row_extents() != a.col_extents() || x.col_extents() != c.row_extents()) {
        throw DimensionError("apply_operator: X is " + format_extents(x.row_extents()) + "x" +
                             format_extents(x.col_extents()) + ", expected " +
                             format_extents(a.col_extents()) + "x" +
                             format_extents(c.row_extents()));
    }
    DenseTensor left = einstein_product(a, x, a.col_order());
    axpy(1.0, einstein_product(x, c, x.col_order()), left);
    return left;
}

/// A^T *_M R + R *_N C^T, the adjoint of apply_operator under <.,.>.
inline DenseTensor apply_adjoint(const DenseTensor& a, const DenseTensor& c,
                                 const DenseTensor& r) {
    if (r.row_extents() != a.row_extents() || r.col_extents() != c.col_extents()) {
        throw DimensionError("apply_adjoint: R is " + format_extents(r.row_extents()) + "x" +
                             format_extents(r.col_extents()) + ", expected " +
                             format_extents(a.row_extents()) + "x" +
                             format_extents(c.col_extents()));
    }
    DenseTensor left = einstein_product(transpose(a), r, a.row_order());
    axpy(1.0, einstein_product(r, transpose(c), r.col_order()), left);
    return left;
}

namespace detail {

inline void require_finite(double v, const char* what, std::size_t iteration) {
    if (!std::isfinite(v)) throw NumericalBreakdown(std::string(what) + " is not finite", iteration);
}

}  // namespace detail

/// Finite-step gradient/conjugate-direction iteration for
/// A *_M X + X *_N C = D, started from `x1`.
///
/// Each step updates X^(k+1) = X^(k) + alpha(k) P^(k) with
/// alpha(k) = ||R^(k)||^2 / ||P^(k)||^2, recomputes R^(k+1) from its definition
/// and sets P^(k+1) = adjoint(R^(k+1)) + beta(k+1) P^(k) with
/// beta(k+1) = ||R^(k+1)||^2 / ||R^(k)||^2.
///
/// Termination: Converged once ||R|| < epsilon. Inconsistent once the
/// direction vanishes while R does not, i.e.
///   ||P^(k)|| <= epsilon_p * (||A|| + ||C||) * ||Q^(k)||,
/// where Q^(k) = R^(k) + beta(k) Q^(k-1) is the preimage with
/// P^(k) = adjoint(Q^(k)); the right side bounds ||adjoint|| * ||Q^(k)||, so the
/// test is scale free. IterationLimit after k_max updates.
inline SolveOutcome solve(const SylvesterProblem& problem, DenseTensor x1,
                          const SolveOptions& opts = {},
                          const IterationObserver& observer = {}) {
    opts.validate();
    problem.require_unknown_shape(x1, "initial iterate");
    const DenseTensor& a = problem.a();
    const DenseTensor& c = problem.c();
    const DenseTensor& d = problem.d();

    const double operator_scale = fro_norm(a) + fro_norm(c);
    const double stop =
        opts.relative_residual ? opts.epsilon * fro_norm(d) : opts.epsilon;

    SolveOutcome out;
    DenseTensor x = std::move(x1);
    DenseTensor r = d - apply_operator(a, c, x);
    DenseTensor p = apply_adjoint(a, c, r);
    DenseTensor q = r;
    double rr = inner(r, r);
    detail::require_finite(rr, "residual norm", 1);
    out.residual_history.push_back(std::sqrt(rr));
    if (observer) observer(SolverState{x, r, p, q, rr, 1});

    for (;;) {
        const double r_norm = std::sqrt(rr);
        const double pp = inner(p, p);
        detail::require_finite(pp, "direction norm", out.iterations + 1);
        out.final_direction_norm = std::sqrt(pp);
        out.direction_threshold = opts.epsilon_p * operator_scale * fro_norm(q);

        if (r_norm < stop || rr == 0.0) {
            out.status = SolveStatus::Converged;
            break;
        }
        if (out.final_direction_norm <= out.direction_threshold || pp == 0.0) {
            out.status = SolveStatus::Inconsistent;
            break;
        }
        if (out.iterations >= opts.k_max) {
            out.status = SolveStatus::IterationLimit;
            break;
        }

        const double alpha = rr / pp;
        detail::require_finite(alpha, "alpha", out.iterations + 1);
        axpy(alpha, p, x);
        ++out.iterations;

        r = d - apply_operator(a, c, x);
        const double rr_next = inner(r, r);
        detail::require_finite(rr_next, "residual norm", out.iterations + 1);
        const double beta = rr_next / rr;
        detail::require_finite(beta, "beta", out.iterations + 1);

        DenseTensor p_next = apply_adjoint(a, c, r);
        axpy(beta, p, p_next);
        p = std::move(p_next);
        DenseTensor q_next = r;
        axpy(beta, q, q_next);
        q = std::move(q_next);
        rr = rr_next;

        out.residual_history.push_back(std::sqrt(rr));
        if (observer) observer(SolverState{x, r, p, q, rr, out.iterations + 1});
    }
    out.solution = std::move(x);
    return out;
}

/// Least Frobenius-norm solution: the iteration started from the zero tensor.
inline SolveOutcome solve_min_norm(const SylvesterProblem& problem,
                                   const SolveOptions& opts = {},
                                   const IterationObserver& observer = {}) {
    return solve(problem, problem.zero_unknown(), opts, observer);
}

struct NearnessResult {
    DenseTensor x_hat;
    double distance = 0.0;
    SolveOutcome outcome;
};

/// Closest solution to `x0` in Frobenius norm: the min-norm solution Y of
/// A *_M Y + Y *_N C = D - A *_M X0 - X0 *_N C, shifted back by X0.
inline NearnessResult solve_nearness(const SylvesterProblem& problem, const DenseTensor& x0,
                                     const SolveOptions& opts = {}) {
    problem.require_unknown_shape(x0, "X0");
    SylvesterProblem shifted(problem.a(), problem.c(),
                             problem.d() - apply_operator(problem.a(), problem.c(), x0));
    NearnessResult res;
    res.outcome = solve_min_norm(shifted, opts);
    res.distance = fro_norm(res.outcome.solution);
    res.x_hat = res.outcome.solution + x0;
    return res;
}

}  // namespace tsylv
