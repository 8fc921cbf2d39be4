// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "tsylv/dense_tensor.hpp"
#include "tsylv/matrix.hpp"
#include "tsylv/oracle.hpp"
#include "tsylv/solver.hpp"
#include "tsylv/tensor_ops.hpp"

namespace tsylv {

/// Seeded uniform numbers. The conversion from engine bits is done here
/// rather than by a std distribution so the stream is identical on every
/// standard library.
class UniformSource {
public:
    explicit UniformSource(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [lo, hi).
    double operator()(double lo = -1.0, double hi = 1.0) {
        const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
        return lo + (hi - lo) * u;
    }

    Matrix matrix(std::size_t rows, std::size_t cols, double lo = -1.0, double hi = 1.0) {
        Matrix m(rows, cols);
        for (double& x : m.data()) x = (*this)(lo, hi);
        return m;
    }

    DenseTensor tensor(const Extents& rows, const Extents& cols) {
        DenseTensor t(rows, cols);
        for (double& x : t.data()) x = (*this)();
        return t;
    }

private:
    std::mt19937_64 engine_;
};

enum class InstanceKind { Consistent, Inconsistent };

/// How psi(A) and psi(C) are drawn.
///  Uniform:  i.i.d. entries on [-1, 1]; singular operators use
///            rank-deficient products U diag(0,1,..,1) V.
///  Spectral: Q T Q^T with Q orthogonal and T upper triangular, eigenvalues
///            on [1.5, 2.5] and off-diagonal entries on [-0.5, 0.5]; singular
///            operators pin one eigenvalue pair to +1 / -1. Keeps the
///            unfolded operator well conditioned on its range.
enum class InstanceFamily { Uniform, Spectral };

struct GenerateOptions {
    Extents row_extents;
    Extents col_extents;
    std::uint64_t seed = 1;
    InstanceKind kind = InstanceKind::Consistent;
    InstanceFamily family = InstanceFamily::Uniform;
    /// Consistent instances only; inconsistent ones are always singular.
    bool singular = false;
    std::size_t max_attempts = 8;
};

struct GeneratedInstance {
    SylvesterProblem problem;
    std::optional<DenseTensor> x_exact;
    std::size_t attempts = 0;
};

namespace detail {

inline Matrix singular_uniform(UniformSource& rng, std::size_t n) {
    if (n == 1) return Matrix(1, 1);
    Matrix u = rng.matrix(n, n);
    for (std::size_t i = 0; i < n; ++i) u(i, 0) = 0.0;
    return matmul(u, rng.matrix(n, n));
}

inline Matrix spectral(UniformSource& rng, std::size_t n, std::optional<double> pinned) {
    Matrix t(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < j; ++i) t(i, j) = rng(-0.5, 0.5);
        t(j, j) = rng(1.5, 2.5);
    }
    if (pinned) t(0, 0) = *pinned;
    const Matrix q = orthogonal_factor(rng.matrix(n, n));
    return matmul(matmul(q, t), transposed(q));
}

inline GeneratedInstance generate_once(const GenerateOptions& opt, UniformSource& rng) {
    const Extents& ie = opt.row_extents;
    const Extents& je = opt.col_extents;
    const std::size_t m = extent_product(ie);
    const std::size_t n = extent_product(je);
    const bool singular = opt.singular || opt.kind == InstanceKind::Inconsistent;

    Matrix a, c;
    if (opt.family == InstanceFamily::Uniform) {
        a = singular ? singular_uniform(rng, m) : rng.matrix(m, m);
        c = singular ? singular_uniform(rng, n) : rng.matrix(n, n);
    } else {
        a = spectral(rng, m, singular ? std::optional(1.0) : std::nullopt);
        c = spectral(rng, n, singular ? std::optional(-1.0) : std::nullopt);
    }
    DenseTensor ta = psi_inverse(a, ie, ie);
    DenseTensor tc = psi_inverse(c, je, je);
    DenseTensor x = rng.tensor(ie, je);
    DenseTensor d = apply_operator(ta, tc, x);

    if (opt.kind == InstanceKind::Consistent) {
        return GeneratedInstance{SylvesterProblem(std::move(ta), std::move(tc), std::move(d)),
                                 std::move(x), 0};
    }

    // Add the part of a random tensor that lies outside the operator's range,
    // scaled to ||D||.
    SylvesterProblem probe(ta, tc, d);
    const UnfoldedSystem sys = unfold_system(probe);
    DenseTensor v = rng.tensor(ie, je);
    const LstsqResult ls = min_norm_lstsq(sys.k, v.data());
    const std::vector<double> kv = matvec(sys.k, ls.solution);
    auto vd = v.data();
    for (std::size_t i = 0; i < vd.size(); ++i) vd[i] -= kv[i];
    const double vn = fro_norm(v);
    const double dn = fro_norm(d);
    if (vn > 0.0) axpy((dn > 0.0 ? dn : 1.0) / vn, v, d);
    return GeneratedInstance{SylvesterProblem(std::move(ta), std::move(tc), std::move(d)),
                             std::nullopt, 0};
}

}  // namespace detail

/// Random problem certified by the oracle: consistent instances must come out
/// consistent and inconsistent ones inconsistent, retrying with the same
/// stream up to `max_attempts` times.
inline GeneratedInstance generate_instance(const GenerateOptions& opt) {
    if (opt.row_extents.empty() || opt.col_extents.empty()) {
        throw DimensionError("generate_instance needs nonempty row and column extents");
    }
    UniformSource rng(opt.seed);
    const bool want_consistent = opt.kind == InstanceKind::Consistent;
    for (std::size_t attempt = 1; attempt <= opt.max_attempts; ++attempt) {
        GeneratedInstance inst = detail::generate_once(opt, rng);
        if (oracle_solve(inst.problem).consistent == want_consistent) {
            inst.attempts = attempt;
            return inst;
        }
    }
    throw std::runtime_error("oracle certification failed after " +
                             std::to_string(opt.max_attempts) + " attempts");
}

}  // namespace tsylv
