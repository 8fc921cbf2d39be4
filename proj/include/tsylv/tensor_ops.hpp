// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "tsylv/dense_tensor.hpp"
#include "tsylv/matrix.hpp"

namespace tsylv {

/// Einstein product A *_N B: contracts the trailing `n_contract` modes of A
/// with the leading `n_contract` modes of B.
///
/// The result carries A's surviving modes followed by B's surviving modes.
/// Its row block is A's surviving row modes; everything after them is the
/// column block. Contracting exactly A's column block against B's row block
/// therefore gives the (A.rows | B.cols) split and psi(A *_N B) = psi(A) psi(B).
inline DenseTensor einstein_product(const DenseTensor& a, const DenseTensor& b,
                                    std::size_t n_contract) {
    if (n_contract > a.order() || n_contract > b.order()) {
        throw DimensionError("einstein_product: contracting " + std::to_string(n_contract) +
                             " modes of order-" + std::to_string(a.order()) + " and order-" +
                             std::to_string(b.order()) + " tensors");
    }
    const Extents ae = a.extents();
    const Extents be = b.extents();
    const std::size_t a_keep = ae.size() - n_contract;
    for (std::size_t k = 0; k < n_contract; ++k) {
        if (ae[a_keep + k] != be[k]) {
            throw DimensionError("einstein_product: contracted extents " +
                                 format_extents(std::span(ae).subspan(a_keep)) + " vs " +
                                 format_extents(std::span(be).first(n_contract)));
        }
    }

    Extents rows(ae.begin(), ae.begin() + std::min(a.row_order(), a_keep));
    Extents cols(ae.begin() + rows.size(), ae.begin() + a_keep);
    cols.insert(cols.end(), be.begin() + n_contract, be.end());
    if (rows.empty() && !cols.empty()) std::swap(rows, cols);

    // Under first-index-fastest storage both operands are already column-major
    // matrices: A is lead x inner and B is inner x trail.
    const std::size_t lead = extent_product(std::span(ae).first(a_keep));
    const std::size_t inner = extent_product(std::span(be).first(n_contract));
    const std::size_t trail = extent_product(std::span(be).subspan(n_contract));

    std::vector<double> out(lead * trail, 0.0);
    const auto ad = a.data();
    const auto bd = b.data();
    for (std::size_t r = 0; r < trail; ++r) {
        for (std::size_t k = 0; k < inner; ++k) {
            const double bkr = bd[k + inner * r];
            if (bkr == 0.0) continue;
            const double* acol = ad.data() + lead * k;
            double* ocol = out.data() + lead * r;
            for (std::size_t l = 0; l < lead; ++l) ocol[l] += acol[l] * bkr;
        }
    }
    return DenseTensor(std::move(rows), std::move(cols), std::move(out));
}

/// Swaps the row and column blocks: transpose(A)(j, i) = A(i, j).
inline DenseTensor transpose(const DenseTensor& a) {
    if (a.row_order() == 0 || a.col_order() == 0) {
        throw DimensionError("transpose needs nonempty row and column blocks");
    }
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    std::vector<double> out(m * n);
    const auto d = a.data();
    for (std::size_t s = 0; s < n; ++s)
        for (std::size_t p = 0; p < m; ++p) out[s + n * p] = d[p + m * s];
    return DenseTensor(a.col_extents(), a.row_extents(), std::move(out));
}

inline double trace(const DenseTensor& a) {
    if (a.row_extents() != a.col_extents()) {
        throw DimensionError("trace needs equal row and column extents, got " +
                             format_extents(a.row_extents()) + " and " +
                             format_extents(a.col_extents()));
    }
    const std::size_t m = a.rows();
    double t = 0.0;
    for (std::size_t p = 0; p < m; ++p) t += a.data()[p + m * p];
    return t;
}

inline void require_same_shape(const DenseTensor& a, const DenseTensor& b, const char* op) {
    if (!a.same_shape(b)) {
        throw DimensionError(std::string(op) + ": shape " + format_extents(a.row_extents()) +
                             "x" + format_extents(a.col_extents()) + " vs " +
                             format_extents(b.row_extents()) + "x" +
                             format_extents(b.col_extents()));
    }
}

inline double inner(const DenseTensor& a, const DenseTensor& b) {
    require_same_shape(a, b, "inner");
    return dot(a.data(), b.data());
}

inline double fro_norm(const DenseTensor& a) { return norm2(a.data()); }

/// Kronecker product as a Kr-block tensor: the (r, s) block is A_(i,j) * B with
/// r = ivec(i), s = ivec(j). B's modes come first in each block so that
/// psi(kron(A, B)) equals the matrix Kronecker product psi(A) (x) psi(B).
inline DenseTensor kron(const DenseTensor& a, const DenseTensor& b) {
    if (a.row_order() == 0 || a.col_order() == 0 || b.row_order() == 0 ||
        b.col_order() == 0) {
        throw DimensionError("kron needs nonempty row and column blocks");
    }
    Extents rows = b.row_extents();
    rows.insert(rows.end(), a.row_extents().begin(), a.row_extents().end());
    Extents cols = b.col_extents();
    cols.insert(cols.end(), a.col_extents().begin(), a.col_extents().end());

    const std::size_t am = a.rows(), an = a.cols(), bm = b.rows(), bn = b.cols();
    const std::size_t km = am * bm;
    std::vector<double> out(km * an * bn);
    const auto ad = a.data();
    const auto bd = b.data();
    for (std::size_t aj = 0; aj < an; ++aj)
        for (std::size_t ai = 0; ai < am; ++ai) {
            const double s = ad[ai + am * aj];
            for (std::size_t bj = 0; bj < bn; ++bj)
                for (std::size_t bi = 0; bi < bm; ++bi)
                    out[(ai * bm + bi) + km * (aj * bn + bj)] = s * bd[bi + bm * bj];
        }
    return DenseTensor(std::move(rows), std::move(cols), std::move(out));
}

/// Lines up the row-block subtensors A(i, :, .., :) in ivec order, collapsing
/// the row block into one mode of extent m. The flat data is unchanged.
inline DenseTensor vec(const DenseTensor& a) {
    if (a.row_order() == 0) throw DimensionError("vec needs a nonempty row block");
    return a.reshaped({a.rows()}, a.col_extents());
}

/// psi(A): the m x n unfolding. Non-owning; valid while the tensor lives.
/// Entry (p, s), 1-based, is the tensor element with ivec(i) = p, ivec(j) = s.
class ModeSplitMatrixView {
public:
    ModeSplitMatrixView(std::span<const double> data, std::size_t rows, std::size_t cols)
        : data_(data), rows_(rows), cols_(cols) {
        if (data_.size() != rows_ * cols_) {
            throw DimensionError("psi view: " + std::to_string(data_.size()) +
                                 " entries for " + std::to_string(rows_) + "x" +
                                 std::to_string(cols_));
        }
    }

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] std::span<const double> data() const noexcept { return data_; }

    double operator()(std::size_t p, std::size_t s) const {
        if (p < 1 || p > rows_ || s < 1 || s > cols_) {
            throw DimensionError("psi view: entry (" + std::to_string(p) + "," +
                                 std::to_string(s) + ") outside " + std::to_string(rows_) +
                                 "x" + std::to_string(cols_));
        }
        return data_[(p - 1) + rows_ * (s - 1)];
    }

    [[nodiscard]] Matrix to_matrix() const {
        return Matrix(rows_, cols_, std::vector<double>(data_.begin(), data_.end()));
    }

private:
    std::span<const double> data_;
    std::size_t rows_;
    std::size_t cols_;
};

inline ModeSplitMatrixView psi(const DenseTensor& a) {
    return ModeSplitMatrixView(a.data(), a.rows(), a.cols());
}

inline DenseTensor psi_inverse(const ModeSplitMatrixView& m, Extents row_extents,
                               Extents col_extents) {
    const std::size_t er = extent_product(row_extents);
    const std::size_t ec = extent_product(col_extents);
    if (er != m.rows() || ec != m.cols()) {
        throw DimensionError("psi_inverse: " + std::to_string(m.rows()) + "x" +
                             std::to_string(m.cols()) + " matrix for extents " +
                             format_extents(row_extents) + "x" + format_extents(col_extents));
    }
    return DenseTensor(std::move(row_extents), std::move(col_extents),
                       std::vector<double>(m.data().begin(), m.data().end()));
}

inline DenseTensor psi_inverse(const Matrix& m, Extents row_extents, Extents col_extents) {
    return psi_inverse(ModeSplitMatrixView(m.data(), m.rows(), m.cols()),
                       std::move(row_extents), std::move(col_extents));
}

/// Identity tensor over `extents`: entry prod_k delta(i_k, j_k).
inline DenseTensor identity(const Extents& extents) {
    DenseTensor id(extents, extents);
    const std::size_t m = id.rows();
    for (std::size_t p = 0; p < m; ++p) id.data()[p + m * p] = 1.0;
    return id;
}

inline DenseTensor add(const DenseTensor& a, const DenseTensor& b) {
    require_same_shape(a, b, "add");
    DenseTensor out = a;
    auto od = out.data();
    const auto bd = b.data();
    for (std::size_t i = 0; i < od.size(); ++i) od[i] += bd[i];
    return out;
}

inline DenseTensor subtract(const DenseTensor& a, const DenseTensor& b) {
    require_same_shape(a, b, "subtract");
    DenseTensor out = a;
    auto od = out.data();
    const auto bd = b.data();
    for (std::size_t i = 0; i < od.size(); ++i) od[i] -= bd[i];
    return out;
}

inline DenseTensor scale(double alpha, const DenseTensor& a) {
    DenseTensor out = a;
    for (double& x : out.data()) x *= alpha;
    return out;
}

/// y += alpha * x
inline void axpy(double alpha, const DenseTensor& x, DenseTensor& y) {
    require_same_shape(x, y, "axpy");
    auto yd = y.data();
    const auto xd = x.data();
    for (std::size_t i = 0; i < yd.size(); ++i) yd[i] += alpha * xd[i];
}

inline DenseTensor operator+(const DenseTensor& a, const DenseTensor& b) { return add(a, b); }
inline DenseTensor operator-(const DenseTensor& a, const DenseTensor& b) {
    return subtract(a, b);
}
inline DenseTensor operator*(double alpha, const DenseTensor& a) { return scale(alpha, a); }

}  // namespace tsylv
