// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tsylv/errors.hpp"

namespace tsylv {

using Extents = std::vector<std::size_t>;

inline std::size_t extent_product(std::span<const std::size_t> extents) {
    return std::accumulate(extents.begin(), extents.end(), std::size_t{1},
                           std::multiplies<>{});
}

inline std::string format_extents(std::span<const std::size_t> extents) {
    std::string out = "[";
    for (std::size_t i = 0; i < extents.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(extents[i]);
    }
    return out + "]";
}

/// Index linearization, first index fastest. Indices are 1-based and so is
/// the result: ivec({1,..,1}) == 1, ivec(extents) == prod(extents).
inline std::size_t ivec(std::span<const std::size_t> index,
                        std::span<const std::size_t> extents) {
    if (index.size() != extents.size() || index.empty()) {
        throw DimensionError("ivec: index has " + std::to_string(index.size()) +
                             " entries for " + std::to_string(extents.size()) +
                             " extents");
    }
    std::size_t pos = 0;
    std::size_t stride = 1;
    for (std::size_t j = 0; j < index.size(); ++j) {
        if (index[j] < 1 || index[j] > extents[j]) {
            throw DimensionError("ivec: index " + std::to_string(index[j]) +
                                 " out of range 1.." + std::to_string(extents[j]) +
                                 " in mode " + std::to_string(j + 1));
        }
        pos += (index[j] - 1) * stride;
        stride *= extents[j];
    }
    return pos + 1;
}

/// Inverse of ivec: the 1-based multi-index at 1-based linear position.
inline std::vector<std::size_t> ivec_inverse(std::size_t position,
                                             std::span<const std::size_t> extents) {
    const std::size_t total = extent_product(extents);
    if (position < 1 || position > total) {
        throw DimensionError("ivec_inverse: position " + std::to_string(position) +
                             " out of range 1.." + std::to_string(total));
    }
    std::vector<std::size_t> index(extents.size());
    std::size_t rest = position - 1;
    for (std::size_t j = 0; j < extents.size(); ++j) {
        index[j] = rest % extents[j] + 1;
        rest /= extents[j];
    }
    return index;
}

/// Dense real tensor with a row-mode / column-mode split.
///
/// The modes are I_1..I_M (row block) followed by J_1..J_N (column block).
/// Storage is generalized column-major over the concatenated modes, so the
/// flat array is simultaneously the ivec order of the tensor and the
/// column-major layout of its m x n unfolding (m = prod I, n = prod J).
/// The column block may be empty; the row block may be empty only when the
/// column block is too (a scalar).
class DenseTensor {
public:
    DenseTensor() : data_(1, 0.0) {}

    DenseTensor(Extents row_extents, Extents col_extents)
        : row_extents_(std::move(row_extents)), col_extents_(std::move(col_extents)) {
        validate_extents();
        data_.assign(extent_product(row_extents_) * extent_product(col_extents_), 0.0);
    }

    DenseTensor(Extents row_extents, Extents col_extents, std::vector<double> data)
        : row_extents_(std::move(row_extents)),
          col_extents_(std::move(col_extents)),
          data_(std::move(data)) {
        validate_extents();
        const std::size_t expected =
            extent_product(row_extents_) * extent_product(col_extents_);
        if (data_.size() != expected) {
            throw DimensionError("tensor " + format_extents(row_extents_) + "x" +
                                 format_extents(col_extents_) + " needs " +
                                 std::to_string(expected) + " entries, got " +
                                 std::to_string(data_.size()));
        }
    }

    static DenseTensor zeros_like(const DenseTensor& t) {
        return DenseTensor(t.row_extents_, t.col_extents_);
    }

    [[nodiscard]] const Extents& row_extents() const noexcept { return row_extents_; }
    [[nodiscard]] const Extents& col_extents() const noexcept { return col_extents_; }

    [[nodiscard]] Extents extents() const {
        Extents all = row_extents_;
        all.insert(all.end(), col_extents_.begin(), col_extents_.end());
        return all;
    }

    [[nodiscard]] std::size_t row_order() const noexcept { return row_extents_.size(); }
    [[nodiscard]] std::size_t col_order() const noexcept { return col_extents_.size(); }
    [[nodiscard]] std::size_t order() const noexcept { return row_order() + col_order(); }

    /// m: product of the row extents.
    [[nodiscard]] std::size_t rows() const { return extent_product(row_extents_); }
    /// n: product of the column extents.
    [[nodiscard]] std::size_t cols() const { return extent_product(col_extents_); }
    [[nodiscard]] std::size_t size() const noexcept { return data_.size(); }

    [[nodiscard]] std::span<const double> data() const noexcept { return data_; }
    [[nodiscard]] std::span<double> data() noexcept { return data_; }

    /// Element at a 1-based multi-index over the concatenated modes.
    [[nodiscard]] double at(std::span<const std::size_t> index) const {
        return data_[offset(index)];
    }
    double& at(std::span<const std::size_t> index) { return data_[offset(index)]; }

    double at(std::initializer_list<std::size_t> index) const {
        return at(std::span<const std::size_t>(index.begin(), index.size()));
    }
    double& at(std::initializer_list<std::size_t> index) {
        return at(std::span<const std::size_t>(index.begin(), index.size()));
    }

    [[nodiscard]] bool same_shape(const DenseTensor& other) const noexcept {
        return row_extents_ == other.row_extents_ && col_extents_ == other.col_extents_;
    }

    /// Same data under a different split; only the total entry count must agree.
    [[nodiscard]] DenseTensor reshaped(Extents row_extents, Extents col_extents) const& {
        return DenseTensor(std::move(row_extents), std::move(col_extents), data_);
    }
    [[nodiscard]] DenseTensor reshaped(Extents row_extents, Extents col_extents) && {
        return DenseTensor(std::move(row_extents), std::move(col_extents), std::move(data_));
    }

    friend bool operator==(const DenseTensor&, const DenseTensor&) = default;

private:
    void validate_extents() const {
        if (row_extents_.empty() && !col_extents_.empty()) {
            throw DimensionError("tensor with a column block needs a nonempty row block");
        }
        for (auto e : row_extents_) {
            if (e == 0) throw DimensionError("row extent must be >= 1");
        }
        for (auto e : col_extents_) {
            if (e == 0) throw DimensionError("column extent must be >= 1");
        }
    }

    [[nodiscard]] std::size_t offset(std::span<const std::size_t> index) const {
        if (index.size() != order()) {
            throw DimensionError("index of length " + std::to_string(index.size()) +
                                 " for order-" + std::to_string(order()) + " tensor");
        }
        if (index.empty()) return 0;
        return ivec(index, extents()) - 1;
    }

    Extents row_extents_;
    Extents col_extents_;
    std::vector<double> data_;
};

}  // namespace tsylv
