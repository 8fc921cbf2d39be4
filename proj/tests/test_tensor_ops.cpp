// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>

#include "test_support.hpp"
#include "tsylv/errors.hpp"
#include "tsylv/io.hpp"
#include "tsylv/solver.hpp"
#include "tsylv/tensor_ops.hpp"

using namespace tsylv;
using check::random_tensor;

TEST(EinsteinProduct, IdentityIsNeutral) {
    std::mt19937_64 rng(1);
    const DenseTensor x = random_tensor(rng, {2, 3}, {4});
    const DenseTensor left = einstein_product(identity({2, 3}), x, 2);
    EXPECT_EQ(left, x);
    const DenseTensor right = einstein_product(x, identity({4}), 1);
    EXPECT_EQ(right, x);
}

TEST(EinsteinProduct, MatchesIndexLoops) {
    std::mt19937_64 rng(2);
    const DenseTensor a = random_tensor(rng, {2, 3}, {3, 2});
    const DenseTensor b = random_tensor(rng, {3, 2}, {2, 3});
    const DenseTensor ab = einstein_product(a, b, 2);
    EXPECT_EQ(ab.row_extents(), (Extents{2, 3}));
    EXPECT_EQ(ab.col_extents(), (Extents{2, 3}));
    const auto looped = check::loop_contract(a, b, 2);
    EXPECT_LE(check::diff_norm(ab.data(), looped), 1e-13);
    const Matrix prod = check::loop_matmul(psi(a).to_matrix(), psi(b).to_matrix());
    EXPECT_LE(check::diff_norm(psi(ab).data(), prod.data()), 1e-13);
}

TEST(EinsteinProduct, PartialContractionSplit) {
    std::mt19937_64 rng(3);
    const DenseTensor a = random_tensor(rng, {2, 3}, {4});
    const DenseTensor b = random_tensor(rng, {3, 4}, {5});
    // Contracting the last two modes of A leaves one row mode of A, then B's tail.
    const DenseTensor ab = einstein_product(a, b, 2);
    EXPECT_EQ(ab.row_extents(), (Extents{2}));
    EXPECT_EQ(ab.col_extents(), (Extents{5}));
    EXPECT_LE(check::diff_norm(ab.data(), check::loop_contract(a, b, 2)), 1e-13);
}

TEST(EinsteinProduct, FullContractionGivesScalar) {
    std::mt19937_64 rng(4);
    const DenseTensor a = random_tensor(rng, {2}, {3});
    const DenseTensor s = einstein_product(a, a, 2);
    EXPECT_EQ(s.order(), 0u);
    EXPECT_NEAR(s.data()[0], inner(a, a), 1e-14);
}

TEST(EinsteinProduct, MismatchedExtentsThrow) {
    const DenseTensor a({2}, {3});
    const DenseTensor b({4}, {2});
    EXPECT_THROW((void)einstein_product(a, b, 1), DimensionError);
    EXPECT_THROW((void)einstein_product(a, b, 3), DimensionError);
}

TEST(EinsteinProduct, ReproducesFixtureRightHandSide) {
    const auto pf = io::read_problem(std::string(TSYLV_DATA_DIR) + "/fixed_min_norm.json");
    ASSERT_TRUE(pf.x_exact);
    const DenseTensor d = einstein_product(pf.problem.a(), *pf.x_exact, 2) +
                          einstein_product(*pf.x_exact, pf.problem.c(), 2);
    EXPECT_EQ(d, pf.problem.d());
}

TEST(Transpose, InvolutionAndIdentity) {
    std::mt19937_64 rng(5);
    const DenseTensor a = random_tensor(rng, {2, 3}, {4, 1});
    const DenseTensor t = transpose(a);
    EXPECT_EQ(t.row_extents(), (Extents{4, 1}));
    EXPECT_EQ(transpose(t), a);
    EXPECT_EQ(transpose(identity({2, 3})), identity({2, 3}));
    EXPECT_EQ(t.at({3, 1, 2, 1}), a.at({2, 1, 3, 1}));
    EXPECT_EQ(psi(t).to_matrix(), transposed(psi(a).to_matrix()));
}

TEST(Trace, IdentityAndErrors) {
    EXPECT_EQ(trace(identity({2, 3})), 6.0);
    EXPECT_THROW((void)trace(DenseTensor({2}, {3})), DimensionError);
}

TEST(Inner, MatchesFlatDot) {
    std::mt19937_64 rng(6);
    const DenseTensor a = random_tensor(rng, {2, 2}, {3});
    const DenseTensor b = random_tensor(rng, {2, 2}, {3});
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a.data()[i] * b.data()[i];
    EXPECT_NEAR(inner(a, b), s, 1e-15);
    EXPECT_EQ(inner(a, b), inner(b, a));
    EXPECT_GE(inner(a, a), 0.0);
    EXPECT_THROW((void)inner(a, DenseTensor({4}, {3})), DimensionError);
}

TEST(Inner, EqualsTraceOfTransposedProduct) {
    std::mt19937_64 rng(7);
    const DenseTensor a = random_tensor(rng, {2, 3}, {2});
    const DenseTensor b = random_tensor(rng, {2, 3}, {2});
    EXPECT_NEAR(inner(a, b), trace(einstein_product(transpose(b), a, 2)), 1e-14);
}

TEST(FroNorm, SimpleValues) {
    EXPECT_EQ(fro_norm(DenseTensor({3}, {2})), 0.0);
    EXPECT_EQ(fro_norm(identity({2, 2})), 2.0);
}

TEST(FroNorm, CountingTensor) {
    std::vector<double> data(108);
    for (std::size_t i = 0; i < data.size(); ++i) data[i] = static_cast<double>(i + 1);
    const DenseTensor x({4, 3}, {3, 3}, data);
    const double n = 108.0;
    const double sum_sq = n * (n + 1.0) * (2.0 * n + 1.0) / 6.0;
    EXPECT_EQ(sum_sq, 425754.0);
    EXPECT_NEAR(fro_norm(x), std::sqrt(sum_sq), 1e-10);
}

TEST(Kron, UnfoldsToMatrixKronecker) {
    std::mt19937_64 rng(8);
    const DenseTensor a = random_tensor(rng, {2}, {3, 1});
    const DenseTensor b = random_tensor(rng, {2, 2}, {2});
    const DenseTensor k = kron(a, b);
    const Matrix pa = psi(a).to_matrix();
    const Matrix pb = psi(b).to_matrix();
    const Matrix pk = psi(k).to_matrix();
    ASSERT_EQ(pk.rows(), pa.rows() * pb.rows());
    ASSERT_EQ(pk.cols(), pa.cols() * pb.cols());
    for (std::size_t i = 0; i < pa.rows(); ++i)
        for (std::size_t j = 0; j < pa.cols(); ++j)
            for (std::size_t p = 0; p < pb.rows(); ++p)
                for (std::size_t q = 0; q < pb.cols(); ++q)
                    EXPECT_EQ(pk(i * pb.rows() + p, j * pb.cols() + q), pa(i, j) * pb(p, q));
}

TEST(Kron, IdentityTimesIdentity) {
    const DenseTensor k = kron(identity({2}), identity({3, 2}));
    EXPECT_EQ(k, identity({3, 2, 2}));
}

TEST(Vec, StacksRowSubtensorsInIvecOrder) {
    std::mt19937_64 rng(9);
    const DenseTensor a = random_tensor(rng, {2, 2, 2}, {3});
    const DenseTensor v = vec(a);
    EXPECT_EQ(v.row_extents(), (Extents{8}));
    // Subblock order (1,1,1), (2,1,1), (1,2,1), (2,2,1), (1,1,2), ...
    const std::size_t order[8][3] = {{1, 1, 1}, {2, 1, 1}, {1, 2, 1}, {2, 2, 1},
                                     {1, 1, 2}, {2, 1, 2}, {1, 2, 2}, {2, 2, 2}};
    for (std::size_t k = 0; k < 8; ++k)
        for (std::size_t j = 1; j <= 3; ++j)
            EXPECT_EQ(v.at({k + 1, j}), a.at({order[k][0], order[k][1], order[k][2], j}));
    EXPECT_EQ(vec(DenseTensor({2, 2}, {2})), DenseTensor({4}, {2}));
}

TEST(Psi, FrontalSliceColumnsForThreeByThree) {
    std::mt19937_64 rng(10);
    const DenseTensor a = random_tensor(rng, {3, 3}, {3, 3});
    const auto view = psi(a);
    for (std::size_t k = 1; k <= 3; ++k)
        for (std::size_t l = 1; l <= 3; ++l) {
            const std::size_t col = k + 3 * (l - 1);
            for (std::size_t i1 = 1; i1 <= 3; ++i1)
                for (std::size_t i2 = 1; i2 <= 3; ++i2)
                    EXPECT_EQ(view(i1 + 3 * (i2 - 1), col), a.at({i1, i2, k, l}));
        }
}

TEST(Psi, IdentityAndRoundTrip) {
    EXPECT_EQ(psi(identity({2, 3})).to_matrix(), Matrix::identity(6));
    EXPECT_EQ(psi(identity({2})).to_matrix(), Matrix::identity(2));
    std::mt19937_64 rng(11);
    const DenseTensor a = random_tensor(rng, {2, 3}, {2});
    EXPECT_EQ(psi_inverse(psi(a), {2, 3}, {2}), a);
    EXPECT_THROW((void)psi_inverse(psi(a), {2, 2}, {2}), DimensionError);
    EXPECT_THROW((void)psi(a)(7, 1), DimensionError);
}

TEST(Elementwise, PlumbingOps) {
    std::mt19937_64 rng(12);
    const DenseTensor a = random_tensor(rng, {2}, {3});
    const DenseTensor z = DenseTensor::zeros_like(a);
    EXPECT_EQ(a + z, a);
    EXPECT_EQ(a - a, z);
    const DenseTensor twice = scale(2.0, a);
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(twice.data()[i], 2.0 * a.data()[i]);
    EXPECT_THROW((void)(a + DenseTensor({3}, {2})), DimensionError);
    DenseTensor y = a;
    axpy(-1.0, a, y);
    EXPECT_EQ(y, z);
}

TEST(ApplyOperator, AdjointPairing) {
    std::mt19937_64 rng(13);
    const DenseTensor a = random_tensor(rng, {2, 2}, {2, 2});
    const DenseTensor c = random_tensor(rng, {3}, {3});
    const DenseTensor x = random_tensor(rng, {2, 2}, {3});
    const DenseTensor r = random_tensor(rng, {2, 2}, {3});
    const double lhs = inner(apply_operator(a, c, x), r);
    const double rhs = inner(x, apply_adjoint(a, c, r));
    EXPECT_NEAR(lhs, rhs, 1e-13 * (std::abs(lhs) + 1.0));
    EXPECT_THROW((void)apply_operator(a, c, DenseTensor({4}, {3})), DimensionError);
}
