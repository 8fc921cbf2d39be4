// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "test_support.hpp"
#include "tsylv/generate.hpp"
#include "tsylv/io.hpp"
#include "tsylv/oracle.hpp"
#include "tsylv/solver.hpp"

using namespace tsylv;
using check::random_tensor;

namespace {

GeneratedInstance spectral(Extents i, Extents j, std::uint64_t seed, bool singular = false,
                           InstanceKind kind = InstanceKind::Consistent) {
    return generate_instance(
        {std::move(i), std::move(j), seed, kind, InstanceFamily::Spectral, singular, 8});
}

}  // namespace

TEST(SolveOptions, Validation) {
    SolveOptions o;
    EXPECT_NO_THROW(o.validate());
    o.epsilon = 0.0;
    EXPECT_THROW(o.validate(), std::invalid_argument);
    o = {};
    o.epsilon_p = -1.0;
    EXPECT_THROW(o.validate(), std::invalid_argument);
    o = {};
    o.k_max = 0;
    EXPECT_THROW(o.validate(), std::invalid_argument);
    o = {};
    o.epsilon = std::numeric_limits<double>::infinity();
    EXPECT_THROW(o.validate(), std::invalid_argument);
}

TEST(SylvesterProblem, ShapeChecks) {
    EXPECT_THROW(SylvesterProblem(DenseTensor({2}, {3}), identity({2}), DenseTensor({2}, {2})),
                 DimensionError);
    EXPECT_THROW(SylvesterProblem(identity({2}), identity({2}), DenseTensor({3}, {2})),
                 DimensionError);
    EXPECT_NO_THROW(SylvesterProblem(identity({2}), identity({3}), DenseTensor({2}, {3})));
}

TEST(Solve, IdentityOperatorConvergesInOneStep) {
    std::mt19937_64 rng(1);
    const DenseTensor d = random_tensor(rng, {2, 2}, {3});
    SylvesterProblem p(identity({2, 2}), DenseTensor({3}, {3}), d);
    const SolveOutcome out = solve_min_norm(p);
    EXPECT_EQ(out.status, SolveStatus::Converged);
    EXPECT_EQ(out.iterations, 1u);
    EXPECT_LE(check::diff_norm(out.solution.data(), d.data()), 1e-14);
    EXPECT_EQ(out.residual_history.size(), 2u);
}

TEST(Solve, ZeroRightHandSideIsImmediate) {
    SylvesterProblem p(identity({2}), identity({2}), DenseTensor({2}, {2}));
    const SolveOutcome out = solve_min_norm(p);
    EXPECT_EQ(out.status, SolveStatus::Converged);
    EXPECT_EQ(out.iterations, 0u);
    EXPECT_EQ(fro_norm(out.solution), 0.0);
}

TEST(Solve, StartingAtExactSolution) {
    const GeneratedInstance inst = spectral({2}, {3}, 3);
    const SolveOutcome out = solve(inst.problem, *inst.x_exact);
    EXPECT_EQ(out.status, SolveStatus::Converged);
    EXPECT_EQ(out.iterations, 0u);
}

TEST(Solve, ZeroOperatorNonzeroRightHandSideIsInconsistent) {
    SylvesterProblem p(DenseTensor({2}, {2}), DenseTensor({2}, {2}),
                       DenseTensor({2}, {2}, {1.0, 2.0, 3.0, 4.0}));
    const SolveOutcome out = solve_min_norm(p);
    EXPECT_EQ(out.status, SolveStatus::Inconsistent);
    EXPECT_EQ(out.iterations, 0u);
}

TEST(Solve, CertifiedInconsistentInstances) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const GeneratedInstance inst =
            spectral({2, 2}, {3}, seed, true, InstanceKind::Inconsistent);
        const SolveOutcome out = solve_min_norm(inst.problem);
        EXPECT_EQ(out.status, SolveStatus::Inconsistent) << "seed " << seed;
        EXPECT_LE(out.final_direction_norm, out.direction_threshold);
    }
}

TEST(Solve, IterationLimit) {
    const GeneratedInstance inst = spectral({3, 2}, {3}, 4);
    SolveOptions o;
    o.k_max = 3;
    const SolveOutcome out = solve_min_norm(inst.problem, o);
    EXPECT_EQ(out.status, SolveStatus::IterationLimit);
    EXPECT_EQ(out.iterations, 3u);
    EXPECT_EQ(out.residual_history.size(), 4u);
}

TEST(Solve, ResidualHistoryMatchesDefinition) {
    const GeneratedInstance inst = spectral({2, 2}, {2}, 5);
    std::vector<double> seen;
    const SolveOutcome out = solve_min_norm(inst.problem, {}, [&](const SolverState& s) {
        const DenseTensor r =
            inst.problem.d() - apply_operator(inst.problem.a(), inst.problem.c(), s.X);
        EXPECT_LE(check::diff_norm(r.data(), s.R.data()), 1e-13);
        EXPECT_EQ(s.k, seen.size() + 1);
        seen.push_back(std::sqrt(s.r_norm_sq));
    });
    EXPECT_EQ(seen, out.residual_history);
    EXPECT_EQ(out.residual_history.size(), out.iterations + 1);
    EXPECT_LT(out.final_residual(), 1e-10);
}

TEST(Solve, DirectionPreimageRelation) {
    const GeneratedInstance inst = spectral({3}, {2, 2}, 6, true);
    (void)solve_min_norm(inst.problem, {}, [&](const SolverState& s) {
        const DenseTensor p = apply_adjoint(inst.problem.a(), inst.problem.c(),
                                            s.direction_preimage);
        EXPECT_LE(check::diff_norm(p.data(), s.P.data()), 1e-10 * (1.0 + fro_norm(s.P)));
    });
}

TEST(Solve, RelativeResidualOption) {
    const GeneratedInstance inst = spectral({2, 2}, {3}, 7);
    DenseTensor big_d = 1e6 * inst.problem.d();
    SylvesterProblem p(inst.problem.a(), inst.problem.c(), big_d);
    SolveOptions o;
    o.relative_residual = true;
    o.epsilon = 1e-12;
    const SolveOutcome out = solve_min_norm(p, o);
    EXPECT_EQ(out.status, SolveStatus::Converged);
    EXPECT_LT(out.final_residual(), 1e-12 * fro_norm(big_d));
}

TEST(Solve, ShapeMismatchRejected) {
    const GeneratedInstance inst = spectral({2}, {2}, 8);
    EXPECT_THROW((void)solve(inst.problem, DenseTensor({2}, {3})), DimensionError);
}

TEST(Solve, NonFiniteDataRaisesBreakdown) {
    DenseTensor d({2}, {2}, {1.0, std::numeric_limits<double>::infinity(), 0.0, 0.0});
    SylvesterProblem p(identity({2}), identity({2}), d);
    EXPECT_THROW((void)solve_min_norm(p), NumericalBreakdown);
}

TEST(Solve, MinNormMatchesOracleOnSingularInstances) {
    for (std::uint64_t seed = 10; seed < 16; ++seed) {
        const GeneratedInstance inst = spectral({2, 2}, {3}, seed, true);
        const SolveOutcome out = solve_min_norm(inst.problem);
        ASSERT_EQ(out.status, SolveStatus::Converged);
        const OracleResult o = oracle_solve(inst.problem);
        EXPECT_LE(check::diff_norm(out.solution.data(), o.min_norm_solution.data()), 1e-8)
            << "seed " << seed;
    }
}

TEST(Nearness, ZeroTargetGivesMinNormSolution) {
    const GeneratedInstance inst = spectral({2, 2}, {2}, 20, true);
    const NearnessResult nr = solve_nearness(inst.problem, inst.problem.zero_unknown());
    const SolveOutcome mn = solve_min_norm(inst.problem);
    EXPECT_LE(check::diff_norm(nr.x_hat.data(), mn.solution.data()), 1e-12);
    EXPECT_NEAR(nr.distance, fro_norm(mn.solution), 1e-12);
}

TEST(Nearness, ExactTargetGivesZeroDistance) {
    const GeneratedInstance inst = spectral({2, 2}, {2}, 21, true);
    const NearnessResult nr = solve_nearness(inst.problem, *inst.x_exact);
    EXPECT_EQ(nr.outcome.iterations, 0u);
    EXPECT_LE(nr.distance, 1e-14);
}

TEST(Nearness, ClosestAmongSolutions) {
    const GeneratedInstance inst = spectral({3}, {2}, 22, true);
    std::mt19937_64 rng(22);
    const DenseTensor x0 = random_tensor(rng, {3}, {2});
    const NearnessResult nr = solve_nearness(inst.problem, x0);
    ASSERT_EQ(nr.outcome.status, SolveStatus::Converged);
    // X_hat - X0 must lie in the row space of the unfolded operator.
    const CompleteOrthogonalDecomposition cod(unfold_system(inst.problem).k);
    const DenseTensor diff = nr.x_hat - x0;
    const auto proj = cod.project_row_space(diff.data());
    EXPECT_LE(check::diff_norm(proj, diff.data()), 1e-9);
    EXPECT_NEAR(nr.distance, fro_norm(diff), 1e-12);
}

TEST(FixedProblem, MinNormIterationAndValues) {
    const auto pf = io::read_problem(std::string(TSYLV_DATA_DIR) + "/fixed_min_norm.json");
    const SolveOutcome out = solve_min_norm(pf.problem);
    EXPECT_EQ(out.status, SolveStatus::Converged);
    EXPECT_LT(out.final_residual(), 1e-10);
    EXPECT_GE(out.iterations, 71u);
    EXPECT_LE(out.iterations, 101u);
}
