#include <gtest/gtest.h>

#include <cmath>

#include "avekit/core/linalg.hpp"
#include "avekit/core/lp.hpp"
#include "avekit/core/problem.hpp"
#include "test_util.hpp"

using namespace avekit;

TEST(Residual, ThreePointInstanceSolutionGivesZero) {
    AveProblem p(Matrix{{0, 0}, {-1, -0.5}}, {-1, -1});
    const Vector r = residual(p, {1, 0});
    EXPECT_EQ(r, (Vector{0, 0}));
}

TEST(Residual, ZeroVectorGivesMinusB) {
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 1 + trial % 5;
        AveProblem p(testutil::random_matrix(n, n), testutil::random_vector(n));
        const Vector r = residual(p, Vector(n, 0.0));
        for (std::size_t i = 0; i < n; ++i) EXPECT_EQ(r[i], -p.b[i]);
    }
}

TEST(Residual, TwoByTwoSolutionGivesZero) {
    AveProblem p(Matrix{{3, 1}, {6, 5}}, {3, 10});
    EXPECT_EQ(residual(p, {1, 1}), (Vector{0, 0}));
}

TEST(Residual, DimensionMismatchThrows) {
    AveProblem p(Matrix{{3, 1}, {6, 5}}, {3, 10});
    EXPECT_THROW(residual(p, {1, 1, 1}), DimensionError);
    EXPECT_THROW(AveProblem(Matrix{{1, 2}}, {1}), DimensionError);
}

TEST(SignDiag, Examples) {
    EXPECT_EQ(sign_diag({2, -3}).values(), (std::vector<int>{1, -1}));
    EXPECT_EQ(sign_diag({0, 0}).values(), (std::vector<int>{-1, -1}));
    EXPECT_EQ(sign_diag({1e-300, -0.0}).values(), (std::vector<int>{1, -1}));
}

TEST(SignDiag, DxTimesXIsAbsExactly) {
    for (int trial = 0; trial < 200; ++trial) {
        Vector x = testutil::random_vector(6, -5, 5);
        if (trial % 3 == 0) x[trial % 6] = 0.0;
        const SignVector s = sign_diag(x);
        for (std::size_t i = 0; i < x.size(); ++i) EXPECT_EQ(s[i] * x[i], std::fabs(x[i]));
    }
}

TEST(SignVector, RejectsNonUnitEntries) { EXPECT_THROW(SignVector(std::vector<int>{1, 0}), Error); }

TEST(SignVector, GrayOrderDiffersInOneEntry) {
    const std::size_t n = 5;
    for (std::uint64_t k = 1; k < (1u << n); ++k) {
        const auto a = SignVector::gray(n, k - 1), b = SignVector::gray(n, k);
        int diff = 0;
        for (std::size_t i = 0; i < n; ++i) diff += a[i] != b[i];
        EXPECT_EQ(diff, 1);
    }
    EXPECT_EQ(SignVector::gray(3, 0).values(), (std::vector<int>{-1, -1, -1}));
}

TEST(LuSolve, IdentityReturnsRhs) {
    const Vector b{1.5, -2, 3};
    EXPECT_EQ(lu_solve(Matrix::identity(3), b), b);
}

TEST(LuSolve, TwoByTwoClosedForm) {
    const Vector x = lu_solve(Matrix{{2, 1}, {6, 4}}, {3, 10});
    // det = 2; x = (4·3 − 1·10, 2·10 − 6·3)/2
    EXPECT_NEAR(x[0], (4.0 * 3 - 10) / 2, 1e-15);
    EXPECT_NEAR(x[1], (2.0 * 10 - 6 * 3) / 2, 1e-15);
}

TEST(LuSolve, SingularMemberThrows) {
    EXPECT_THROW(lu_solve(Matrix{{-2, 2}, {-2, 2}}, {1, 0}), SingularMatrix);
    EXPECT_THROW(lu_solve(Matrix(2, 2, 0.0), {0, 0}), SingularMatrix);
}

TEST(LuSolve, RoundTripOnWellConditionedMatrices) {
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 2 + trial % 30;
        Matrix a = testutil::random_matrix(n, n);
        for (std::size_t i = 0; i < n; ++i) a(i, i) += n;  // keeps the condition estimate small
        const Vector b = testutil::random_vector(n, -10, 10);
        const Vector x = lu_solve(a, b);
        EXPECT_LE(norm_inf(sub(a * x, b)), 1e-9 * (1 + norm_inf(b)));
    }
}

TEST(LuSolve, DeterminantMatchesCofactorExpansion) {
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 1 + trial % 6;
        const Matrix a = testutil::random_matrix(n, n, -3, 3);
        EXPECT_NEAR(determinant(a), testutil::cofactor_det(a), 1e-10);
    }
}

TEST(Inverse, MatchesGaussJordan) {
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 1 + trial % 7;
        Matrix a = testutil::random_matrix(n, n);
        for (std::size_t i = 0; i < n; ++i) a(i, i) += 2;
        EXPECT_LE(max_abs_diff(inverse(a), testutil::gj_inverse(a)), 1e-11);
    }
}

TEST(Norms, OneAndInfinity) {
    const Matrix a{{1, -2}, {3, 4}};
    EXPECT_DOUBLE_EQ(norm(a, 1), 6.0);
    EXPECT_DOUBLE_EQ(norm(a, 0), 7.0);
}

TEST(Norms, TwoNormEqualsSigmaMax) {
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 1 + trial % 8;
        const Matrix a = testutil::random_matrix(n, n);
        EXPECT_NEAR(norm(a, 2), extreme_singular_values(a).sigma_max, 1e-9 * (1 + norm(a, 2)));
    }
}

TEST(SingularValues, ScaledIdentity) {
    const auto sv = extreme_singular_values(3.0 * Matrix::identity(2));
    EXPECT_NEAR(sv.sigma_min, 3.0, 1e-14);
    EXPECT_NEAR(sv.sigma_max, 3.0, 1e-14);
}

TEST(SingularValues, TwoByTwoClosedForm) {
    for (int trial = 0; trial < 50; ++trial) {
        const Matrix a = testutil::random_matrix(2, 2, -4, 4);
        // σ² are the roots of λ² − ‖A‖_F² λ + det(A)² = 0
        const double f2 = a(0, 0) * a(0, 0) + a(0, 1) * a(0, 1) + a(1, 0) * a(1, 0) + a(1, 1) * a(1, 1);
        const double d = testutil::cofactor_det(a);
        const double disc = std::sqrt(std::max(f2 * f2 - 4 * d * d, 0.0));
        const double smax = std::sqrt((f2 + disc) / 2), smin = std::fabs(d) / smax;
        const auto sv = extreme_singular_values(a);
        EXPECT_NEAR(sv.sigma_max, smax, 1e-10 * smax);
        EXPECT_NEAR(sv.sigma_min, smin, 1e-7 * smax);
    }
}

TEST(SpectralRadius, SymmetricTwoByTwo) {
    const Matrix m = (1.0 / 3.0) * Matrix{{1, 2}, {2, 1}};
    const auto r = spectral_radius_nonneg(m);
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(r.value, 1.0, 1e-12);
}

TEST(SpectralRadius, NilpotentIsZero) {
    const auto r = spectral_radius_nonneg(mabs(Matrix{{0, 1}, {0, 0}}));
    EXPECT_TRUE(r.converged);
    EXPECT_EQ(r.value, 0.0);
}

TEST(SpectralRadius, UpperBoundNeverBelowTrueRadius) {
    for (int trial = 0; trial < 50; ++trial) {
        const Matrix m = testutil::random_matrix(2, 2, 0, 1);
        // Perron root of a nonnegative 2×2 matrix.
        const double tr = m(0, 0) + m(1, 1), det = testutil::cofactor_det(m);
        const double rho = tr / 2 + std::sqrt(tr * tr / 4 - det);
        const auto r = spectral_radius_nonneg(m);
        EXPECT_GE(r.upper, rho - 1e-14);
        EXPECT_NEAR(r.value, rho, 1e-9);
    }
}

TEST(SpectralRadius, PeriodicAndReducibleMatrices) {
    EXPECT_NEAR(spectral_radius_nonneg(Matrix{{0, 2}, {0.5, 0}}).value, 1.0, 1e-10);
    EXPECT_NEAR(spectral_radius_nonneg(Matrix{{0.5, 1}, {0, 0.2}}).value, 0.5, 1e-9);
    EXPECT_THROW(spectral_radius_nonneg(Matrix{{0, -1}, {1, 0}}), NotApplicable);
}

TEST(RankRevealing, SingularSystemParticularAndNullspace) {
    const Matrix m{{-1, 1}, {-2, 2}};
    const auto rr = rank_revealing_solve(m, {-3, -6});
    EXPECT_EQ(rr.rank, 1u);
    EXPECT_TRUE(rr.consistent);
    ASSERT_EQ(rr.nullspace.size(), 1u);
    EXPECT_LE(norm_inf(sub(m * rr.particular, {-3, -6})), 1e-12);
    EXPECT_LE(norm_inf(m * rr.nullspace[0]), 1e-12);
    EXPECT_FALSE(rank_revealing_solve(m, {1, 0}).consistent);
}

// ---- linear programming ----

TEST(Lp, LowerBoundedMinimum) {
    LinearProgram lp;
    lp.c = {1};
    lp.G = Matrix{{1}};
    lp.h = {1};
    const auto s = solve_lp(lp);
    ASSERT_EQ(s.status, LpStatus::Optimal);
    EXPECT_NEAR(s.x[0], 1.0, 1e-12);
}

TEST(Lp, UnboundedReportsRay) {
    LinearProgram lp;
    lp.c = {-1};
    lp.G = Matrix{{1}};
    lp.h = {0};
    const auto s = solve_lp(lp);
    ASSERT_EQ(s.status, LpStatus::Unbounded);
    ASSERT_EQ(s.ray.size(), 1u);
    EXPECT_GT(s.ray[0], 0.0);
}

TEST(Lp, InfeasibleDetected) {
    LinearProgram lp;
    lp.c = {0};
    lp.G = Matrix{{1}, {-1}};
    lp.h = {1, 0};
    EXPECT_EQ(solve_lp(lp).status, LpStatus::Infeasible);
}

TEST(Lp, EqualityAndNonnegativity) {
    // min x + 2y, x + y = 3, x ≤ 2, x,y ≥ 0 → (2,1)
    LinearProgram lp;
    lp.c = {1, 2};
    lp.G = Matrix{{1, 1}, {-1, 0}};
    lp.h = {3, -2};
    lp.equality = {1, 0};
    lp.nonneg = {1, 1};
    const auto s = solve_lp(lp);
    ASSERT_EQ(s.status, LpStatus::Optimal);
    EXPECT_NEAR(s.x[0], 2, 1e-12);
    EXPECT_NEAR(s.x[1], 1, 1e-12);
    EXPECT_NEAR(s.objective, 4, 1e-12);
}

TEST(Lp, DualConeCertificateLp) {
    // −y ≤ Aᵀy ≤ y, bᵀy ≥ 1 with A = 0.3 I, b = e: y = e is feasible.
    const Matrix a = 0.3 * Matrix::identity(2);
    LinearProgram lp;
    lp.c = {0, 0};
    lp.G = Matrix(0, 2);
    for (std::size_t i = 0; i < 2; ++i) {
        Vector up(2), lo(2);
        for (std::size_t j = 0; j < 2; ++j) {
            up[j] = (i == j) - a(j, i);
            lo[j] = (i == j) + a(j, i);
        }
        lp.add_row(up, 0);
        lp.add_row(lo, 0);
    }
    lp.add_row({1, 1}, 1);
    const auto s = solve_lp(lp);
    ASSERT_EQ(s.status, LpStatus::Optimal);
    EXPECT_TRUE(lp_feasible_point(lp, s.x));
    EXPECT_TRUE(lp_feasible_point(lp, {1, 1}));
}

// Vertex property and agreement with brute-force vertex enumeration on
// random bounded LPs in the plane.
TEST(Lp, OptimumMatchesVertexEnumeration) {
    for (int trial = 0; trial < 200; ++trial) {
        LinearProgram lp;
        lp.c = testutil::random_vector(2);
        lp.G = Matrix(0, 2);
        for (int k = 0; k < 6; ++k) lp.add_row(testutil::random_vector(2), testutil::uniform(-2, 0));
        // bounding box keeps the LP bounded
        lp.add_row({1, 0}, -10);
        lp.add_row({-1, 0}, -10);
        lp.add_row({0, 1}, -10);
        lp.add_row({0, -1}, -10);
        double best = INFINITY;
        const std::size_t m = lp.num_rows();
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = i + 1; j < m; ++j) {
                const double det = lp.G(i, 0) * lp.G(j, 1) - lp.G(i, 1) * lp.G(j, 0);
                if (std::fabs(det) < 1e-12) continue;
                const Vector v{(lp.h[i] * lp.G(j, 1) - lp.G(i, 1) * lp.h[j]) / det,
                               (lp.G(i, 0) * lp.h[j] - lp.h[i] * lp.G(j, 0)) / det};
                if (lp_feasible_point(lp, v, 1e-9)) best = std::min(best, dot(lp.c, v));
            }
        const auto s = solve_lp(lp);
        ASSERT_EQ(s.status, LpStatus::Optimal);  // x = 0 is always feasible
        EXPECT_NEAR(s.objective, best, 1e-9);
        EXPECT_TRUE(lp_feasible_point(lp, s.x));
        EXPECT_GE(tight_rows(lp, s.x).size(), 2u);
    }
}

TEST(Lp, KnownFeasiblePointNeverInfeasible) {
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 2 + trial % 6, m = 3 + trial % 9;
        const Vector x0 = testutil::random_vector(n, -3, 3);
        LinearProgram lp;
        lp.c = testutil::random_vector(n);
        lp.G = testutil::random_matrix(m, n);
        lp.h = lp.G * x0;
        for (auto& v : lp.h) v -= testutil::uniform(0, 1) * (trial % 2);
        lp.equality.assign(m, 0);
        if (trial % 3 == 0) lp.equality[0] = 1;
        lp.h[0] = dot(Vector(lp.G.row(0), lp.G.row(0) + n), x0);
        const auto s = solve_lp(lp);
        EXPECT_NE(s.status, LpStatus::Infeasible);
        if (s.status == LpStatus::Optimal) {
            EXPECT_TRUE(lp_feasible_point(lp, s.x, 1e-8));
        }
    }
}
