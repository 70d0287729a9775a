#include <gtest/gtest.h>

#include <cmath>
#include <complex>

#include "avekit/analysis.hpp"
#include "test_util.hpp"

using namespace avekit;
using testutil::cofactor_det;
using testutil::gj_inverse;

namespace {

// Independent regularity oracle: cofactor determinants of A + diag(s).
int det_sign_pattern(const Matrix& a) {
    const std::size_t n = a.rows();
    int sign = 0;
    for (std::uint64_t mask = 0; mask < (1ull << n); ++mask) {
        Matrix m = a;
        for (std::size_t i = 0; i < n; ++i) m(i, i) += ((mask >> i) & 1) ? 1.0 : -1.0;
        const double d = cofactor_det(m);
        const int sd = d > 0 ? 1 : (d < 0 ? -1 : 0);
        if (sd == 0) return 0;
        if (sign == 0) sign = sd;
        else if (sd != sign) return 0;
    }
    return sign;
}

double min_abs_det(const Matrix& a) {
    const std::size_t n = a.rows();
    double m = INFINITY;
    for (std::uint64_t mask = 0; mask < (1ull << n); ++mask) {
        Matrix b = a;
        for (std::size_t i = 0; i < n; ++i) b(i, i) += ((mask >> i) & 1) ? 1.0 : -1.0;
        m = std::min(m, std::fabs(cofactor_det(b)));
    }
    return m;
}

double inf_norm_oracle(const Matrix& a) {
    double best = 0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double s = 0;
        for (std::size_t j = 0; j < a.cols(); ++j) s += std::fabs(a(i, j));
        best = std::max(best, s);
    }
    return best;
}

}  // namespace

TEST(UniqueAllRhs, FirstCounterexampleSingularMember) {
    const Matrix a{{-1, 2}, {-2, 1}};
    const auto rep = check_unique_all_rhs(a);
    EXPECT_EQ(rep.unique_for_all_b, Tri::No);
    const Verdict& v = rep.at("exact_regularity");
    ASSERT_TRUE(v.fails());
    ASSERT_TRUE(v.cert.sign.has_value());
    EXPECT_EQ(*v.cert.sign, SignVector(std::vector<int>{-1, 1}));
    ASSERT_TRUE(v.cert.matrix.has_value());
    const Matrix expect{{-2, 2}, {-2, 2}};
    EXPECT_LE(max_abs_diff(*v.cert.matrix, expect), 1e-12);
    EXPECT_NEAR(cofactor_det(*v.cert.matrix), 0.0, 1e-12);
}

TEST(UniqueAllRhs, SecondCounterexampleSingularMember) {
    const Matrix a{{-1, 1.5}, {-4, 3.5}};
    const auto rep = check_unique_all_rhs(a);
    EXPECT_EQ(rep.unique_for_all_b, Tri::No);
    const Verdict& v = rep.at("exact_regularity");
    ASSERT_TRUE(v.fails());
    const Matrix expect{{-1.5, 1.5}, {-4, 4}};
    EXPECT_LE(max_abs_diff(*v.cert.matrix, expect), 1e-12);
    // The member lies in [A − I, A + I].
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) EXPECT_LE(std::fabs((*v.cert.matrix)(i, j) - a(i, j)), (i == j ? 1.0 : 0.0) + 1e-15);
}

TEST(UniqueAllRhs, CounterexampleEigenvalueClaims) {
    // Eigenvalues of a 2×2 inverse via trace/determinant.
    auto eig = [](const Matrix& m) {
        const double tr = m(0, 0) + m(1, 1);
        const double det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
        const std::complex<double> disc = std::sqrt(std::complex<double>(tr * tr - 4 * det));
        return std::make_pair((tr + disc) / 2.0, (tr - disc) / 2.0);
    };
    const auto [l1, l2] = eig(gj_inverse(Matrix{{-1, 2}, {-2, 1}}));
    EXPECT_NEAR(std::max(std::abs(l1), std::abs(l2)), 1.0 / std::sqrt(3.0), 1e-9);
    const auto [m1, m2] = eig(Matrix{{-1, 1.5}, {-4, 3.5}});
    EXPECT_NEAR(m1.real(), 1.25, 1e-12);
    EXPECT_NEAR(std::fabs(m1.imag()), std::sqrt(15.0) / 4.0, 1e-12);
    EXPECT_NEAR(m2.real(), 1.25, 1e-12);
}

TEST(UniqueAllRhs, ScaledIdentityViaSigmaMin) {
    const auto rep = check_unique_all_rhs(3.0 * Matrix::identity(2));
    EXPECT_EQ(rep.unique_for_all_b, Tri::Yes);
    EXPECT_TRUE(rep.at("sigma_min_gt_1").holds());
    EXPECT_NEAR(*rep.at("sigma_min_gt_1").cert.scalar, 3.0, 1e-12);
}

TEST(UniqueAllRhs, ExampleMatrixViaExactTest) {
    const Matrix a{{3, 1}, {6, 5}};
    const auto rep = check_unique_all_rhs(a);
    EXPECT_EQ(rep.unique_for_all_b, Tri::Yes);
    EXPECT_TRUE(rep.at("exact_regularity").holds());
    // det(A + diag s) over the four sign vectors.
    std::vector<double> dets;
    for (int s0 : {-1, 1})
        for (int s1 : {-1, 1}) dets.push_back((3 + s0) * (5 + s1) - 6.0);
    std::sort(dets.begin(), dets.end());
    EXPECT_EQ(dets, (std::vector<double>{2, 6, 10, 18}));
}

TEST(UniqueAllRhs, UnknownAboveCapWhenSufficientTestsFail) {
    Matrix a = Matrix::identity(4);
    const auto rep = check_unique_all_rhs(a, 3);
    EXPECT_EQ(rep.at("exact_regularity").state, VerdictState::Unknown);
    EXPECT_EQ(rep.unique_for_all_b, Tri::Unknown);
}

TEST(UniqueAllRhs, RandomAgreesWithCofactorOracle) {
    int checked = 0;
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 2 + trial % 4;
        Matrix a = testutil::random_matrix(n, n, -2.0, 2.0);
        if (min_abs_det(a) < 1e-6) continue;
        const int oracle = det_sign_pattern(a);
        const auto rep = check_unique_all_rhs(a);
        EXPECT_EQ(rep.unique_for_all_b, oracle != 0 ? Tri::Yes : Tri::No) << "trial " << trial;
        const Verdict& v = rep.at("exact_regularity");
        if (v.fails()) {
            EXPECT_NEAR(cofactor_det(*v.cert.matrix), 0.0, 1e-8);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    EXPECT_LE(std::fabs((*v.cert.matrix)(i, j) - a(i, j)), (i == j ? 1.0 : 0.0) + 1e-12);
        }
        // Every sufficient condition that holds must agree with the oracle.
        for (const auto& [name, verdict] : rep.verdicts) {
            if (verdict.holds()) {
                EXPECT_NE(oracle, 0) << name;
            }
        }
        ++checked;
    }
    EXPECT_GT(checked, 200);
}

TEST(UniqueAllRhs, DiagonalDominanceAndHMatrix) {
    const Matrix a{{4, 1, -1}, {0.5, 3, 1}, {1, 1, 5}};
    const auto rep = check_unique_all_rhs(a);
    EXPECT_TRUE(rep.at("strict_diagonal_dominance").holds());
    EXPECT_TRUE(rep.at("h_matrix_positive_diagonal").holds());
    EXPECT_EQ(rep.unique_for_all_b, Tri::Yes);
    const Matrix weak{{1.5, 1}, {0, 3}};
    const auto rep2 = check_unique_all_rhs(weak);
    EXPECT_TRUE(rep2.at("strict_diagonal_dominance").fails());
}

TEST(UniqueAllRhsGave, ZeroBIsLinear) {
    const Matrix a{{2, 1}, {1, 3}};
    const auto rep = check_unique_all_rhs_gave(a, Matrix(2, 2));
    EXPECT_EQ(rep.unique_for_all_b, Tri::Yes);
}

TEST(UniqueAllRhsGave, IdentityBMatchesAve) {
    const Matrix a{{3, 1}, {6, 5}};
    const auto g = check_unique_all_rhs_gave(a, Matrix::identity(2));
    const auto v = check_unique_all_rhs(a);
    EXPECT_EQ(g.unique_for_all_b, Tri::Yes);
    EXPECT_EQ(g.at("exact_regularity").state, v.at("exact_regularity").state);
}

TEST(UniqueAllRhsGave, IdentityPairIsNotRegular) {
    const auto rep = check_unique_all_rhs_gave(Matrix::identity(2), Matrix::identity(2));
    EXPECT_EQ(rep.unique_for_all_b, Tri::No);
    const auto& m = *rep.at("exact_regularity").cert.matrix;
    EXPECT_NEAR(cofactor_det(m), 0.0, 1e-12);
}

TEST(IntervalRegularity, GeneralRadiusAgreesWithDiagonalCase) {
    const Matrix a{{-1, 2}, {-2, 1}};
    const auto v = check_interval_regularity(a, Matrix::identity(2));
    ASSERT_TRUE(v.fails());
    EXPECT_NEAR(cofactor_det(*v.cert.matrix), 0.0, 1e-12);
    Matrix full(2, 2);
    for (auto& x : full.data()) x = 0.1;
    const auto w = check_interval_regularity(Matrix{{3, 1}, {6, 5}}, full);
    EXPECT_TRUE(w.holds());
}

TEST(IntervalRegularity, FullRadiusSingularMemberIsInsideInterval) {
    for (int trial = 0; trial < 50; ++trial) {
        const Matrix c = testutil::random_matrix(3, 3, -1, 1);
        const Matrix d = testutil::random_matrix(3, 3, 0.0, 0.6);
        const auto v = check_interval_regularity(c, d);
        if (!v.fails()) continue;
        const Matrix& m = *v.cert.matrix;
        EXPECT_NEAR(cofactor_det(m), 0.0, 1e-8);
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) EXPECT_LE(std::fabs(m(i, j) - c(i, j)), d(i, j) + 1e-12);
    }
}

TEST(SolutionBounds, FigureOneA) {
    const AveProblem p(Matrix{{0, 0}, {-1, -0.5}}, {-1, -1});
    const auto sb = solution_bounds(p);
    EXPECT_FALSE(sb.empty);
    EXPECT_NEAR(sb.u[0], 1.0, 1e-12);
    EXPECT_NEAR(sb.u[1], 4.0, 1e-12);
    const Matrix inv_expect{{1, 0}, {2, 2}};
    EXPECT_LE(max_abs_diff(sb.inv, inv_expect), 1e-12);
    for (const Vector& x : {Vector{1, 0}, Vector{-1, -4}, Vector{-1, 4.0 / 3.0}}) {
        EXPECT_LE(std::fabs(x[0]), sb.u[0] + 1e-12);
        EXPECT_LE(std::fabs(x[1]), sb.u[1] + 1e-12);
        EXPECT_TRUE(lp_feasible_point(sb.polyhedron(p), x, 1e-12));
    }
}

TEST(SolutionBounds, ZeroMatrixAndEmptyBox) {
    const auto sb = solution_bounds(AveProblem(Matrix(2, 2), {-1, -1}));
    EXPECT_EQ(sb.u, (Vector{1, 1}));
    const auto e = solution_bounds(AveProblem(0.3 * Matrix::identity(2), {1, 1}));
    EXPECT_TRUE(e.empty);
    EXPECT_NEAR(e.u[0], -1.0 / 0.7, 1e-12);
    EXPECT_THROW(solution_bounds(AveProblem(Matrix::identity(2), {1, 1})), NotApplicable);
}

TEST(Unsolvable, ContractionWithPositiveRhs) {
    const AveProblem p(0.3 * Matrix::identity(2), {1, 1});
    const auto rep = check_unsolvable(p);
    EXPECT_EQ(rep.solvable_hint, Tri::No);
    EXPECT_TRUE(rep.at("nonneg_rhs_contraction").holds());
    const Verdict& lp = rep.at("dual_lp");
    ASSERT_TRUE(lp.holds());
    // Validate the certificate independently, and that y = e is also valid.
    const Vector& y = lp.cert.vec;
    for (const Vector& cand : {y, Vector{1, 1}}) {
        const Vector aty = transpose_times(p.A, cand);
        for (std::size_t i = 0; i < 2; ++i) {
            EXPECT_LE(aty[i], cand[i] + 1e-9);
            EXPECT_GE(aty[i], -cand[i] - 1e-9);
        }
        EXPECT_GT(dot(p.b, cand), 0.0);
    }
    EXPECT_TRUE(rep.at("bounds_not_nonnegative").holds());
}

TEST(Unsolvable, SolvableExampleFiresNothing) {
    const AveProblem p(Matrix{{3, 1}, {6, 5}}, {3, 10});
    const auto rep = check_unsolvable(p);
    EXPECT_FALSE(rep.any_holds());
    EXPECT_EQ(rep.solvable_hint, Tri::Unknown);
}

TEST(Unsolvable, BoundsNotNonnegative) {
    const AveProblem p(Matrix(2, 2), {1, -1});
    const auto rep = check_unsolvable(p);
    const Verdict& v = rep.at("bounds_not_nonnegative");
    ASSERT_TRUE(v.holds());
    EXPECT_EQ(v.cert.vec, (Vector{-1, 1}));
}

TEST(Unsolvable, ComponentwiseRowTest) {
    // A = 0: u = −b and the row test reduces to 2 b_i > |b_i|, i.e. b_i > 0.
    const AveProblem p(Matrix(2, 2), {-1, 0.5});
    const Verdict& v = check_unsolvable(p).at("componentwise_rhs_test");
    ASSERT_TRUE(v.holds());
    EXPECT_EQ(*v.cert.scalar, 1.0);
}

TEST(Exponential, ZeroMatrixNegativeRhs) {
    const Verdict v = check_exponential_solutions(AveProblem(Matrix(3, 3), {-1, -1, -1}));
    ASSERT_TRUE(v.holds());
    EXPECT_NE(v.cert.detail.find("ii"), std::string::npos);
}

TEST(Exponential, SecondConditionFails) {
    const Matrix a{{0, 0.6}, {0.6, 0}};
    // |b| = e against 2|A||b| = 1.2e.
    const Vector ab{1, 1};
    const Vector rhs = 2.0 * mabs(a) * ab;
    EXPECT_LT(ab[0], rhs[0]);
    const Verdict v = check_exponential_solutions(AveProblem(a, {-1, -1}));
    EXPECT_EQ(v.cert.detail.find("ii"), std::string::npos);
}

TEST(Exponential, FigureOneAFails) {
    EXPECT_TRUE(check_exponential_solutions(AveProblem(Matrix{{0, 0}, {-1, -0.5}}, {-1, -1})).fails());
}

TEST(NonnegSolvability, ScaledIdentity) {
    const auto rep = check_nonneg_solvability(3.0 * Matrix::identity(2));
    EXPECT_TRUE(rep.at("inverse_a_minus_i_nonneg").holds());
    EXPECT_TRUE(rep.at("interval_inverse_nonneg").holds());
    // A ≥ 0 but ‖A‖ = 3, so the contraction condition cannot hold.
    EXPECT_TRUE(rep.at("nonneg_contraction_for_nonpositive_b").fails());
    // For b = e the unique solution 0.5e is nonnegative.
    EXPECT_NEAR(lu_solve(2.0 * Matrix::identity(2), {1, 1})[0], 0.5, 1e-15);
}

TEST(NonnegSolvability, HalfIdentityFails) {
    const auto rep = check_nonneg_solvability(0.5 * Matrix::identity(2));
    const Verdict& v = rep.at("inverse_a_minus_i_nonneg");
    ASSERT_TRUE(v.fails());
    EXPECT_NEAR(*v.cert.scalar, -2.0, 1e-12);
    EXPECT_TRUE(rep.at("nonneg_contraction_for_nonpositive_b").holds());
}

TEST(NonnegSolvability, InverseNonnegativeInterval) {
    const Matrix a{{3, -1}, {-1, 3}};
    const auto rep = check_nonneg_solvability(a);
    EXPECT_TRUE(rep.at("interval_inverse_nonneg").holds());
    const Matrix im = gj_inverse(Matrix{{2, -1}, {-1, 2}});
    EXPECT_NEAR(im(0, 0), 2.0 / 3.0, 1e-12);
    EXPECT_NEAR(im(0, 1), 1.0 / 3.0, 1e-12);
    const Matrix ip = gj_inverse(Matrix{{4, -1}, {-1, 4}});
    EXPECT_NEAR(ip(0, 0), 4.0 / 15.0, 1e-12);
}

TEST(Structure, FiniteForExample) {
    const auto rep = check_structure(Matrix{{3, 1}, {6, 5}});
    EXPECT_TRUE(rep.at("finite_for_all_b").holds());
    EXPECT_TRUE(rep.at("bounded_for_all_b").holds());
}

TEST(Structure, RayMatrixNotFiniteNotBounded) {
    const Matrix a{{0, 1}, {-2, 3}};
    const auto rep = check_structure(a);
    const Verdict& f = rep.at("finite_for_all_b");
    ASSERT_TRUE(f.fails());
    EXPECT_NEAR(cofactor_det(*f.cert.matrix), 0.0, 1e-12);
    const Verdict& b = rep.at("bounded_for_all_b");
    ASSERT_TRUE(b.fails());
    // Witness solves Ax + |x| = 0 and is nonzero.
    const Vector& x = b.cert.vec;
    const Vector ax = a * x;
    for (std::size_t i = 0; i < 2; ++i) EXPECT_NEAR(ax[i] + std::fabs(x[i]), 0.0, 1e-9);
    EXPECT_GT(testutil::max_abs(x), 0.1);
}

TEST(Convexity, ThreePointsInThreeOrthants) {
    SolutionSet set;
    for (const Vector& x : {Vector{1, 0}, Vector{-1, -4}, Vector{-1, 4.0 / 3.0}}) {
        OrthantPiece piece;
        piece.s = sign_diag(x);
        piece.x = x;
        set.pieces.push_back(piece);
    }
    EXPECT_TRUE(check_convexity(set).fails());
    set.pieces.resize(1);
    EXPECT_TRUE(check_convexity(set).holds());
}

TEST(ConditionNumbers, ScaledIdentity) {
    const auto c = condition_numbers(3.0 * Matrix::identity(2), 2);
    EXPECT_NEAR(c.c, 0.5, 1e-12);
    EXPECT_NEAR(c.c_rel, 0.5 * 4.0, 1e-12);
}

TEST(ConditionNumbers, SingularMemberGivesInfinity) {
    const auto c = condition_numbers(Matrix{{-1, 2}, {-2, 1}}, 2);
    EXPECT_TRUE(std::isinf(c.c));
    ASSERT_TRUE(c.singular_matrix.has_value());
    EXPECT_NEAR(cofactor_det(*c.singular_matrix), 0.0, 1e-12);
}

TEST(ConditionNumbers, ExampleInfinityNormByHand) {
    const Matrix a{{3, 1}, {6, 5}};
    double best = 0;
    for (int s0 : {-1, 1})
        for (int s1 : {-1, 1}) {
            Matrix m = a;
            m(0, 0) -= s0;
            m(1, 1) -= s1;
            best = std::max(best, inf_norm_oracle(gj_inverse(m)));
        }
    const auto c = condition_numbers(a, 0);
    EXPECT_NEAR(c.c, best, 1e-12);
}

TEST(ConditionNumbers, FinitenessMatchesRegularity) {
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 2 + trial % 3;
        const Matrix a = testutil::random_matrix(n, n, -2, 2);
        if (min_abs_det(a) < 1e-6) continue;
        const bool regular = check_unique_all_rhs(a).unique_for_all_b == Tri::Yes;
        EXPECT_EQ(std::isfinite(condition_numbers(a, 2).c), regular);
    }
}

TEST(CertifyError, ExactSolutionHasZeroBound) {
    const AveProblem p(Matrix{{3, 1}, {6, 5}}, {3, 10});
    const auto c = condition_numbers(p.A, 2);
    const auto e = certify_error(p, {1, 1}, c);
    EXPECT_EQ(e.absolute, 0.0);
}

TEST(CertifyError, BoundDominatesTrueError) {
    const AveProblem p(Matrix{{3, 1}, {6, 5}}, {3, 10});
    for (int p_norm : {1, 2, 0}) {
        const auto c = condition_numbers(p.A, p_norm);
        const auto e = certify_error(p, {1.01, 1.0}, c);
        EXPECT_GE(e.absolute, vector_norm(Vector{0.01, 0.0}, p_norm));
        for (int k = 0; k < 100; ++k) {
            const Vector x{1 + testutil::uniform(-0.5, 0.5), 1 + testutil::uniform(-0.5, 0.5)};
            const double err = vector_norm(sub(x, {1, 1}), p_norm);
            const auto ek = certify_error(p, x, c);
            EXPECT_GE(ek.absolute * (1 + 1e-12), err);
            EXPECT_LE(ek.relative_lower, err / vector_norm({1, 1}, p_norm) * (1 + 1e-12));
            EXPECT_GE(ek.relative_upper * (1 + 1e-12), err / vector_norm({1, 1}, p_norm));
        }
    }
    ConditionNumbers inf;
    EXPECT_THROW(certify_error(p, {1, 1}, inf), NotApplicable);
}
