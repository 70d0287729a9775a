#include <gtest/gtest.h>

#include <cmath>

#include "avekit/correction.hpp"
#include "test_util.hpp"

using namespace avekit;
using testutil::dist;
using testutil::random_matrix;
using testutil::random_vector;

namespace {

AveProblem fig1a() { return {Matrix{{0, 0}, {-1, -0.5}}, Vector{-1, -1}}; }
AveProblem fig1b() { return {Matrix{{0, 1}, {-2, 3}}, Vector{-3, -6}}; }
AveProblem scalar(double a, double b) { return {Matrix{{a}}, Vector{b}}; }

double res_sq(const AveProblem& p, const Vector& x) {
    double s = 0;
    for (std::size_t i = 0; i < p.n(); ++i) {
        double v = -std::fabs(x[i]) - p.b[i];
        for (std::size_t j = 0; j < p.n(); ++j) v += p.A(i, j) * x[j];
        s += v * v;
    }
    return s;
}

double frac_both(const AveProblem& p, const Vector& x) {
    double xx = 0;
    for (double v : x) xx += v * v;
    return res_sq(p, x) / (1 + xx);
}

double frac_cheb(const AveProblem& p, const Vector& x) {
    double m = 0, l1 = 0;
    for (std::size_t i = 0; i < p.n(); ++i) {
        double v = -std::fabs(x[i]) - p.b[i];
        for (std::size_t j = 0; j < p.n(); ++j) v += p.A(i, j) * x[j];
        m = std::max(m, std::fabs(v));
        l1 += std::fabs(x[i]);
    }
    return m / (1 + l1);
}

// Minimum of f over a 400×400 grid on [−20, 20]².
template <class F>
double grid_min(F&& f) {
    double best = INFINITY;
    for (int i = 0; i < 400; ++i)
        for (int j = 0; j < 400; ++j) {
            const Vector x{-20.0 + 40.0 * i / 399.0, -20.0 + 40.0 * j / 399.0};
            best = std::min(best, f(x));
        }
    return best;
}

// Infeasible by construction: 0 ≠ b ≥ 0 and ‖A‖∞ < 1.
AveProblem infeasible_instance(std::size_t n) {
    Matrix a = random_matrix(n, n);
    const double s = norm_inf(a);
    a = (testutil::uniform(0.2, 0.9) / s) * a;
    Vector b = random_vector(n, 0, 2);
    b[0] += 0.1;
    return {a, b};
}

void expect_corrected_feasible(const AveProblem& p, const CorrectionResult& c, double tol) {
    const AveProblem q(c.corrected_A, c.corrected_b);
    EXPECT_LE(norm_inf(residual(q, c.x_star)), tol * (1 + norm_inf(p.b)));
    EXPECT_LT(max_abs_diff(c.corrected_A, p.A + c.R), 1e-15 * (1 + norm_inf(c.R)));
}

double frob_sq(const Matrix& r, const Vector& rv) {
    double s = 0;
    for (double v : r.data()) s += v * v;
    for (double v : rv) s += v * v;
    return s;
}

}  // namespace

// ---------- selection ----------

TEST(MinNorm, Figure1aEuclid) {
    const auto sel = min_norm_solution(fig1a());
    EXPECT_LT(dist(sel.x, Vector{1, 0}), 1e-12);
    EXPECT_NEAR(sel.value, 1.0, 1e-12);
    EXPECT_LT(sel.value, std::sqrt(1.0 + 16.0 / 9.0));
}

TEST(MinNorm, Figure1aMax) {
    const auto sel = min_norm_solution(fig1a(), NormKind::Max);
    EXPECT_LT(dist(sel.x, Vector{1, 0}), 1e-12);
}

TEST(MinNorm, Figure1bPointBeatsRay) {
    const auto sel = min_norm_solution(fig1b());
    EXPECT_LT(dist(sel.x, Vector{-1, -2}), 1e-9);
    EXPECT_NEAR(sel.value, std::sqrt(5.0), 1e-9);
    const auto mx = min_norm_solution(fig1b(), NormKind::Max);
    EXPECT_LT(dist(mx.x, Vector{-1, -2}), 1e-9);
    EXPECT_NEAR(mx.value, 2.0, 1e-9);
}

TEST(MinNorm, RayMinimumOnItsOwn) {
    // Same ray with the isolated point moved far away.
    const auto set = enumerate_solutions(fig1b(), false);
    for (const auto& piece : set.pieces)
        if (piece.is_ray()) {
            const auto y = detail::piece_min_norm(piece);
            ASSERT_TRUE(y.has_value());
            EXPECT_LT(dist(*y, Vector{3, 0}), 1e-9);
            EXPECT_LT(dist(detail::piece_min_maxnorm(piece), Vector{3, 0}), 1e-9);
        }
}

TEST(MinNorm, TieBreakPicksSmallestSignVector) {
    const AveProblem p(Matrix(3, 3), Vector(3, -1.0));
    const auto sel = min_norm_solution(p);
    EXPECT_EQ(sel.x, Vector(3, -1.0));
    EXPECT_EQ(sel.s, SignVector(3, -1));
}

TEST(MinNorm, TwoDimensionalPiece) {
    const AveProblem p(Matrix::identity(3), Vector{0, 0, -2});
    const auto sel = min_norm_solution(p);
    EXPECT_LT(dist(sel.x, Vector{0, 0, -1}), 1e-9);
    EXPECT_LT(dist(sparse_solution(p).x, Vector{0, 0, -1}), 1e-9);
}

TEST(MinNorm, AffinePieceWithInteriorMinimizer) {
    // x₁ − |x₁| = 0 leaves x₁ ≥ 0 free; row 2 ties x₂ to x₁.
    const AveProblem p(Matrix{{1, 0}, {1, 2}}, Vector{0, 3});
    // Solutions: the segment x₁ + x₂ = 3 in the first quadrant and the ray
    // x₁ + 3x₂ = 3 with x₁ ≥ 3; the nearest point to the origin is (1.5, 1.5).
    const auto sel = min_norm_solution(p);
    EXPECT_LT(dist(sel.x, Vector{1.5, 1.5}), 1e-9);
    EXPECT_LE(norm_inf(residual(p, sel.x)), 1e-9);
}

TEST(MinNorm, UnsolvableThrows) {
    EXPECT_THROW(min_norm_solution(AveProblem(0.3 * Matrix::identity(2), Vector{1, 1})), Unsolvable);
    EXPECT_THROW(sparse_solution(AveProblem(0.3 * Matrix::identity(2), Vector{1, 1})), Unsolvable);
}

TEST(MinNorm, CapExceeded) {
    EXPECT_THROW(min_norm_solution(AveProblem(Matrix::identity(3), Vector(3, 1.0)), NormKind::Euclid, 2), CapExceeded);
}

TEST(MinNorm, BeatsEveryBruteForcePoint) {
    for (int trial = 0; trial < 80; ++trial) {
        const std::size_t n = 2 + static_cast<std::size_t>(trial % 4);
        const AveProblem p(random_matrix(n, n, -1.5, 1.5), random_vector(n, -2, 2));
        const auto pts = testutil::brute_force_points(p.A, Matrix::identity(n), p.b);
        if (pts.empty()) continue;
        for (NormKind k : {NormKind::Euclid, NormKind::Max}) {
            const auto sel = min_norm_solution(p, k);
            EXPECT_LE(norm_inf(residual(p, sel.x)), 1e-9 * (1 + norm_inf(p.b)));
            for (const auto& x : pts) {
                const double v = k == NormKind::Euclid ? norm2(x) : norm_inf(x);
                EXPECT_LE(sel.value, v + 1e-9) << "trial " << trial;
            }
        }
    }
}

TEST(Sparse, Figures) {
    const auto a = sparse_solution(fig1a());
    EXPECT_LT(dist(a.x, Vector{1, 0}), 1e-12);
    EXPECT_EQ(a.value, 1.0);
    const auto b = sparse_solution(fig1b());
    EXPECT_LT(dist(b.x, Vector{3, 0}), 1e-9);
    EXPECT_EQ(b.value, 1.0);
    const auto c = sparse_solution(AveProblem(Matrix(4, 4), Vector(4, -1.0)));
    EXPECT_EQ(c.value, 4.0);
}

TEST(Sparse, NoBruteForcePointIsSparser) {
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 2 + static_cast<std::size_t>(trial % 3);
        Matrix a = random_matrix(n, n);
        Vector x = random_vector(n, -2, 2);
        x[trial % n] = 0.0;
        const AveProblem p(a, sub(a * x, vabs(x)));
        const auto sel = sparse_solution(p);
        EXPECT_LE(norm_inf(residual(p, sel.x)), 1e-9 * (1 + norm_inf(p.b)));
        EXPECT_LE(sel.value, static_cast<double>(n - 1));
        for (const auto& y : testutil::brute_force_points(a, Matrix::identity(n), p.b)) {
            std::size_t nnz = 0;
            for (double v : y) nnz += std::fabs(v) > 1e-9;
            EXPECT_LE(sel.value, static_cast<double>(nnz));
        }
    }
}

// ---------- right-hand side correction ----------

TEST(CorrectRhs, FeasibleInstanceHasZeroObjective) {
    const auto c = correct_rhs(fig1a());
    EXPECT_LT(c.objective, 1e-20);
    EXPECT_LT(norm_inf(c.r), 1e-10);
}

TEST(CorrectRhs, ScalarFixture) {
    const auto c = correct_rhs(scalar(0.3, 1));
    EXPECT_EQ(c.x_star, Vector{0});
    EXPECT_NEAR(c.objective, 1.0, 1e-15);
    EXPECT_NEAR(c.corrected_b[0], 0.0, 1e-15);
    EXPECT_EQ(c.attained, Attainment::Yes);
}

TEST(CorrectRhs, SeparableFixture) {
    const auto c = correct_rhs(AveProblem(0.3 * Matrix::identity(2), Vector{1, 1}));
    EXPECT_LT(dist(c.x_star, Vector{0, 0}), 1e-12);
    EXPECT_NEAR(c.objective, 2.0, 1e-12);
}

TEST(CorrectRhs, CorrectedSystemSolvedAndDominance) {
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 1 + static_cast<std::size_t>(trial % 5);
        const AveProblem p(random_matrix(n, n, -1.5, 1.5), random_vector(n, -2, 2));
        const auto c = correct_rhs(p);
        EXPECT_NEAR(c.objective, res_sq(p, c.x_star), 1e-12 * (1 + c.objective));
        expect_corrected_feasible(p, c, 1e-12);
        EXPECT_LE(c.objective, res_sq(p, Vector(n, 0.0)) + 1e-12);
        for (const auto& x : testutil::brute_force_points(p.A, Matrix::identity(n), p.b))
            EXPECT_LE(c.objective, res_sq(p, x) + 1e-12);
    }
}

TEST(CorrectRhs, GridOracleInTwoDimensions) {
    for (int trial = 0; trial < 10; ++trial) {
        const AveProblem p(random_matrix(2, 2, -1.5, 1.5), random_vector(2, -3, 3));
        const auto c = correct_rhs(p);
        EXPECT_LE(c.objective, 1.05 * grid_min([&](const Vector& x) { return res_sq(p, x); }) + 1e-12);
    }
}

TEST(CorrectRhs, LargeInstanceUsesMultistart) {
    const std::size_t n = 14;
    Matrix a = random_matrix(n, n);
    for (std::size_t i = 0; i < n; ++i) a(i, i) += 2.0 * n;
    const Vector x = random_vector(n, -2, 2);
    const AveProblem p(a, sub(a * x, vabs(x)));
    EXPECT_LT(correct_rhs(p).objective, 1e-16);
    const AveProblem q = infeasible_instance(n);
    const auto c = correct_rhs(q);
    EXPECT_LE(c.objective, res_sq(q, Vector(n, 0.0)) + 1e-12);
    expect_corrected_feasible(q, c, 1e-12);
}

TEST(Nnls, MatchesActiveSetBruteForce) {
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 1 + static_cast<std::size_t>(trial % 4);
        const Matrix e = random_matrix(n + 1, n);
        const Vector b = random_vector(n + 1);
        const Vector y = detail::nnls(e, b);
        for (double v : y) EXPECT_GE(v, 0.0);
        auto obj = [&](const Vector& z) {
            double s = 0;
            for (std::size_t i = 0; i < e.rows(); ++i) {
                double r = -b[i];
                for (std::size_t j = 0; j < n; ++j) r += e(i, j) * z[j];
                s += r * r;
            }
            return s;
        };
        // Every support: unconstrained least squares on it, kept if nonnegative.
        double best = obj(Vector(n, 0.0));
        for (std::uint64_t mask = 1; mask < (1ull << n); ++mask) {
            std::vector<std::size_t> idx;
            for (std::size_t j = 0; j < n; ++j)
                if ((mask >> j) & 1) idx.push_back(j);
            Matrix nt(idx.size(), idx.size());
            Vector rhs(idx.size(), 0.0);
            for (std::size_t r = 0; r < idx.size(); ++r) {
                for (std::size_t c = 0; c < idx.size(); ++c)
                    for (std::size_t i = 0; i < e.rows(); ++i) nt(r, c) += e(i, idx[r]) * e(i, idx[c]);
                for (std::size_t i = 0; i < e.rows(); ++i) rhs[r] += e(i, idx[r]) * b[i];
            }
            const Vector zs = testutil::gauss_jordan(nt, rhs);
            Vector z(n, 0.0);
            bool ok = true;
            for (std::size_t r = 0; r < idx.size(); ++r) {
                z[idx[r]] = zs[r];
                ok = ok && zs[r] >= 0;
            }
            if (ok) best = std::min(best, obj(z));
        }
        EXPECT_NEAR(obj(y), best, 1e-12 * (1 + best)) << "trial " << trial;
    }
}

// ---------- matrix and right-hand side correction ----------

TEST(CorrectBoth, ScalarAttainedAtZero) {
    const auto c = correct_both(scalar(0, 1));
    EXPECT_EQ(c.attained, Attainment::Yes);
    EXPECT_NEAR(c.x_star[0], 0.0, 1e-12);
    EXPECT_NEAR(c.objective, 1.0, 1e-12);
    EXPECT_NEAR(c.R(0, 0), 0.0, 1e-12);
    EXPECT_NEAR(c.r[0], -1.0, 1e-12);
    expect_corrected_feasible(scalar(0, 1), c, 1e-12);
}

TEST(CorrectBoth, ScalarInfimumNotAttained) {
    const auto c = correct_both(scalar(0.3, 1));
    EXPECT_EQ(c.attained, Attainment::SuspectedNotAttained);
    EXPECT_NEAR(c.infimum, 0.49, 5e-4);
    EXPECT_NEAR(c.objective, 0.49, 5e-4);
    EXPECT_GT(c.x_star[0], 0.0);
    EXPECT_NEAR(c.objective, frob_sq(c.R, c.r), 1e-8 * c.objective);
}

TEST(CorrectBoth, FeasibleInstance) {
    const auto c = correct_both(fig1a());
    EXPECT_EQ(c.attained, Attainment::Yes);
    EXPECT_LT(c.objective, 1e-20);
    EXPECT_LE(norm_inf(residual(fig1a(), c.x_star)), 1e-9);
    EXPECT_LT(frob_sq(c.R, c.r), 1e-20);
}

TEST(CorrectBoth, IdentitiesOnInfeasibleInstances) {
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 1 + static_cast<std::size_t>(trial % 6);
        const AveProblem p = infeasible_instance(n);
        const auto c = correct_both(p);
        EXPECT_NEAR(frob_sq(c.R, c.r), c.objective, 1e-8 * c.objective) << "trial " << trial;
        expect_corrected_feasible(p, c, 1e-8);
        EXPECT_NEAR(c.objective, frac_both(p, c.x_star), 1e-12 * (1 + c.objective));
        EXPECT_LE(c.infimum, c.objective + 1e-12);
        EXPECT_LE(c.objective, frac_both(p, Vector(n, 0.0)) + 1e-12);
    }
}

TEST(CorrectBoth, GridOracleInTwoDimensions) {
    for (int trial = 0; trial < 12; ++trial) {
        const AveProblem p = trial % 2 ? infeasible_instance(2) : AveProblem(random_matrix(2, 2, -2, 2), random_vector(2, -3, 3));
        const auto c = correct_both(p);
        EXPECT_LE(c.infimum, 1.05 * grid_min([&](const Vector& x) { return frac_both(p, x); }) + 1e-12) << trial;
    }
}

TEST(CorrectBoth, RandomSamplingNeverBeatsFaceEnumeration) {
    for (int trial = 0; trial < 15; ++trial) {
        const std::size_t n = 3 + static_cast<std::size_t>(trial % 3);
        const AveProblem p(random_matrix(n, n), random_vector(n, -2, 2));
        const auto c = correct_both(p);
        for (int k = 0; k < 4000; ++k) {
            const double scale = std::pow(10.0, testutil::uniform(-2, 4));
            EXPECT_GE(frac_both(p, scaled(random_vector(n), scale)), c.infimum - 1e-10);
        }
    }
}

TEST(CorrectBoth, LargeInstanceUsesDescent) {
    const AveProblem p = infeasible_instance(10);
    const auto c = correct_both(p);
    EXPECT_NEAR(frob_sq(c.R, c.r), c.objective, 1e-8 * c.objective);
    EXPECT_LE(c.objective, frac_both(p, Vector(10, 0.0)) + 1e-12);
    expect_corrected_feasible(p, c, 1e-8);
}

// ---------- Chebyshev correction ----------

TEST(CorrectChebyshev, FeasibleInstance) {
    const auto c = correct_chebyshev(fig1a());
    EXPECT_LT(c.objective, 1e-9);
    EXPECT_EQ(c.attained, Attainment::Yes);
}

TEST(CorrectChebyshev, DegenerateRatioPrefersZero) {
    const auto c = correct_chebyshev(scalar(0, 1));
    EXPECT_EQ(c.attained, Attainment::Yes);
    EXPECT_NEAR(c.x_star[0], 0.0, 1e-12);
    EXPECT_NEAR(c.objective, 1.0, 1e-12);
}

TEST(CorrectChebyshev, LimitNotAttained) {
    const auto c = correct_chebyshev(scalar(0.3, 1));
    EXPECT_EQ(c.attained, Attainment::SuspectedNotAttained);
    EXPECT_NEAR(c.infimum, 0.7, 1e-9);
    EXPECT_NEAR(c.objective, 0.7, 1e-5);
    EXPECT_GT(c.x_star[0], 0.0);
}

TEST(CorrectChebyshev, CorrectionMatchesObjectiveAndIsFeasible) {
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 1 + static_cast<std::size_t>(trial % 5);
        const AveProblem p = trial % 2 ? infeasible_instance(n) : AveProblem(random_matrix(n, n, -2, 2), random_vector(n, -2, 2));
        const auto c = correct_chebyshev(p);
        double mx = norm_inf(c.r);
        for (double v : c.R.data()) mx = std::max(mx, std::fabs(v));
        EXPECT_NEAR(mx, c.objective, 1e-12 * (1 + c.objective));
        EXPECT_NEAR(c.objective, frac_cheb(p, c.x_star), 1e-12 * (1 + c.objective));
        expect_corrected_feasible(p, c, 1e-8);
    }
}

TEST(CorrectChebyshev, GridOracleInTwoDimensions) {
    for (int trial = 0; trial < 10; ++trial) {
        const AveProblem p = trial % 2 ? infeasible_instance(2) : AveProblem(random_matrix(2, 2, -2, 2), random_vector(2, -3, 3));
        const auto c = correct_chebyshev(p);
        EXPECT_LE(c.infimum, 1.05 * grid_min([&](const Vector& x) { return frac_cheb(p, x); }) + 1e-12) << trial;
    }
}
