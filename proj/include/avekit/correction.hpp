#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "avekit/core/linalg.hpp"
#include "avekit/core/lp.hpp"
#include "avekit/core/problem.hpp"
#include "avekit/solution_set.hpp"
#include "avekit/solvers/enumerate.hpp"
#include "avekit/solvers/newton.hpp"

namespace avekit {

// ---------- solution selection ----------

enum class NormKind { Euclid, Max };

struct SelectedSolution {
    Vector x;
    double value = 0.0;  // the norm, or the count of nonzeros for sparse_solution
    SignVector s;        // orthant of the piece it came from
};

namespace detail {

inline double vnorm(const Vector& x, NormKind k) { return k == NormKind::Euclid ? norm2(x) : norm_inf(x); }

inline std::uint64_t binomial(std::size_t n, std::size_t k) {
    if (k > n) return 0;
    std::uint64_t r = 1;
    for (std::size_t i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
        if (r > (std::uint64_t{1} << 40)) return r;
    }
    return r;
}

// Calls f(subset) for every subset of `pool` with exactly k elements.
template <class F>
void for_each_subset(const std::vector<std::size_t>& pool, std::size_t k, F&& f) {
    if (k > pool.size()) return;
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    std::vector<std::size_t> pick(k);
    while (true) {
        for (std::size_t i = 0; i < k; ++i) pick[i] = pool[idx[i]];
        f(pick);
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == pool.size() - k + i - 1) --i;
        if (i == 0) return;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

// Least-norm point of {x0 + N t : x_S = 0}, or nullopt if that set is empty.
inline std::optional<Vector> subspace_min_norm(const Vector& x0, const std::vector<Vector>& dirs,
                                               const std::vector<std::size_t>& zero) {
    const std::size_t n = x0.size(), k = dirs.size();
    Vector tp(k, 0.0);
    std::vector<Vector> z;
    if (zero.empty()) {
        for (std::size_t j = 0; j < k; ++j) {
            Vector e(k, 0.0);
            e[j] = 1.0;
            z.push_back(e);
        }
    } else {
        Matrix c(zero.size(), k);
        Vector d(zero.size());
        for (std::size_t r = 0; r < zero.size(); ++r) {
            d[r] = -x0[zero[r]];
            for (std::size_t j = 0; j < k; ++j) c(r, j) = dirs[j][zero[r]];
        }
        const auto rr = rank_revealing_solve(c, d);
        if (!rr.consistent) return std::nullopt;
        tp = rr.particular;
        z = rr.nullspace;
    }
    Vector y = x0;
    for (std::size_t j = 0; j < k; ++j)
        for (std::size_t i = 0; i < n; ++i) y[i] += dirs[j][i] * tp[j];
    const std::size_t m = z.size();
    if (m > 0) {
        Matrix g(n, m);
        for (std::size_t c = 0; c < m; ++c)
            for (std::size_t j = 0; j < k; ++j)
                for (std::size_t i = 0; i < n; ++i) g(i, c) += dirs[j][i] * z[c][j];
        const Matrix gtg = transpose_times(g, g);
        const Vector rhs = scaled(g.transpose() * y, -1.0);
        const auto sol = rank_revealing_solve(gtg, rhs);
        y = add(y, g * sol.particular);
    }
    for (std::size_t i : zero) y[i] = 0.0;
    return y;
}

inline bool in_orthant(const SignVector& s, const Vector& x, double tol) {
    const double scale = tol * (1.0 + norm_inf(x));
    for (std::size_t i = 0; i < x.size(); ++i)
        if (s[i] * x[i] < -scale) return false;
    return true;
}

inline constexpr std::uint64_t kFaceBudget = 200000;

// Least-norm point of an affine piece with x_W = 0 forced, by enumerating
// the active coordinate sets of size ≤ dim. Falls back to clipped steps when
// the face count exceeds the budget.
inline std::optional<Vector> piece_min_norm(const OrthantPiece& piece, const std::vector<std::size_t>& forced = {}) {
    if (piece.kind == OrthantPiece::Kind::Point) {
        for (std::size_t i : forced)
            if (std::fabs(piece.x[i]) > 1e-9) return std::nullopt;
        return piece.x;
    }
    const std::size_t n = piece.x.size(), k = piece.dimension();
    std::vector<std::size_t> pool;
    for (std::size_t i = 0; i < n; ++i)
        if (std::find(forced.begin(), forced.end(), i) == forced.end()) pool.push_back(i);
    std::uint64_t faces = 0;
    for (std::size_t j = 0; j <= std::min(k, pool.size()); ++j) faces += binomial(pool.size(), j);
    std::optional<Vector> best;
    double best_norm = INFINITY;
    if (faces <= kFaceBudget) {
        for (std::size_t j = 0; j <= std::min(k, pool.size()); ++j) {
            for_each_subset(pool, j, [&](const std::vector<std::size_t>& extra) {
                std::vector<std::size_t> zero = forced;
                zero.insert(zero.end(), extra.begin(), extra.end());
                const auto y = subspace_min_norm(piece.x, piece.directions, zero);
                if (!y || !in_orthant(piece.s, *y, 1e-9)) return;
                const double v = norm2(*y);
                if (v < best_norm - 1e-14 * (1.0 + v)) {
                    best_norm = v;
                    best = y;
                }
            });
        }
        return best;
    }
    if (!forced.empty()) return std::nullopt;
    // Clipped active-set walk from the feasible base point.
    Vector x = piece.x;
    std::vector<std::size_t> zero;
    for (std::size_t round = 0; round <= n; ++round) {
        const auto target = subspace_min_norm(piece.x, piece.directions, zero);
        if (!target) break;
        if (in_orthant(piece.s, *target, 1e-9)) return target;
        double lambda = 1.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double cur = piece.s[i] * x[i], nxt = piece.s[i] * (*target)[i];
            if (nxt < 0.0 && cur - nxt > 0.0) lambda = std::min(lambda, cur / (cur - nxt));
        }
        for (std::size_t i = 0; i < n; ++i) x[i] += lambda * ((*target)[i] - x[i]);
        for (std::size_t i = 0; i < n; ++i)
            if (piece.s[i] * x[i] <= 1e-12 * (1.0 + norm_inf(x)) && std::find(zero.begin(), zero.end(), i) == zero.end()) {
                zero.push_back(i);
                x[i] = 0.0;
            }
    }
    return x;
}

// min ‖x‖∞ over an affine piece, by LP in (t, τ).
inline Vector piece_min_maxnorm(const OrthantPiece& piece) {
    if (piece.kind == OrthantPiece::Kind::Point) return piece.x;
    const std::size_t n = piece.x.size(), k = piece.dimension();
    LinearProgram lp;
    lp.c.assign(k + 1, 0.0);
    lp.c[k] = 1.0;
    lp.nonneg.assign(k + 1, 0);
    lp.nonneg[k] = 1;
    lp.G = Matrix(0, k + 1);
    for (std::size_t i = 0; i < n; ++i) {
        Vector row(k + 1, 0.0);
        for (std::size_t j = 0; j < k; ++j) row[j] = piece.directions[j][i];
        Vector sign_row = scaled(row, piece.s[i]);
        lp.add_row(sign_row, -piece.s[i] * piece.x[i]);
        Vector upper = scaled(row, -1.0);
        upper[k] = 1.0;
        lp.add_row(upper, piece.x[i]);
        row[k] = 1.0;
        lp.add_row(row, -piece.x[i]);
    }
    const auto sol = solve_lp(lp);
    if (sol.status != LpStatus::Optimal) return piece.x;
    Vector x = piece.x;
    for (std::size_t j = 0; j < k; ++j)
        for (std::size_t i = 0; i < n; ++i) x[i] += piece.directions[j][i] * sol.x[j];
    return x;
}

inline std::size_t count_nonzeros(const Vector& x, double tol = 1e-9) {
    std::size_t c = 0;
    for (double v : x) c += std::fabs(v) > tol;
    return c;
}

}  // namespace detail

// Solution of least Euclidean or max norm; ties go to the lexicographically
// smallest sign vector.
inline SelectedSolution min_norm_solution(const AveProblem& p, NormKind norm = NormKind::Euclid,
                                          std::size_t enum_cap = kDefaultEnumCap) {
    const SolutionSet set = enumerate_solutions(p, false, enum_cap);
    if (set.empty()) throw Unsolvable("the absolute value equation has no solution");
    std::optional<SelectedSolution> best;
    for (const auto& piece : set.pieces) {
        Vector x;
        if (norm == NormKind::Max) {
            x = detail::piece_min_maxnorm(piece);
        } else {
            const auto y = detail::piece_min_norm(piece);
            x = y ? *y : piece.x;
        }
        const double v = detail::vnorm(x, norm);
        const double tie = 1e-12 * (1.0 + v);
        if (!best || v < best->value - tie || (std::fabs(v - best->value) <= tie && piece.s < best->s))
            best = SelectedSolution{x, v, piece.s};
    }
    return *best;
}

// Solution with the fewest nonzero entries (|xᵢ| ≤ 1e-9 counts as zero);
// ties go to the smaller Euclidean norm.
inline SelectedSolution sparse_solution(const AveProblem& p, std::size_t enum_cap = kDefaultEnumCap) {
    const SolutionSet set = enumerate_solutions(p, false, enum_cap);
    if (set.empty()) throw Unsolvable("the absolute value equation has no solution");
    std::optional<SelectedSolution> best;
    double best_norm = INFINITY;
    auto offer = [&](const Vector& x, const SignVector& s) {
        const double nnz = static_cast<double>(detail::count_nonzeros(x));
        const double nrm = norm2(x);
        const double tie = 1e-12 * (1.0 + nrm);
        if (!best || nnz < best->value || (nnz == best->value && nrm < best_norm - tie) ||
            (nnz == best->value && std::fabs(nrm - best_norm) <= tie && s < best->s)) {
            best = SelectedSolution{x, nnz, s};
            best_norm = nrm;
        }
    };
    for (const auto& piece : set.pieces) {
        if (piece.kind == OrthantPiece::Kind::Point) {
            offer(piece.x, piece.s);
            continue;
        }
        const std::size_t n = piece.x.size(), k = piece.dimension();
        std::vector<std::size_t> all(n);
        for (std::size_t i = 0; i < n; ++i) all[i] = i;
        auto try_zeros = [&](const std::vector<std::size_t>& w) {
            if (const auto y = detail::piece_min_norm(piece, w)) offer(*y, piece.s);
        };
        for (std::size_t j = 0; j <= std::min<std::size_t>(2, k); ++j) detail::for_each_subset(all, j, try_zeros);
        if (k > 2 && detail::binomial(n, k) <= 20000) detail::for_each_subset(all, k, try_zeros);
    }
    return *best;
}

// ---------- correction of infeasible systems ----------

enum class Attainment { Yes, SuspectedNotAttained };

inline const char* to_string(Attainment a) { return a == Attainment::Yes ? "Yes" : "SuspectedNotAttained"; }

struct CorrectionResult {
    std::string mode;
    Vector x_star;
    double objective = 0.0;  // evaluated at x_star
    double infimum = 0.0;    // equals objective when attained
    Attainment attained = Attainment::Yes;
    Matrix R;
    Vector r;
    Vector corrected_b;
    Matrix corrected_A;
};

struct CorrectionConfig {
    std::size_t exhaustive_max_n = 12;  // correct_rhs: every orthant up to this size
    std::size_t face_max_n = 8;         // correct_both: exact face enumeration up to this size
    int random_starts = 50;
    std::uint64_t seed = 1;
    double divergence_norm = 1e8;  // local descent: iterates beyond this are treated as escaping
    double report_norm = 1e6;      // ‖x*‖₂ of the representative point of an unattained infimum
    int max_descent_iters = 2000;
};

namespace detail {

// Lawson–Hanson: min ‖E y − b‖₂ subject to y ≥ 0.
inline Vector nnls(const Matrix& e, const Vector& b, int max_outer = 0) {
    const std::size_t n = e.cols();
    if (max_outer <= 0) max_outer = static_cast<int>(3 * n + 10);
    Vector x(n, 0.0);
    std::vector<char> passive(n, 0);
    const double tol = 1e-12 * (1.0 + norm_inf(e) * (1.0 + norm_inf(b)));
    auto gradient = [&]() { return e.transpose() * sub(b, e * x); };
    auto ls_on_passive = [&]() {
        std::vector<std::size_t> idx;
        for (std::size_t j = 0; j < n; ++j)
            if (passive[j]) idx.push_back(j);
        Matrix ep(e.rows(), idx.size());
        for (std::size_t i = 0; i < e.rows(); ++i)
            for (std::size_t c = 0; c < idx.size(); ++c) ep(i, c) = e(i, idx[c]);
        const auto sol = rank_revealing_solve(transpose_times(ep, ep), ep.transpose() * b);
        Vector z(n, 0.0);
        for (std::size_t c = 0; c < idx.size(); ++c) z[idx[c]] = sol.particular[c];
        return z;
    };
    for (int outer = 0; outer < max_outer; ++outer) {
        const Vector w = gradient();
        std::size_t jmax = n;
        double wmax = tol;
        for (std::size_t j = 0; j < n; ++j)
            if (!passive[j] && w[j] > wmax) {
                wmax = w[j];
                jmax = j;
            }
        if (jmax == n) break;
        passive[jmax] = 1;
        for (std::size_t inner = 0; inner <= n; ++inner) {
            const Vector z = ls_on_passive();
            bool positive = true;
            for (std::size_t j = 0; j < n; ++j)
                if (passive[j] && z[j] <= 0.0) positive = false;
            if (positive) {
                x = z;
                break;
            }
            double alpha = 1.0;
            for (std::size_t j = 0; j < n; ++j)
                if (passive[j] && z[j] <= 0.0) alpha = std::min(alpha, x[j] / (x[j] - z[j]));
            for (std::size_t j = 0; j < n; ++j) x[j] += alpha * (z[j] - x[j]);
            for (std::size_t j = 0; j < n; ++j)
                if (passive[j] && x[j] <= 1e-14 * (1.0 + norm_inf(x))) {
                    passive[j] = 0;
                    x[j] = 0.0;
                }
        }
    }
    return x;
}

inline double sq(const Vector& v) { return dot(v, v); }

// Best x in the closed orthant s for ‖Ax − |x| − b‖²; inside it the map is
// (A diag(s) − I) y with x = diag(s) y, y ≥ 0.
inline Vector rhs_orthant_min(const AveProblem& p, const SignVector& s) {
    const std::size_t n = p.n();
    Matrix e = p.A;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) e(i, j) *= s[j];
    for (std::size_t i = 0; i < n; ++i) e(i, i) -= 1.0;
    Vector y = nnls(e, p.b);
    for (std::size_t i = 0; i < n; ++i) y[i] *= s[i];
    return y;
}

inline double both_objective(const AveProblem& p, const Vector& x) { return sq(residual(p, x)) / (1.0 + sq(x)); }

inline CorrectionResult finish_frobenius(const AveProblem& p, std::string mode, Vector x, double infimum,
                                         Attainment att) {
    const std::size_t n = p.n();
    CorrectionResult out;
    out.mode = std::move(mode);
    const Vector rho = residual(p, x);
    const double den = 1.0 + sq(x);
    out.R = Matrix(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out.R(i, j) = -rho[i] * x[j] / den;
    out.r = scaled(rho, 1.0 / den);
    out.objective = sq(rho) / den;
    out.infimum = att == Attainment::Yes ? out.objective : infimum;
    out.attained = att;
    out.corrected_A = p.A + out.R;
    out.corrected_b = add(p.b, out.r);
    out.x_star = std::move(x);
    return out;
}

inline std::vector<Vector> random_starts(std::size_t n, int count, std::uint64_t seed, double scale) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> u(-scale, scale);
    std::vector<Vector> out;
    for (int k = 0; k < count; ++k) {
        Vector x(n);
        for (auto& v : x) v = u(gen);
        out.push_back(std::move(x));
    }
    return out;
}

}  // namespace detail

// min ‖Ax − |x| − b‖²: exact per-orthant nonnegative least squares for small
// n, otherwise a multistart orthant-hopping descent. The corrected right-hand
// side is Ax* − |x*|, so r = Ax* − |x*| − b and R = 0.
inline CorrectionResult correct_rhs(const AveProblem& p, const CorrectionConfig& cfg = {}) {
    const std::size_t n = p.n();
    auto f = [&](const Vector& x) { return detail::sq(residual(p, x)); };
    Vector best(n, 0.0);
    double best_f = f(best);
    auto offer = [&](const Vector& x) {
        const double v = f(x);
        const double tie = 1e-14 * (1.0 + v);
        if (v < best_f - tie || (std::fabs(v - best_f) <= tie && norm2(x) < norm2(best))) {
            best_f = v;
            best = x;
        }
    };
    if (n <= cfg.exhaustive_max_n) {
        const std::uint64_t count = std::uint64_t{1} << n;
        for (std::uint64_t k = 0; k < count; ++k) offer(detail::rhs_orthant_min(p, SignVector::gray(n, k)));
    } else {
        std::vector<Vector> starts{Vector(n, 0.0)};
        const auto newton = solve_newton(p);
        if (all_finite(newton.x)) starts.push_back(newton.x);
        const auto rnd = detail::random_starts(n, cfg.random_starts, cfg.seed, 1.0 + norm_inf(p.b));
        starts.insert(starts.end(), rnd.begin(), rnd.end());
        for (const auto& x0 : starts) {
            SignVector s = sign_diag(x0);
            Vector x = detail::rhs_orthant_min(p, s);
            double fx = f(x);
            for (int round = 0; round < 200; ++round) {
                bool moved = false;
                for (std::size_t i = 0; i < n && !moved; ++i) {
                    if (x[i] != 0.0) continue;
                    SignVector t = s;
                    t.flip(i);
                    const Vector y = detail::rhs_orthant_min(p, t);
                    const double fy = f(y);
                    if (fy < fx - 1e-14 * (1.0 + fx)) {
                        s = t;
                        x = y;
                        fx = fy;
                        moved = true;
                    }
                }
                if (!moved) break;
            }
            offer(x);
        }
    }
    CorrectionResult out;
    out.mode = "rhs";
    out.r = residual(p, best);
    out.objective = out.infimum = detail::sq(out.r);
    out.R = Matrix(n, n);
    out.corrected_A = p.A;
    out.corrected_b = add(p.b, out.r);
    out.x_star = std::move(best);
    return out;
}

// min ‖Ax − |x| − b‖² / (1 + ‖x‖²). With v = (x, 1) this is a Rayleigh
// quotient of K_s = [A − diag(s), −b]ᵀ[A − diag(s), −b] over the closed
// orthant; its minimizers are sign-consistent eigenvectors of principal
// submatrices (faces). Faces without the last coordinate are limits at
// infinity. Larger n use a multistart descent.
inline CorrectionResult correct_both(const AveProblem& p, const CorrectionConfig& cfg = {}) {
    const std::size_t n = p.n();
    std::optional<Vector> best_x;
    double best_val = INFINITY;
    std::optional<Vector> inf_dir;
    double inf_val = INFINITY;
    auto offer_point = [&](const Vector& x) {
        const double v = detail::both_objective(p, x);
        const double tie = 1e-13 * (1.0 + v);
        if (!best_x || v < best_val - tie || (std::fabs(v - best_val) <= tie && norm2(x) < norm2(*best_x))) {
            best_val = v;
            best_x = x;
        }
    };
    auto offer_direction = [&](const Vector& d, double v) {
        if (v < inf_val) {
            inf_val = v;
            inf_dir = scaled(d, 1.0 / norm2(d));
        }
    };
    if (n <= cfg.face_max_n) {
        const std::uint64_t masks = std::uint64_t{1} << n;
        for (std::uint64_t mask = 0; mask < masks; ++mask) {
            std::vector<std::size_t> face;
            for (std::size_t i = 0; i < n; ++i)
                if ((mask >> i) & 1u) face.push_back(i);
            const std::size_t f = face.size();
            const std::uint64_t patterns = std::uint64_t{1} << f;
            for (std::uint64_t pat = 0; pat < patterns; ++pat) {
                std::vector<int> s(f);
                for (std::size_t c = 0; c < f; ++c) s[c] = ((pat >> c) & 1u) ? 1 : -1;
                // Columns of W restricted to the face, then the −b column.
                Matrix w(n, f + 1);
                for (std::size_t c = 0; c < f; ++c) {
                    for (std::size_t i = 0; i < n; ++i) w(i, c) = p.A(i, face[c]);
                    w(face[c], c) -= s[c];
                }
                for (std::size_t i = 0; i < n; ++i) w(i, f) = -p.b[i];
                for (int with_last = 0; with_last < 2; ++with_last) {
                    const std::size_t m = f + static_cast<std::size_t>(with_last);
                    if (m == 0) continue;
                    Matrix wm(n, m);
                    for (std::size_t i = 0; i < n; ++i) {
                        for (std::size_t c = 0; c < f; ++c) wm(i, c) = w(i, c);
                        if (with_last) wm(i, f) = w(i, f);
                    }
                    const auto eig = jacobi_eigen(transpose_times(wm, wm), true);
                    for (std::size_t e = 0; e < m; ++e) {
                        Vector v(m);
                        for (std::size_t i = 0; i < m; ++i) v[i] = eig.vectors(i, e);
                        bool strict = true;
                        for (double vi : v) strict = strict && std::fabs(vi) > 1e-9;
                        if (!strict) continue;
                        if (with_last && v[f] < 0) v = scaled(v, -1.0);
                        if (!with_last && v[0] * s[0] < 0) v = scaled(v, -1.0);
                        bool signs = true;
                        for (std::size_t c = 0; c < f; ++c) signs = signs && v[c] * s[c] > 0;
                        if (!signs) continue;
                        Vector x(n, 0.0);
                        if (with_last) {
                            for (std::size_t c = 0; c < f; ++c) x[face[c]] = v[c] / v[f];
                            if (norm2(x) <= cfg.divergence_norm) offer_point(x);
                            else offer_direction(x, detail::both_objective(p, x));
                        } else {
                            for (std::size_t c = 0; c < f; ++c) x[face[c]] = v[c];
                            offer_direction(x, std::max(0.0, eig.values[e]));
                        }
                    }
                }
            }
        }
    } else {
        auto grad = [&](const Vector& x) {
            const Vector rho = residual(p, x);
            const double den = 1.0 + detail::sq(x), num = detail::sq(rho);
            Matrix j = p.A;
            for (std::size_t i = 0; i < n; ++i) j(i, i) -= x[i] > 0 ? 1.0 : (x[i] < 0 ? -1.0 : 0.0);
            Vector g = scaled(j.transpose() * rho, 2.0 / den);
            for (std::size_t i = 0; i < n; ++i) g[i] -= 2.0 * x[i] * num / (den * den);
            return g;
        };
        std::vector<Vector> starts{Vector(n, 0.0), correct_rhs(p, cfg).x_star};
        const auto rnd = detail::random_starts(n, cfg.random_starts, cfg.seed, 1.0 + norm_inf(p.b));
        starts.insert(starts.end(), rnd.begin(), rnd.end());
        for (Vector x : starts) {
            double fx = detail::both_objective(p, x);
            bool escaped = false;
            for (int it = 0; it < cfg.max_descent_iters; ++it) {
                const Vector g = grad(x);
                const double gg = detail::sq(g);
                if (gg <= 1e-30) break;
                double step = (1.0 + norm2(x)) / std::sqrt(gg);
                bool accepted = false;
                for (int bt = 0; bt < 60; ++bt, step *= 0.5) {
                    const Vector y = sub(x, scaled(g, step));
                    const double fy = detail::both_objective(p, y);
                    if (fy <= fx - 1e-4 * step * gg) {
                        x = y;
                        fx = fy;
                        accepted = true;
                        break;
                    }
                }
                if (!accepted) break;
                if (norm2(x) > cfg.divergence_norm) {
                    escaped = true;
                    break;
                }
            }
            if (escaped) offer_direction(x, fx);
            else offer_point(x);
        }
    }
    const bool use_limit = inf_dir && (!best_x || inf_val < best_val - 1e-10 * (1.0 + best_val));
    if (use_limit)
        return detail::finish_frobenius(p, "both", scaled(*inf_dir, cfg.report_norm), inf_val,
                                        Attainment::SuspectedNotAttained);
    return detail::finish_frobenius(p, "both", *best_x, best_val, Attainment::Yes);
}

// min ‖Ax − |x| − b‖∞ / (1 + ‖x‖₁), one Charnes–Cooper LP per orthant:
// t = 1/(1 + sᵀx), y = t x. A second LP maximizes t among optimal points so
// finite minimizers win over limits. R = −ρ sgn(x*)ᵀ/(1 + ‖x*‖₁) and
// r = ρ/(1 + ‖x*‖₁), whose largest entry in modulus equals the objective.
inline CorrectionResult correct_chebyshev(const AveProblem& p, std::size_t enum_cap = kDefaultEnumCap,
                                          const CorrectionConfig& cfg = {}) {
    const std::size_t n = p.n();
    check_enum_cap(n, enum_cap);
    const std::size_t nv = n + 2, it = n, itau = n + 1;
    auto phi = [&](const Vector& x) { return norm_inf(residual(p, x)) / (1.0 + norm1(x)); };
    std::optional<Vector> best_x;
    double best_val = INFINITY;
    std::optional<Vector> inf_dir;
    double inf_val = INFINITY;
    const std::uint64_t count = std::uint64_t{1} << n;
    for (std::uint64_t k = 0; k < count; ++k) {
        const SignVector s = SignVector::gray(n, k);
        LinearProgram lp;
        lp.c.assign(nv, 0.0);
        lp.c[itau] = 1.0;
        lp.nonneg.assign(nv, 0);
        lp.nonneg[it] = lp.nonneg[itau] = 1;
        lp.G = Matrix(0, nv);
        for (std::size_t i = 0; i < n; ++i) {
            Vector row(nv, 0.0);
            for (std::size_t j = 0; j < n; ++j) row[j] = p.A(i, j);
            row[i] -= s[i];
            row[it] = -p.b[i];
            Vector lo = scaled(row, -1.0);
            lo[itau] = 1.0;
            lp.add_row(lo, 0.0);
            row[itau] = 1.0;
            lp.add_row(row, 0.0);
            Vector sg(nv, 0.0);
            sg[i] = s[i];
            lp.add_row(sg, 0.0);
        }
        Vector norm_row(nv, 0.0);
        for (std::size_t j = 0; j < n; ++j) norm_row[j] = s[j];
        norm_row[it] = 1.0;
        lp.add_row(norm_row, 1.0, true);
        const auto first = solve_lp(lp);
        if (first.status != LpStatus::Optimal) continue;
        const double tau = first.x[itau];
        auto offer = [&](const Vector& sol) {
            const double t = sol[it];
            const Vector y(sol.begin(), sol.begin() + static_cast<std::ptrdiff_t>(n));
            const Vector x = t > 0.0 ? scaled(y, 1.0 / t) : Vector(n, INFINITY);
            if (t > 0.0 && all_finite(x) && norm2(x) <= cfg.divergence_norm) {
                const double v = phi(x);
                const double tie = 1e-12 * (1.0 + v);
                if (!best_x || v < best_val - tie || (std::fabs(v - best_val) <= tie && norm1(x) < norm1(*best_x))) {
                    best_val = v;
                    best_x = x;
                }
            } else if (norm1(y) > 0.0 && tau < inf_val) {
                inf_val = tau;
                inf_dir = scaled(y, 1.0 / norm2(y));
            }
        };
        offer(first.x);
        Vector cap_row(nv, 0.0);
        cap_row[itau] = -1.0;
        lp.add_row(cap_row, -(tau + 1e-11 * (1.0 + tau)));
        lp.c.assign(nv, 0.0);
        lp.c[it] = -1.0;
        const auto second = solve_lp(lp);
        if (second.status == LpStatus::Optimal) offer(second.x);
    }
    const bool use_limit = inf_dir && (!best_x || inf_val < best_val - 1e-10 * (1.0 + best_val));
    Vector x = use_limit ? scaled(*inf_dir, cfg.report_norm) : *best_x;
    CorrectionResult out;
    out.mode = "chebyshev";
    const Vector rho = residual(p, x);
    const double den = 1.0 + norm1(x);
    out.R = Matrix(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const double sg = x[j] > 0 ? 1.0 : (x[j] < 0 ? -1.0 : 0.0);
            out.R(i, j) = -rho[i] * sg / den;
        }
    out.r = scaled(rho, 1.0 / den);
    out.objective = norm_inf(rho) / den;
    out.attained = use_limit ? Attainment::SuspectedNotAttained : Attainment::Yes;
    out.infimum = use_limit ? inf_val : out.objective;
    out.corrected_A = p.A + out.R;
    out.corrected_b = add(p.b, out.r);
    out.x_star = std::move(x);
    return out;
}

}  // namespace avekit
