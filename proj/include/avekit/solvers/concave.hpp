#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "avekit/core/lp.hpp"
#include "avekit/solvers/common.hpp"

namespace avekit {

namespace detail {

// S = {(A + I)x ≥ b, (A − I)x ≥ b}, rows ordered A+I first.
inline LinearProgram feasible_set_lp(const AveProblem& p) {
    const std::size_t n = p.n();
    LinearProgram lp;
    lp.c.assign(n, 0.0);
    lp.G = Matrix(2 * n, n);
    lp.h.resize(2 * n);
    lp.equality.assign(2 * n, 0);
    for (int block = 0; block < 2; ++block) {
        const double shift = block == 0 ? 1.0 : -1.0;
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t r = block * n + i;
            for (std::size_t j = 0; j < n; ++j) lp.G(r, j) = p.A(i, j);
            lp.G(r, i) += shift;
            lp.h[r] = p.b[i];
        }
    }
    return lp;
}

// Concave merit g(x) = eᵀ(Ax − |x| − b), nonnegative on S.
inline double concave_merit(const AveProblem& p, const Vector& x) {
    const Vector r = residual(p, x);
    double s = 0.0;
    for (double v : r) s += v;
    return s;
}

inline Vector sla_cost(const AveProblem& p, const Vector& x) {
    Vector c = transpose_times(p.A, ones(p.n()));
    const SignVector s = sign_diag(x);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] -= s[i];
    return c;
}

// Vertices of S joined to the vertex x by an edge. Uses n linearly
// independent tight rows as a basis; a degenerate direction is followed
// through one basis exchange.
inline std::vector<Vector> adjacent_vertices(const LinearProgram& lp, const Vector& x, double tol = 1e-9) {
    const std::size_t n = x.size();
    const std::size_t m = lp.num_rows();
    const Vector gx = lp.G * x;
    const double scale = 1.0 + norm_inf(x);
    std::vector<std::size_t> tight;
    for (std::size_t i = 0; i < m; ++i)
        if (std::fabs(gx[i] - lp.h[i]) <= tol * (1.0 + std::fabs(lp.h[i])) * scale) tight.push_back(i);
    // Greedy independent subset of the tight rows.
    std::vector<std::size_t> basis;
    std::vector<Vector> ortho;
    for (std::size_t r : tight) {
        Vector v(lp.G.row(r), lp.G.row(r) + n);
        const double nv = norm2(v);
        for (const auto& u : ortho) {
            const double c = dot(v, u);
            for (std::size_t j = 0; j < n; ++j) v[j] -= c * u[j];
        }
        const double nr = norm2(v);
        if (nr > 1e-10 * nv) {
            for (double& e : v) e /= nr;
            ortho.push_back(v);
            basis.push_back(r);
        }
        if (basis.size() == n) break;
    }
    std::vector<Vector> out;
    if (basis.size() < n) return out;

    auto push_unique = [&](const Vector& v) {
        for (const auto& w : out)
            if (dist_inf(v, w) <= 1e-9 * (1.0 + norm_inf(v))) return;
        if (dist_inf(v, x) <= 1e-9 * scale) return;
        out.push_back(v);
    };

    // Returns (step, blocking row) along d; step = ∞ when unblocked.
    auto ratio = [&](const Vector& d, const std::vector<std::size_t>& b) {
        const Vector gd = lp.G * d;
        double best = INFINITY;
        std::size_t block = m;
        for (std::size_t i = 0; i < m; ++i) {
            if (std::find(b.begin(), b.end(), i) != b.end()) continue;
            if (gd[i] >= -1e-12) continue;
            const double slack = std::max(0.0, gx[i] - lp.h[i]);
            const double t = slack / -gd[i];
            if (t < best) {
                best = t;
                block = i;
            }
        }
        return std::make_pair(best, block);
    };

    auto explore = [&](const std::vector<std::size_t>& b, bool allow_swap, auto&& self) -> void {
        Matrix gb(n, n);
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t j = 0; j < n; ++j) gb(k, j) = lp.G(b[k], j);
        Lu lu(gb);
        if (lu.singular()) return;
        for (std::size_t k = 0; k < n; ++k) {
            Vector e(n, 0.0);
            e[k] = 1.0;
            const Vector d = lu.solve(e);
            const auto [t, block] = ratio(d, b);
            if (!std::isfinite(t)) continue;
            if (t > 1e-12) {
                push_unique(add(x, scaled(d, t)));
            } else if (allow_swap) {
                std::vector<std::size_t> b2 = b;
                b2[k] = block;
                self(b2, false, self);
            }
        }
    };
    explore(basis, true, explore);
    return out;
}

}  // namespace detail

// Successive linearization: vertex solutions of min (eᵀA − sgn(xᵏ)ᵀ)x over S.
// With `adjacency` the method escapes stationary non-solution vertices
// through the best adjacent vertex under the concave merit.
inline SolveOutcome solve_concave_sla_impl(const AveProblem& p, const SolverConfig& cfg, bool adjacency) {
    detail::IterationMonitor mon(p, cfg, adjacency ? "zh" : "sla");
    auto& out = mon.outcome();
    LinearProgram lp = detail::feasible_set_lp(p);
    Vector x = cfg.x0 ? *cfg.x0 : detail::zeros(p.n());
    int adjacency_moves = 0;
    for (int k = 1; k <= cfg.max_iters; ++k) {
        lp.c = detail::sla_cost(p, x);
        const auto sol = solve_lp(lp);
        if (sol.status == LpStatus::Infeasible)
            return mon.fail(SolveStatus::NotApplicable, "feasible set S is empty, so the AVE has no solution");
        if (sol.status == LpStatus::Unbounded) {
            out.ray = sol.ray;
            return mon.fail(SolveStatus::Stalled, "linearized LP is unbounded");
        }
        if (sol.status != LpStatus::Optimal) return mon.fail(SolveStatus::Stalled, "LP pivot limit reached");
        Vector next = sol.x;
        const double change = dot(lp.c, sub(next, x));
        if (mon.record(next, k)) return mon.finish(SolveStatus::MaxIters);
        const bool stationary = std::fabs(change) <= 1e-9 * (1.0 + std::fabs(dot(lp.c, x)));
        if (stationary) {
            if (!adjacency) return mon.fail(SolveStatus::Stalled, "stationary vertex is not a solution");
            const double g0 = detail::concave_merit(p, next);
            const auto adj = detail::adjacent_vertices(lp, next);
            std::optional<Vector> best;
            double gbest = g0;
            for (const auto& v : adj) {
                const double gv = detail::concave_merit(p, v);
                if (gv < gbest - 1e-12 * (1.0 + std::fabs(g0))) {
                    gbest = gv;
                    best = v;
                }
            }
            out.info["adjacency_moves"] = adjacency_moves;
            if (!best) return mon.fail(SolveStatus::Stalled, "no adjacent vertex improves the merit");
            ++adjacency_moves;
            out.info["adjacency_moves"] = adjacency_moves;
            next = *best;
            mon.set_point(next);
            if (mon.converged()) {
                out.status = SolveStatus::Converged;
                return mon.finish(SolveStatus::Converged);
            }
        }
        x = next;
    }
    return mon.finish(SolveStatus::MaxIters);
}

inline SolveOutcome solve_concave_sla(const AveProblem& p, const SolverConfig& cfg = {}) {
    return solve_concave_sla_impl(p, cfg, false);
}

inline SolveOutcome solve_concave_zh(const AveProblem& p, const SolverConfig& cfg = {}) {
    return solve_concave_sla_impl(p, cfg, true);
}

// Alternates (A − D(xᵏ))z = b with the LP over
// Z = {y ≥ x ≥ −y, y ≥ Ax − b}: min −(eᵀA + sgn(zᵏ)ᵀ)x + 2eᵀy.
inline SolveOutcome solve_concave_hybrid(const AveProblem& p, const SolverConfig& cfg = {}, int itmax = 10) {
    detail::IterationMonitor mon(p, cfg, "hybrid");
    auto& out = mon.outcome();
    const std::size_t n = p.n();
    LinearProgram lp;
    lp.c.assign(2 * n, 0.0);
    lp.G = Matrix(3 * n, 2 * n);
    lp.h.assign(3 * n, 0.0);
    lp.equality.assign(3 * n, 0);
    lp.nonneg.assign(2 * n, 0);
    for (std::size_t j = n; j < 2 * n; ++j) lp.nonneg[j] = 1;  // y ≥ |x| ≥ 0 anyway
    for (std::size_t i = 0; i < n; ++i) {
        lp.G(i, n + i) = 1.0;  // y − x ≥ 0
        lp.G(i, i) = -1.0;
        lp.G(n + i, n + i) = 1.0;  // y + x ≥ 0
        lp.G(n + i, i) = 1.0;
        for (std::size_t j = 0; j < n; ++j) lp.G(2 * n + i, j) = -p.A(i, j);  // y − Ax ≥ −b
        lp.G(2 * n + i, n + i) = 1.0;
        lp.h[2 * n + i] = -p.b[i];
    }
    const Vector ate = transpose_times(p.A, ones(n));
    Vector x = cfg.x0 ? *cfg.x0 : detail::zeros(n);
    const int rounds = std::min(itmax + 1, cfg.max_iters);
    int lps = 0;
    for (int k = 1; k <= rounds; ++k) {
        const SignVector sx = sign_diag(x);
        Lu lu(minus_sign_diag(p.A, sx));
        if (lu.singular()) {
            out.sign_certificate = sx;
            return mon.fail(SolveStatus::SingularStep, "A - D(x) is singular");
        }
        const Vector z = lu.solve(p.b);
        ++out.linear_solves;
        mon.set_point(z);
        if (mon.converged()) {
            out.iterations = k;
            out.trace.push_back(out.residual_inf);
            out.status = SolveStatus::Converged;
            out.info["lps"] = lps;
            return mon.finish(SolveStatus::Converged);
        }
        const SignVector sz = sign_diag(z);
        for (std::size_t j = 0; j < n; ++j) {
            lp.c[j] = -(ate[j] + sz[j]);
            lp.c[n + j] = 2.0;
        }
        const auto sol = solve_lp(lp);
        ++lps;
        out.info["lps"] = lps;
        if (sol.status == LpStatus::Unbounded) {
            out.ray = Vector(sol.ray.begin(), sol.ray.begin() + n);
            return mon.fail(SolveStatus::Stalled, "linearized LP is unbounded");
        }
        if (sol.status != LpStatus::Optimal) return mon.fail(SolveStatus::Stalled, std::string("LP status ") + to_string(sol.status));
        const Vector next(sol.x.begin(), sol.x.begin() + n);
        if (mon.record(next, k)) return mon.finish(SolveStatus::MaxIters);
        x = next;
    }
    return mon.finish(SolveStatus::MaxIters);
}

}  // namespace avekit
