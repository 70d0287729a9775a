#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "avekit/analysis.hpp"
#include "avekit/core/linalg.hpp"
#include "avekit/core/lp.hpp"
#include "avekit/core/problem.hpp"
#include "avekit/solution_set.hpp"

namespace avekit {

struct EnumerateOptions {
    bool prune = false;
    std::size_t enum_cap = kDefaultEnumCap;
    double sign_tol = 1e-9;
    double dedup_tol = 1e-8;
    double rank_tol = 1e-11;
};

namespace detail {

// Orthant-feasible part of {x0 + N t} with diag(s)x ≥ 0, or nullopt if empty.
inline std::optional<OrthantPiece> affine_piece(const SignVector& s, const Vector& x0, const std::vector<Vector>& dirs,
                                                double sign_tol) {
    const std::size_t n = x0.size();
    const std::size_t k = dirs.size();
    OrthantPiece piece;
    piece.s = s;
    piece.kind = OrthantPiece::Kind::Affine;
    if (k == 1) {
        const Vector& d = dirs[0];
        double lo = -INFINITY, hi = INFINITY;
        for (std::size_t i = 0; i < n; ++i) {
            const double a = s[i] * d[i];
            const double c = s[i] * x0[i];
            // a t + c ≥ −tol
            if (std::fabs(a) <= 1e-14) {
                if (c < -sign_tol) return std::nullopt;
                continue;
            }
            const double t = (-c) / a;
            if (a > 0) lo = std::max(lo, t);
            else hi = std::min(hi, t);
        }
        if (lo > hi + sign_tol) return std::nullopt;
        if (std::isfinite(lo) && std::isfinite(hi) && hi - lo <= sign_tol) {
            piece.kind = OrthantPiece::Kind::Point;
            piece.x = add(x0, scaled(d, 0.5 * (lo + hi)));
            return piece;
        }
        if (std::isfinite(lo)) {
            piece.x = add(x0, scaled(d, lo));
            piece.directions = {d};
            piece.t_lo = 0.0;
            piece.t_hi = std::isfinite(hi) ? hi - lo : INFINITY;
        } else if (std::isfinite(hi)) {
            piece.x = add(x0, scaled(d, hi));
            piece.directions = {scaled(d, -1.0)};
            piece.t_lo = 0.0;
            piece.t_hi = INFINITY;
        } else {
            // Full line: base at the point closest to the origin.
            piece.x = add(x0, scaled(d, -dot(x0, d)));
            piece.directions = {d};
            piece.t_lo = -INFINITY;
            piece.t_hi = INFINITY;
        }
        for (double& v : piece.x)
            if (std::fabs(v) < 1e-15) v = 0.0;
        return piece;
    }
    // Higher dimension: find a feasible base point by LP over t.
    LinearProgram lp;
    lp.c.assign(k, 0.0);
    lp.G = Matrix(0, k);
    for (std::size_t i = 0; i < n; ++i) {
        Vector row(k);
        for (std::size_t j = 0; j < k; ++j) row[j] = s[i] * dirs[j][i];
        lp.add_row(row, -s[i] * x0[i] - sign_tol);
    }
    const auto sol = solve_lp(lp);
    if (sol.status != LpStatus::Optimal) return std::nullopt;
    piece.x = x0;
    for (std::size_t j = 0; j < k; ++j)
        for (std::size_t i = 0; i < n; ++i) piece.x[i] += sol.x[j] * dirs[j][i];
    piece.directions = dirs;
    piece.t_lo = -INFINITY;
    piece.t_hi = INFINITY;
    return piece;
}

// Sign restrictions implied by max/min x_i over the bounding polyhedron.
// Entry +1: x_i > 0 on every solution, −1: x_i < 0, 0: undetermined.
// Returns nullopt when the polyhedron is empty.
inline std::optional<std::vector<int>> forced_signs(const AveProblem& p, const SolutionBounds& sb, double tol) {
    const std::size_t n = p.n();
    std::vector<int> forced(n, 0);
    if (sb.empty) return std::nullopt;
    LinearProgram lp = sb.polyhedron(p);
    for (std::size_t i = 0; i < n; ++i) {
        lp.c.assign(n, 0.0);
        lp.c[i] = 1.0;
        const auto lo = solve_lp(lp);
        if (lo.status == LpStatus::Infeasible) return std::nullopt;
        if (lo.status == LpStatus::Optimal && lo.x[i] > tol) {
            forced[i] = 1;
            continue;
        }
        lp.c[i] = -1.0;
        const auto hi = solve_lp(lp);
        if (hi.status == LpStatus::Optimal && hi.x[i] < -tol) forced[i] = -1;
    }
    return forced;
}

}  // namespace detail

// All solutions of Ax − B|x| = b, orthant by orthant in Gray-code order.
inline SolutionSet enumerate_solutions(const GaveProblem& g, const EnumerateOptions& opt = {},
                                       const std::optional<std::vector<int>>& forced = std::nullopt) {
    if (!g.square()) throw DimensionError("enumeration needs a square system");
    const std::size_t n = g.n();
    check_enum_cap(n, opt.enum_cap);
    SolutionSet set;
    std::vector<OrthantPiece> points, affine;
    const std::uint64_t count = std::uint64_t{1} << n;
    for (std::uint64_t k = 0; k < count; ++k) {
        const SignVector s = SignVector::gray(n, k);
        if (forced) {
            bool skip = false;
            for (std::size_t i = 0; i < n && !skip; ++i) skip = (*forced)[i] != 0 && (*forced)[i] != s[i];
            if (skip) {
                ++set.orthants_pruned;
                continue;
            }
        }
        ++set.orthants_visited;
        const Matrix m = minus_b_sign(g.A, g.B, s);
        Lu lu(m);
        if (!lu.singular()) {
            const Vector x = lu.solve(g.b);
            bool ok = true;
            for (std::size_t i = 0; i < n && ok; ++i) ok = s[i] * x[i] >= -opt.sign_tol;
            if (!ok) continue;
            OrthantPiece piece;
            piece.s = s;
            piece.x = x;
            points.push_back(std::move(piece));
            continue;
        }
        const auto rr = rank_revealing_solve(m, g.b, opt.rank_tol);
        if (!rr.consistent) continue;
        if (rr.nullspace.empty()) {
            bool ok = true;
            for (std::size_t i = 0; i < n && ok; ++i) ok = s[i] * rr.particular[i] >= -opt.sign_tol;
            if (ok) {
                OrthantPiece piece;
                piece.s = s;
                piece.x = rr.particular;
                points.push_back(std::move(piece));
            }
            continue;
        }
        auto piece = detail::affine_piece(s, rr.particular, rr.nullspace, opt.sign_tol);
        if (!piece) continue;
        if (piece->kind == OrthantPiece::Kind::Point) points.push_back(std::move(*piece));
        else affine.push_back(std::move(*piece));
    }
    // Boundary points can be found from several orthants or lie on an affine piece.
    for (auto& pt : points) {
        bool dup = false;
        for (const auto& q : set.pieces) dup = dup || dist_inf(q.x, pt.x) < opt.dedup_tol;
        for (const auto& a : affine) dup = dup || a.contains(pt.x, opt.dedup_tol);
        if (!dup) set.pieces.push_back(std::move(pt));
    }
    for (auto& a : affine) set.pieces.push_back(std::move(a));
    set.complete = true;
    return set;
}

inline SolutionSet enumerate_solutions(const AveProblem& p, const EnumerateOptions& opt = {}) {
    const GaveProblem g = GaveProblem::from_ave(p);
    if (!opt.prune) return enumerate_solutions(g, opt);
    check_enum_cap(p.n(), opt.enum_cap);
    const auto sb = try_solution_bounds(p);
    if (!sb) return enumerate_solutions(g, opt);
    const auto forced = detail::forced_signs(p, *sb, opt.sign_tol);
    if (!forced) {
        SolutionSet empty;
        empty.orthants_pruned = std::size_t{1} << p.n();
        return empty;
    }
    return enumerate_solutions(g, opt, forced);
}

inline SolutionSet enumerate_solutions(const AveProblem& p, bool prune, std::size_t enum_cap = kDefaultEnumCap) {
    EnumerateOptions opt;
    opt.prune = prune;
    opt.enum_cap = enum_cap;
    return enumerate_solutions(p, opt);
}

}  // namespace avekit
