#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "avekit/core/matrix.hpp"
#include "avekit/core/problem.hpp"

namespace avekit {

// Solutions of the AVE inside one orthant. Points are isolated solutions;
// affine pieces are {base + Σ t_k d_k} ∩ {diag(s)x ≥ 0} with orthonormal
// directions. One-dimensional pieces are normalized so that the feasible
// parameter range is [0, t_hi] (ray: t_hi = ∞) unless the piece is a full
// line, in which case t_lo = −∞.
struct OrthantPiece {
    enum class Kind { Point, Affine };

    SignVector s;
    Kind kind = Kind::Point;
    Vector x;  // the point, or a feasible base point of the affine piece
    std::vector<Vector> directions;
    double t_lo = 0.0;
    double t_hi = 0.0;

    std::size_t dimension() const noexcept { return kind == Kind::Point ? 0 : directions.size(); }
    bool is_ray() const noexcept {
        return dimension() == 1 && t_lo == 0.0 && std::isinf(t_hi);
    }
    bool is_segment() const noexcept { return dimension() == 1 && std::isfinite(t_lo) && std::isfinite(t_hi); }
    bool is_line() const noexcept { return dimension() == 1 && std::isinf(t_lo); }

    bool contains(const Vector& y, double tol = 1e-7) const {
        if (kind == Kind::Point) return dist_inf(x, y) <= tol;
        for (std::size_t i = 0; i < y.size(); ++i)
            if (s[i] * y[i] < -tol) return false;
        Vector d = sub(y, x);
        for (const auto& dir : directions) {
            const double c = dot(d, dir);
            for (std::size_t i = 0; i < d.size(); ++i) d[i] -= c * dir[i];
        }
        return norm_inf(d) <= tol * (1.0 + norm_inf(y));
    }
};

struct SolutionSet {
    std::vector<OrthantPiece> pieces;
    bool complete = true;
    std::size_t orthants_pruned = 0;
    std::size_t orthants_visited = 0;

    bool empty() const noexcept { return pieces.empty(); }
    std::vector<Vector> points() const {
        std::vector<Vector> out;
        for (const auto& p : pieces)
            if (p.kind == OrthantPiece::Kind::Point) out.push_back(p.x);
        return out;
    }
    std::size_t count_points() const { return points().size(); }
    std::size_t count_rays() const {
        std::size_t k = 0;
        for (const auto& p : pieces) k += p.is_ray();
        return k;
    }
    std::size_t count_affine() const { return pieces.size() - count_points(); }
    bool contains(const Vector& y, double tol = 1e-7) const {
        for (const auto& p : pieces)
            if (p.contains(y, tol)) return true;
        return false;
    }
    std::string summary() const {
        std::size_t segments = 0, lines = 0, higher = 0;
        for (const auto& p : pieces) {
            if (p.is_segment()) ++segments;
            if (p.is_line()) ++lines;
            if (p.dimension() >= 2) ++higher;
        }
        auto plural = [](std::size_t k, const char* word) {
            return std::to_string(k) + " " + word + (k == 1 ? "" : "s");
        };
        std::string out = plural(count_points(), "point") + ", " + plural(count_rays(), "ray");
        if (segments) out += ", " + plural(segments, "segment");
        if (lines) out += ", " + plural(lines, "line");
        if (higher) out += ", " + plural(higher, "higher-dimensional piece");
        return out;
    }
};

}  // namespace avekit
