#pragma once

#include <cmath>
#include <string>

#include "avekit/solvers/common.hpp"

namespace avekit {

namespace detail {

// Root of c·x − |x| = s for c > 1.
inline double scalar_abs_root(double c, double s) { return s >= 0.0 ? s / (c - 1.0) : s / (c + 1.0); }

inline bool diagonal_above_one(const Matrix& a) {
    for (std::size_t i = 0; i < a.rows(); ++i)
        if (!(a(i, i) > 1.0)) return false;
    return true;
}

}  // namespace detail

// One outer iteration is one forward sweep of (D − E)x⁺ − |x⁺| = Fx + b.
inline SolveOutcome solve_ggs(const AveProblem& p, const SolverConfig& cfg = {}) {
    detail::IterationMonitor mon(p, cfg, "ggs");
    const std::size_t n = p.n();
    if (!detail::diagonal_above_one(p.A)) return mon.fail(SolveStatus::NotApplicable, "some diagonal entry of A is not greater than one");
    Vector x = cfg.x0 ? *cfg.x0 : detail::zeros(n);
    for (int k = 1; k <= cfg.max_iters; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            double s = p.b[i];
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) s -= p.A(i, j) * x[j];
            x[i] = detail::scalar_abs_root(p.A(i, i), s);
        }
        if (mon.record(x, k)) break;
    }
    return mon.finish(SolveStatus::MaxIters);
}

// Gauss–Seidel on the system preconditioned by P_β = D + βF, where
// A = D − E − F. Per sweep:
// D⁻¹(D̃ − Ẽ)x⁺ − |x⁺| = βD⁻¹F|x| + D⁻¹F̃x + D⁻¹P_β b with P_βA = D̃ − Ẽ − F̃.
inline SolveOutcome solve_pggs(const AveProblem& p, double beta, const SolverConfig& cfg = {}) {
    detail::IterationMonitor mon(p, cfg, "pggs");
    auto& out = mon.outcome();
    const std::size_t n = p.n();
    const Matrix& a = p.A;
    if (!detail::diagonal_above_one(a)) return mon.fail(SolveStatus::NotApplicable, "some diagonal entry of A is not greater than one");
    bool z_matrix = true;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j && a(i, j) > 0.0) z_matrix = false;
    if (!z_matrix) out.message = "warning: A is not a Z-matrix";
    Matrix f(n, n);  // F = −(strict upper part of A)
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) f(i, j) = -a(i, j);
    Matrix pb = beta * f;
    for (std::size_t i = 0; i < n; ++i) pb(i, i) = a(i, i);
    const Matrix pa = pb * a;
    const Vector pbb = pb * p.b;
    Vector c(n);
    for (std::size_t i = 0; i < n; ++i) {
        c[i] = pa(i, i) / a(i, i);
        if (!(c[i] > 1.0))
            return mon.fail(SolveStatus::NotApplicable, "preconditioned diagonal ratio is not greater than one in row " + std::to_string(i));
    }
    Vector x = cfg.x0 ? *cfg.x0 : detail::zeros(n);
    for (int k = 1; k <= cfg.max_iters; ++k) {
        const Vector fabs_x = f * vabs(x);
        Vector rhs(n);
        for (std::size_t i = 0; i < n; ++i) {
            double ftx = 0.0;  // F̃x = −(strict upper part of P_βA)·x
            for (std::size_t j = i + 1; j < n; ++j) ftx -= pa(i, j) * x[j];
            rhs[i] = (beta * fabs_x[i] + ftx + pbb[i]) / a(i, i);
        }
        Vector next(n);
        for (std::size_t i = 0; i < n; ++i) {
            double s = rhs[i];
            for (std::size_t j = 0; j < i; ++j) s -= pa(i, j) * next[j] / a(i, i);
            next[i] = detail::scalar_abs_root(c[i], s);
        }
        x = next;
        if (mon.record(x, k)) break;
    }
    return mon.finish(SolveStatus::MaxIters);
}

}  // namespace avekit
