#pragma once

#include <cmath>
#include <set>
#include <stdexcept>
#include <vector>

#include "avekit/solvers/common.hpp"

namespace avekit {

namespace detail {

// x⁺ = (A − θD(x))⁻¹(b + (1 − θ)|x|). θ = 1 is the generalized Newton step.
inline SolveOutcome relaxed_newton_core(const AveProblem& p, double theta, const SolverConfig& cfg, std::string method) {
    if (!(theta >= 0.0)) throw std::invalid_argument("relaxation parameter must be nonnegative");
    IterationMonitor mon(p, cfg, std::move(method));
    auto& out = mon.outcome();
    const std::size_t n = p.n();
    Vector x = cfg.x0 ? *cfg.x0 : zeros(n);
    std::set<std::vector<int>> seen;
    for (int k = 1; k <= cfg.max_iters; ++k) {
        const SignVector s = sign_diag(x);
        Matrix m = p.A;
        for (std::size_t i = 0; i < n; ++i) m(i, i) -= theta * s[i];
        Vector rhs = p.b;
        if (theta != 1.0)
            for (std::size_t i = 0; i < n; ++i) rhs[i] += (1.0 - theta) * std::fabs(x[i]);
        Lu lu(m);
        if (lu.singular()) {
            out.sign_certificate = s;
            return mon.fail(SolveStatus::SingularStep, "A - theta D(x) is singular at iteration " + std::to_string(k));
        }
        const Vector next = lu.solve(rhs);
        ++out.linear_solves;
        if (mon.record(next, k)) return mon.finish(SolveStatus::MaxIters);
        if (theta == 1.0) {
            // A repeated sign pattern means the same linear system recurs.
            if (!seen.insert(s.values()).second) {
                out.sign_certificate = s;
                return mon.fail(SolveStatus::Stalled, "sign pattern cycle");
            }
            if (next == x) return mon.fail(SolveStatus::Stalled, "fixed point without residual convergence");
        }
        x = next;
    }
    return mon.finish(SolveStatus::MaxIters);
}

}  // namespace detail

inline SolveOutcome solve_newton(const AveProblem& p, const SolverConfig& cfg = {}) {
    return detail::relaxed_newton_core(p, 1.0, cfg, "newton");
}

inline SolveOutcome solve_newton_relaxed(const AveProblem& p, double theta, const SolverConfig& cfg = {}) {
    return detail::relaxed_newton_core(p, theta, cfg, "newton-relaxed");
}

// x⁺ = (A + I − D(x))⁻¹(x + b)
inline SolveOutcome solve_newton_modified(const AveProblem& p, const SolverConfig& cfg = {}) {
    detail::IterationMonitor mon(p, cfg, "newton-mod");
    auto& out = mon.outcome();
    const std::size_t n = p.n();
    Vector x = cfg.x0 ? *cfg.x0 : detail::zeros(n);
    for (int k = 1; k <= cfg.max_iters; ++k) {
        const SignVector s = sign_diag(x);
        Matrix m = p.A;
        for (std::size_t i = 0; i < n; ++i) m(i, i) += 1.0 - s[i];
        Lu lu(m);
        if (lu.singular()) {
            out.sign_certificate = s;
            return mon.fail(SolveStatus::SingularStep, "A + I - D(x) is singular at iteration " + std::to_string(k));
        }
        x = lu.solve(add(x, p.b));
        ++out.linear_solves;
        if (mon.record(x, k)) break;
    }
    return mon.finish(SolveStatus::MaxIters);
}

// Newton steps solved inexactly by Gauss–Seidel sweeps until
// ‖(A − D(x))x⁺ − b‖∞ ≤ θ_res ‖Ax − |x| − b‖∞.
inline SolveOutcome solve_newton_inexact(const AveProblem& p, double theta_res, const SolverConfig& cfg = {}) {
    if (!(theta_res >= 0.0 && theta_res < 1.0)) throw std::invalid_argument("inexact tolerance must lie in [0, 1)");
    detail::IterationMonitor mon(p, cfg, "newton-inexact");
    auto& out = mon.outcome();
    const std::size_t n = p.n();
    Vector x = cfg.x0 ? *cfg.x0 : detail::zeros(n);
    const int sweep_cap = static_cast<int>(50 * n);
    int total_sweeps = 0, fallbacks = 0;
    for (int k = 1; k <= cfg.max_iters; ++k) {
        const SignVector s = sign_diag(x);
        const Matrix m = minus_sign_diag(p.A, s);
        const double target = theta_res * norm_inf(residual(p, x));
        bool diag_ok = true;
        for (std::size_t i = 0; i < n; ++i) diag_ok = diag_ok && m(i, i) != 0.0;
        Vector y = x;
        bool done = false;
        if (theta_res > 0.0 && diag_ok) {
            auto inner_res = [&](const Vector& v) { return norm_inf(sub(m * v, p.b)); };
            done = inner_res(y) <= target;
            for (int sweep = 0; sweep < sweep_cap && !done; ++sweep) {
                for (std::size_t i = 0; i < n; ++i) {
                    double acc = p.b[i];
                    for (std::size_t j = 0; j < n; ++j)
                        if (j != i) acc -= m(i, j) * y[j];
                    y[i] = acc / m(i, i);
                }
                ++total_sweeps;
                if (!all_finite(y)) break;
                done = inner_res(y) <= target;
            }
        }
        if (!done) {
            Lu lu(m);
            if (lu.singular()) {
                out.sign_certificate = s;
                return mon.fail(SolveStatus::SingularStep, "A - D(x) is singular at iteration " + std::to_string(k));
            }
            y = lu.solve(p.b);
            ++out.linear_solves;
            ++fallbacks;
        }
        x = y;
        out.info["inner_sweeps"] = total_sweeps;
        out.info["direct_fallbacks"] = fallbacks;
        if (mon.record(x, k)) break;
    }
    return mon.finish(SolveStatus::MaxIters);
}

}  // namespace avekit
