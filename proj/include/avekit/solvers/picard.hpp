#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

#include "avekit/solvers/common.hpp"

namespace avekit {

// x⁺ = (A + Ω)⁻¹(Ωx + |x| + b); Ω absent means plain Picard.
inline SolveOutcome solve_picard_omega(const AveProblem& p, const std::optional<Matrix>& omega, const SolverConfig& cfg = {}) {
    detail::IterationMonitor mon(p, cfg, omega ? "picard-omega" : "picard");
    auto& out = mon.outcome();
    const std::size_t n = p.n();
    if (omega && (omega->rows() != n || omega->cols() != n)) throw DimensionError("omega must be n x n");
    Matrix m = p.A;
    if (omega) m += *omega;
    Lu lu(m);
    if (lu.singular()) return mon.fail(SolveStatus::SingularStep, omega ? "A + Omega is singular" : "A is singular");
    Vector x;
    if (cfg.x0) {
        x = *cfg.x0;
    } else {
        x = lu.solve(p.b);
        ++out.linear_solves;
    }
    for (int k = 1; k <= cfg.max_iters; ++k) {
        Vector rhs(n);
        if (omega) {
            const Vector ox = *omega * x;
            for (std::size_t i = 0; i < n; ++i) rhs[i] = ox[i] + std::fabs(x[i]) + p.b[i];
        } else {
            for (std::size_t i = 0; i < n; ++i) rhs[i] = std::fabs(x[i]) + p.b[i];
        }
        x = lu.solve(rhs);
        ++out.linear_solves;
        if (mon.record(x, k)) break;
    }
    return mon.finish(SolveStatus::MaxIters);
}

inline SolveOutcome solve_picard(const AveProblem& p, const SolverConfig& cfg = {}) {
    return solve_picard_omega(p, std::nullopt, cfg);
}

// Picard outer loop with ℓ_k inner HSS half-step pairs per outer step.
inline SolveOutcome solve_picard_hss(const AveProblem& p, double alpha, const SolverConfig& cfg = {}) {
    if (!(alpha > 0.0)) throw std::invalid_argument("HSS parameter alpha must be positive");
    detail::IterationMonitor mon(p, cfg, "picard-hss");
    auto& out = mon.outcome();
    const std::size_t n = p.n();
    const Matrix at = p.A.transpose();
    const Matrix h = 0.5 * (p.A + at);
    const Matrix s = 0.5 * (p.A - at);
    const auto eig = jacobi_eigen(h);
    double lam_min = INFINITY;
    for (double v : eig.values) lam_min = std::min(lam_min, v);
    out.info["lambda_min_sym"] = lam_min;
    if (!(lam_min > 1e-12)) return mon.fail(SolveStatus::NotApplicable, "A is not positive definite");
    const Matrix ai = alpha * Matrix::identity(n);
    Lu lu_h(ai + h), lu_s(ai + s);
    if (lu_h.singular() || lu_s.singular()) return mon.fail(SolveStatus::SingularStep, "alpha I + H or alpha I + S is singular");
    const Matrix a_minus_s = ai - s;
    const Matrix a_minus_h = ai - h;
    Vector x = cfg.x0 ? *cfg.x0 : detail::zeros(n);
    for (int k = 1; k <= cfg.max_iters; ++k) {
        const std::size_t idx = static_cast<std::size_t>(k - 1);
        const int ell = cfg.inner_iters.empty()
                            ? static_cast<int>(cfg.param("ell", 10))
                            : cfg.inner_iters[std::min(idx, cfg.inner_iters.size() - 1)];
        if (ell < 1) throw std::invalid_argument("inner iteration count must be positive");
        const Vector fixed = add(vabs(x), p.b);
        Vector inner = x;
        for (int l = 0; l < ell; ++l) {
            const Vector half = lu_h.solve(add(a_minus_s * inner, fixed));
            inner = lu_s.solve(add(a_minus_h * half, fixed));
            out.linear_solves += 2;
        }
        x = inner;
        if (mon.record(x, k)) break;
    }
    return mon.finish(SolveStatus::MaxIters);
}

// x⁺ = (1 − ω)x + ωA⁻¹(y + b),  y⁺ = (1 − ω)y + ω|x⁺|.
inline SolveOutcome solve_sor_like(const AveProblem& p, double omega, const SolverConfig& cfg = {}) {
    if (!(omega > 0.0)) throw std::invalid_argument("SOR-like parameter omega must be positive");
    detail::IterationMonitor mon(p, cfg, "sor");
    auto& out = mon.outcome();
    const std::size_t n = p.n();
    Lu lu(p.A);
    if (lu.singular()) return mon.fail(SolveStatus::SingularStep, "A is singular");
    Vector x = cfg.x0 ? *cfg.x0 : detail::zeros(n);
    Vector y = vabs(x);
    std::vector<double> composite;
    for (int k = 1; k <= cfg.max_iters; ++k) {
        const Vector ainv = lu.solve(add(y, p.b));
        ++out.linear_solves;
        for (std::size_t i = 0; i < n; ++i) x[i] = (1.0 - omega) * x[i] + omega * ainv[i];
        for (std::size_t i = 0; i < n; ++i) y[i] = (1.0 - omega) * y[i] + omega * std::fabs(x[i]);
        if (cfg.reference) {
            const Vector& xs = *cfg.reference;
            double ex = 0.0, ey = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                ex += (x[i] - xs[i]) * (x[i] - xs[i]);
                ey += (y[i] - std::fabs(xs[i])) * (y[i] - std::fabs(xs[i]));
            }
            composite.push_back(std::sqrt(ex + ey / (omega * omega)));
        }
        const bool stop = mon.record(x, k);
        if (cfg.reference) out.error_trace = composite;
        if (stop) break;
    }
    return mon.finish(SolveStatus::MaxIters);
}

struct SplittingSpec {
    enum class Scheme { Explicit, Jacobi, GaussSeidel, Sor };
    Scheme scheme = Scheme::Explicit;
    Matrix M;
    Matrix N;
    double relax = 1.0;  // SOR relaxation parameter
    std::optional<Matrix> omega;

    static SplittingSpec explicit_split(Matrix m, Matrix nmat) {
        SplittingSpec s;
        s.M = std::move(m);
        s.N = std::move(nmat);
        return s;
    }
    static SplittingSpec jacobi() { return {Scheme::Jacobi, {}, {}, 1.0, std::nullopt}; }
    static SplittingSpec gauss_seidel() { return {Scheme::GaussSeidel, {}, {}, 1.0, std::nullopt}; }
    static SplittingSpec sor(double alpha) { return {Scheme::Sor, {}, {}, alpha, std::nullopt}; }

    // Materializes (M, N) with A = M − N.
    std::pair<Matrix, Matrix> resolve(const Matrix& a) const {
        const std::size_t n = a.rows();
        if (scheme == Scheme::Explicit) {
            if (M.rows() != n || M.cols() != n || N.rows() != n || N.cols() != n) throw DimensionError("splitting shapes differ from A");
            if (max_abs_diff(M - N, a) > 1e-12 * (1.0 + norm_inf(a))) throw Error("splitting does not reproduce A = M - N");
            return {M, N};
        }
        for (std::size_t i = 0; i < n; ++i)
            if (a(i, i) == 0.0) throw Error("splitting preset needs a nonzero diagonal");
        Matrix m(n, n);
        if (scheme == Scheme::Sor && !(relax > 0.0)) throw std::invalid_argument("SOR relaxation must be positive");
        for (std::size_t i = 0; i < n; ++i) {
            switch (scheme) {
                case Scheme::Jacobi: m(i, i) = a(i, i); break;
                case Scheme::GaussSeidel:
                    for (std::size_t j = 0; j <= i; ++j) m(i, j) = a(i, j);
                    break;
                case Scheme::Sor:
                    m(i, i) = a(i, i) / relax;
                    for (std::size_t j = 0; j < i; ++j) m(i, j) = a(i, j);
                    break;
                case Scheme::Explicit: break;
            }
        }
        return {m, m - a};
    }
};

// Generalized splitting for Ax − B|x| = b:
// x⁺ = (M + Ω)⁻¹((N + Ω)x + B|x| + b).
inline SolveOutcome solve_newton_splitting(const GaveProblem& g, const SplittingSpec& split, const SolverConfig& cfg = {}) {
    if (!g.square()) throw DimensionError("splitting needs a square system");
    const std::size_t n = g.n();
    cfg.validate(n);
    const auto [m, nmat] = split.resolve(g.A);
    Matrix mo = m, no = nmat;
    const std::optional<Matrix>& omega = split.omega ? split.omega : cfg.omega_matrix;
    if (omega) {
        if (omega->rows() != n || omega->cols() != n) throw DimensionError("omega must be n x n");
        mo += *omega;
        no += *omega;
    }
    SolveOutcome out;
    out.method = "splitting";
    Lu lu(mo);
    if (lu.singular()) {
        out.status = SolveStatus::SingularStep;
        out.message = "M + Omega is singular";
        return out;
    }
    // Convergence radius ρ(|(M+Ω)⁻¹(N+Ω)| + |(M+Ω)⁻¹B|), logged only.
    {
        const Matrix inv = lu.inverse();
        const Matrix t = mabs(inv * no) + mabs(inv * g.B);
        const auto r = spectral_radius_nonneg(t);
        out.info["convergence_radius"] = r.upper;
    }
    Vector x;
    if (cfg.x0) {
        x = *cfg.x0;
    } else {
        x = lu.solve(g.b);
        ++out.linear_solves;
    }
    const double bnorm = norm_inf(g.b);
    for (int k = 1; k <= cfg.max_iters; ++k) {
        const Vector nx = no * x;
        const Vector bx = g.B * vabs(x);
        Vector rhs(n);
        for (std::size_t i = 0; i < n; ++i) rhs[i] = nx[i] + bx[i] + g.b[i];
        x = lu.solve(rhs);
        ++out.linear_solves;
        out.iterations = k;
        out.x = x;
        out.residual_inf = all_finite(x) ? norm_inf(residual(g, x)) : INFINITY;
        out.trace.push_back(out.residual_inf);
        if (cfg.trace) out.iterates.push_back(x);
        if (cfg.reference) out.error_trace.push_back(dist_inf(x, *cfg.reference));
        if (residual_ok(out.residual_inf, g.b, cfg.tol)) {
            out.status = SolveStatus::Converged;
            return out;
        }
        if (!std::isfinite(out.residual_inf) || out.residual_inf > detail::kDivergenceFactor * (1.0 + bnorm)) {
            out.status = SolveStatus::Diverged;
            return out;
        }
    }
    out.status = SolveStatus::MaxIters;
    return out;
}

inline SolveOutcome solve_newton_splitting(const AveProblem& p, const SplittingSpec& split, const SolverConfig& cfg = {}) {
    return solve_newton_splitting(GaveProblem::from_ave(p), split, cfg);
}

}  // namespace avekit
