#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "avekit/core/linalg.hpp"
#include "avekit/core/problem.hpp"

namespace avekit {

namespace detail {

inline SolveOutcome finish_gave(SolveOutcome out, const GaveProblem& g, double tol) {
    out.residual_inf = all_finite(out.x) ? norm_inf(residual(g, out.x)) : INFINITY;
    out.trace.push_back(out.residual_inf);
    if (residual_ok(out.residual_inf, g.b, tol)) {
        out.status = SolveStatus::Converged;
    } else if (out.status == SolveStatus::Converged || out.status == SolveStatus::NotApplicable) {
        out.status = SolveStatus::Stalled;
        if (out.message.empty()) out.message = "final residual above tolerance";
    }
    return out;
}

}  // namespace detail

// Flips one sign at a time until sᵢxᵢ ≥ 0 for all i, where
// x = (A − B·diag(s))⁻¹b. Aborts with NotRegular when a step is singular
// or the flip counter test log₂(p_k) > n − k fires (k one-based).
inline SolveOutcome solve_sign_accord(const GaveProblem& g, const SolverConfig& cfg = {}) {
    if (!g.square()) throw DimensionError("sign accord needs a square system");
    const std::size_t n = g.n();
    cfg.validate(n);
    SolveOutcome out;
    out.method = "sign-accord";
    Lu la(g.A);
    if (la.singular()) {
        out.status = SolveStatus::NotRegular;
        out.message = "A is singular";
        return out;
    }
    Vector x = la.solve(g.b);
    ++out.linear_solves;
    if (is_zero(g.B)) {
        out.x = x;
        out.info["flips"] = 0;
        return detail::finish_gave(std::move(out), g, cfg.tol);
    }
    SignVector s = sign_diag(x);
    auto step = [&]() -> bool {
        Lu lu(minus_b_sign(g.A, g.B, s));
        if (lu.singular()) return false;
        x = lu.solve(g.b);
        ++out.linear_solves;
        return true;
    };
    auto not_regular = [&](std::string why) {
        out.status = SolveStatus::NotRegular;
        out.message = std::move(why);
        out.sign_certificate = s;
        out.x = x;
        out.residual_inf = all_finite(x) ? norm_inf(residual(g, x)) : INFINITY;
        return out;
    };
    if (!step()) return not_regular("A - B diag(s) is singular");
    std::vector<long long> counter(n, 0);
    int flips = 0;
    while (true) {
        std::size_t k = n;
        for (std::size_t i = 0; i < n; ++i)
            if (s[i] * x[i] < 0.0) {
                k = i;
                break;
            }
        if (k == n) break;
        ++counter[k];
        const double bound = static_cast<double>(n) - static_cast<double>(k + 1);
        if (std::log2(static_cast<double>(counter[k])) > bound) {
            out.info["flips"] = flips;
            return not_regular("flip counter test fired at index " + std::to_string(k));
        }
        if (flips >= cfg.max_iters) {
            out.x = x;
            out.iterations = flips;
            out.status = SolveStatus::MaxIters;
            out.info["flips"] = flips;
            return out;
        }
        s.flip(k);
        ++flips;
        out.iterations = flips;
        if (!step()) {
            out.info["flips"] = flips;
            return not_regular("A - B diag(s) is singular");
        }
    }
    out.x = x;
    out.iterations = flips;
    out.sign_certificate = s;
    out.info["flips"] = flips;
    out.status = SolveStatus::Converged;
    return detail::finish_gave(std::move(out), g, cfg.tol);
}

// Which of the four structural classes admit sign-fixing elimination for
// x − B|x| = b; returns 0 when none holds.
inline int signed_ge_class(const Matrix& b) {
    const std::size_t n = b.rows();
    const double nb = norm_inf(b);
    if (nb < 0.5) return 1;
    if (nb <= 0.5) {
        // Irreducible iff the nonzero pattern graph is strongly connected.
        auto reach_all = [&](bool transpose) {
            std::vector<char> seen(n, 0);
            std::vector<std::size_t> stack{0};
            seen[0] = 1;
            while (!stack.empty()) {
                const std::size_t u = stack.back();
                stack.pop_back();
                for (std::size_t v = 0; v < n; ++v) {
                    const double e = transpose ? b(v, u) : b(u, v);
                    if (u != v && e != 0.0 && !seen[v]) {
                        seen[v] = 1;
                        stack.push_back(v);
                    }
                }
            }
            for (char c : seen)
                if (!c) return false;
            return true;
        };
        if (n >= 1 && (n == 1 ? b(0, 0) != 0.0 : reach_all(false) && reach_all(true))) return 2;
    }
    if (nb <= 2.0 / 3.0) {
        bool dominant = true;
        for (std::size_t i = 0; i < n && dominant; ++i) {
            double off = 0.0;
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) off += std::fabs(b(i, j));
            dominant = std::fabs(b(i, i)) > off;
        }
        if (dominant) return 3;
    }
    if (n >= 2 && nb < 1.0) {
        bool ok = true;
        for (std::size_t i = 0; i < n && ok; ++i)
            for (std::size_t j = 0; j < n && ok; ++j) {
                const std::size_t d = i > j ? i - j : j - i;
                if (d > 1 && b(i, j) != 0.0) ok = false;
                if (std::fabs(b(i, j)) != std::fabs(b(j, i))) ok = false;
            }
        if (ok) return 4;
    }
    return 0;
}

// Solves x − B|x| = b by fixing sgn(x_i) = sgn(b_i) at i = argmax|b_i|
// and eliminating x_i, then recursing on the reduced system.
inline SolveOutcome solve_signed_ge(const Matrix& bmat, const Vector& rhs, const SolverConfig& cfg = {}, bool force = false) {
    const std::size_t n = rhs.size();
    if (!bmat.square() || bmat.rows() != n) throw DimensionError("B must be n x n");
    const GaveProblem g(Matrix::identity(n), bmat, rhs);
    cfg.validate(n);
    SolveOutcome out;
    out.method = "signed-ge";
    const int cls = signed_ge_class(bmat);
    out.info["class"] = cls;
    if (cls == 0 && !force) {
        out.status = SolveStatus::NotApplicable;
        out.message = "no applicability class holds";
        return out;
    }
    struct Step {
        std::size_t i;
        double pivot;
        double rhs;
        std::vector<std::pair<std::size_t, double>> coupling;  // (l, B_il) for l still active
    };
    Matrix b = bmat;
    Vector c = rhs;
    std::vector<char> active(n, 1);
    std::vector<Step> steps;
    std::vector<int> sigma(n, -1);
    for (std::size_t round = 0; round < n; ++round) {
        std::size_t i = n;
        double best = -1.0;
        for (std::size_t j = 0; j < n; ++j)
            if (active[j] && std::fabs(c[j]) > best) {
                best = std::fabs(c[j]);
                i = j;
            }
        const int si = c[i] > 0.0 ? 1 : -1;
        sigma[i] = si;
        const double pivot = 1.0 - b(i, i) * si;
        if (std::fabs(pivot) <= 1e-13) {
            out.status = SolveStatus::SingularStep;
            out.message = "zero pivot in signed elimination";
            return out;
        }
        active[i] = 0;
        Step st{i, pivot, c[i], {}};
        for (std::size_t l = 0; l < n; ++l)
            if (active[l]) st.coupling.emplace_back(l, b(i, l));
        for (std::size_t j = 0; j < n; ++j) {
            if (!active[j]) continue;
            const double f = b(j, i) * si / pivot;
            if (f == 0.0) continue;
            for (std::size_t l = 0; l < n; ++l)
                if (active[l]) b(j, l) += f * b(i, l);
            c[j] += f * c[i];
        }
        steps.push_back(std::move(st));
    }
    Vector x(n, 0.0);
    for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
        double v = it->rhs;
        for (const auto& [l, coef] : it->coupling) v += coef * std::fabs(x[l]);
        x[it->i] = v / it->pivot;
    }
    out.x = x;
    out.iterations = static_cast<int>(n);
    out.sign_certificate = SignVector(sigma);
    out.status = SolveStatus::Converged;
    return detail::finish_gave(std::move(out), g, cfg.tol);
}

// Closed form for x − B|x| = b with B ≥ 0, ρ(B) < 1 and at most one
// negative entry b_k: x = max{Mb, Mb − 2(Mb)_k/(2M_kk − 1)·(M − I)e_k}.
inline SolveOutcome solve_special_closed_form(const Matrix& bmat, const Vector& rhs) {
    const std::size_t n = rhs.size();
    if (!bmat.square() || bmat.rows() != n) throw DimensionError("B must be n x n");
    const GaveProblem g(Matrix::identity(n), bmat, rhs);
    SolveOutcome out;
    out.method = "closed-form";
    if (min_entry(bmat) < 0.0) {
        out.message = "B has a negative entry";
        return out;
    }
    const auto rho = spectral_radius_nonneg(bmat);
    out.info["rho_upper"] = rho.upper;
    if (!(rho.upper < 1.0)) {
        out.message = "rho(B) >= 1";
        return out;
    }
    std::size_t k = n, negatives = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (rhs[i] < 0.0) {
            ++negatives;
            k = i;
        }
    if (negatives > 1) {
        out.message = "more than one negative entry in b";
        return out;
    }
    if (k == n) k = 0;
    Matrix i_minus_b = -bmat;
    for (std::size_t i = 0; i < n; ++i) i_minus_b(i, i) += 1.0;
    const Matrix m = inverse(i_minus_b);
    const Vector mb = m * rhs;
    const double factor = 2.0 * mb[k] / (2.0 * m(k, k) - 1.0);
    Vector x(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double col = m(i, k) - (i == k ? 1.0 : 0.0);
        x[i] = std::max(mb[i], mb[i] - factor * col);
    }
    out.x = x;
    out.linear_solves = 1;
    out.iterations = 1;
    out.status = SolveStatus::Converged;
    return detail::finish_gave(std::move(out), g, 1e-10);
}

}  // namespace avekit
