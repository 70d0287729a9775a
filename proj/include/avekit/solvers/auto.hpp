#pragma once

#include <string>

#include "avekit/analysis.hpp"
#include "avekit/solvers/enumerate.hpp"
#include "avekit/solvers/newton.hpp"
#include "avekit/solvers/picard.hpp"

namespace avekit {

// Dispatch on cheap hints: σ_min(A) > 1 selects Newton, ρ(|A⁻¹|) < 1
// selects Picard. Anything else, or a failed dispatch, falls back to
// enumeration when n ≤ param "enum_cap".
inline SolveOutcome solve_auto(const AveProblem& p, const SolverConfig& cfg = {}) {
    cfg.validate(p.n());
    const std::size_t n = p.n();
    const auto cap = static_cast<std::size_t>(cfg.param("enum_cap", static_cast<double>(kDefaultEnumCap)));
    std::string hint = "none";
    SolveOutcome out;
    bool tried = false;
    if (detail::sigma_min_gt1(p.A).holds()) {
        hint = "sigma_min_gt_1";
        out = solve_newton(p, cfg);
        tried = true;
    } else {
        Lu lu(p.A);
        if (!lu.singular() && detail::rho_abs_lt1(lu.inverse(), "rho(|A^-1|)").holds()) {
            hint = "rho_abs_inverse_lt_1";
            out = solve_picard(p, cfg);
            tried = true;
        }
    }
    if (tried && out.converged()) {
        out.message = "dispatched on " + hint;
        out.method = "auto:" + out.method;
        return out;
    }
    if (n <= cap) {
        const SolutionSet set = enumerate_solutions(p, true, cap);
        SolveOutcome e;
        e.method = "auto:enumerate";
        e.info["orthants_visited"] = static_cast<double>(set.orthants_visited);
        e.info["pieces"] = static_cast<double>(set.pieces.size());
        if (!set.empty()) {
            e.x = set.pieces.front().x;
            e.residual_inf = norm_inf(residual(p, e.x));
            e.iterations = 1;
            e.status = residual_ok(e.residual_inf, p.b, cfg.tol) ? SolveStatus::Converged : SolveStatus::Stalled;
            e.message = "enumeration fallback";
            return e;
        }
        e.status = SolveStatus::NotApplicable;
        e.message = "no solution: complete orthant enumeration is empty";
        const AnalysisReport rep = check_unsolvable(p);
        for (const auto& [name, v] : rep.verdicts)
            if (v.holds()) {
                e.message = "no solution: certificate " + name;
                if (!v.cert.vec.empty()) e.ray = v.cert.vec;
                break;
            }
        return e;
    }
    if (tried) return out;
    out = solve_newton(p, cfg);
    out.method = "auto:" + out.method;
    out.message = "no hint holds; unguarded Newton";
    return out;
}

}  // namespace avekit
