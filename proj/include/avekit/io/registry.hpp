#pragma once

#include <string>
#include <vector>

#include "avekit/io/bundle.hpp"
#include "avekit/solvers.hpp"

namespace avekit::io {

// Method names accepted by `avekit solve --method` and bench suites, with
// the --param keys each one reads.
struct MethodInfo {
    const char* name;
    const char* params;
};

inline const std::vector<MethodInfo>& methods() {
    static const std::vector<MethodInfo> table{
        {"newton", ""},
        {"newton-mod", ""},
        {"newton-relaxed", "theta=0.5"},
        {"newton-inexact", "theta_res=0.1"},
        {"picard", ""},
        {"picard-omega", "omega (scalar, Omega = omega*I)"},
        {"picard-hss", "alpha=1, ell=10"},
        {"sor", "omega=1"},
        {"splitting", "scheme=0 (0 jacobi, 1 gauss-seidel, 2 sor), relax=1, omega"},
        {"ggs", ""},
        {"pggs", "beta=0.5"},
        {"sla", ""},
        {"hybrid", "itmax=10"},
        {"zh", ""},
        {"sign-accord", ""},
        {"signed-ge", "force=0"},
        {"closed-form", ""},
        {"auto", "enum_cap=20"},
    };
    return table;
}

inline bool is_method(const std::string& name) {
    for (const auto& m : methods())
        if (name == m.name) return true;
    return false;
}

namespace detail {

inline SolveOutcome not_applicable(const std::string& method, std::string why) {
    SolveOutcome out;
    out.method = method;
    out.status = SolveStatus::NotApplicable;
    out.message = std::move(why);
    return out;
}

// Rewrites Ax − B|x| = b as x − (A⁻¹B)|x| = A⁻¹b and maps the outcome
// back onto the original residual.
template <class F>
SolveOutcome via_unit_form(const GaveProblem& g, const SolverConfig& cfg, const std::string& method, F&& solve) {
    const std::size_t n = g.n();
    Matrix bmat = g.B;
    Vector rhs = g.b;
    if (!(g.A == Matrix::identity(n))) {
        Lu lu(g.A);
        if (lu.singular()) return not_applicable(method, "A is singular");
        const Matrix inv = lu.inverse();
        bmat = inv * g.B;
        rhs = inv * g.b;
    }
    SolveOutcome out = solve(bmat, rhs);
    out.method = method;
    if (!out.x.empty() && all_finite(out.x)) {
        out.residual_inf = norm_inf(residual(g, out.x));
        if (out.status == SolveStatus::Converged && !residual_ok(out.residual_inf, g.b, cfg.tol)) {
            out.status = SolveStatus::Stalled;
            out.message = "unit-form solution misses the original residual test";
        }
    }
    return out;
}

inline SplittingSpec splitting_from_params(const SolverConfig& cfg, std::size_t n) {
    const int scheme = static_cast<int>(cfg.param("scheme", 0));
    SplittingSpec spec;
    switch (scheme) {
        case 0: spec = SplittingSpec::jacobi(); break;
        case 1: spec = SplittingSpec::gauss_seidel(); break;
        case 2: spec = SplittingSpec::sor(cfg.param("relax", 1.0)); break;
        default: throw Error("splitting: scheme must be 0, 1 or 2");
    }
    if (cfg.params.count("omega")) spec.omega = cfg.param("omega", 0.0) * Matrix::identity(n);
    return spec;
}

}  // namespace detail

// Runs one named method. A bundle with B != I is accepted only by the
// methods that handle the generalized equation.
inline SolveOutcome run_method(const std::string& name, const ProblemBundle& pb, const SolverConfig& cfg = {}) {
    if (!is_method(name)) throw Error("unknown method '" + name + "'");
    const GaveProblem g = pb.gave();
    if (name == "sign-accord") return solve_sign_accord(g, cfg);
    if (name == "splitting") return solve_newton_splitting(g, detail::splitting_from_params(cfg, pb.n), cfg);
    if (name == "signed-ge") {
        const bool force = cfg.param("force", 0.0) != 0.0;
        return detail::via_unit_form(g, cfg, name, [&](const Matrix& bm, const Vector& c) {
            return solve_signed_ge(bm, c, cfg, force);
        });
    }
    if (name == "closed-form") {
        return detail::via_unit_form(g, cfg, name, [&](const Matrix& bm, const Vector& c) {
            return solve_special_closed_form(bm, c);
        });
    }
    if (!pb.is_ave()) return detail::not_applicable(name, "method handles only Ax - |x| = b");
    const AveProblem p = pb.ave();
    try {
        if (name == "newton") return solve_newton(p, cfg);
        if (name == "newton-mod") return solve_newton_modified(p, cfg);
        if (name == "newton-relaxed") return solve_newton_relaxed(p, cfg.param("theta", 0.5), cfg);
        if (name == "newton-inexact") return solve_newton_inexact(p, cfg.param("theta_res", 0.1), cfg);
        if (name == "picard") return solve_picard(p, cfg);
        if (name == "picard-omega") {
            std::optional<Matrix> omega = cfg.omega_matrix;
            if (!omega && cfg.params.count("omega")) omega = cfg.param("omega", 0.0) * Matrix::identity(p.n());
            return solve_picard_omega(p, omega, cfg);
        }
        if (name == "picard-hss") return solve_picard_hss(p, cfg.param("alpha", 1.0), cfg);
        if (name == "sor") return solve_sor_like(p, cfg.param("omega", 1.0), cfg);
        if (name == "ggs") return solve_ggs(p, cfg);
        if (name == "pggs") return solve_pggs(p, cfg.param("beta", 0.5), cfg);
        if (name == "sla") return solve_concave_sla(p, cfg);
        if (name == "hybrid") return solve_concave_hybrid(p, cfg, static_cast<int>(cfg.param("itmax", 10)));
        if (name == "zh") return solve_concave_zh(p, cfg);
        if (name == "auto") return solve_auto(p, cfg);
    } catch (const NotApplicable& e) {
        return detail::not_applicable(name, e.what());
    }
    throw Error("method '" + name + "' has no dispatch entry");
}

}  // namespace avekit::io
