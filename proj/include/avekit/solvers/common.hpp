#pragma once

#include <cmath>
#include <string>
#include <utility>

#include "avekit/core/linalg.hpp"
#include "avekit/core/problem.hpp"

namespace avekit::detail {

inline constexpr double kDivergenceFactor = 1e12;

// Residual bookkeeping shared by the iterative solvers.
class IterationMonitor {
public:
    IterationMonitor(const AveProblem& p, const SolverConfig& cfg, std::string method)
        : p_(p), cfg_(cfg), bnorm_(norm_inf(p.b)) {
        cfg.validate(p.n());
        out_.method = std::move(method);
    }

    SolveOutcome& outcome() noexcept { return out_; }
    const SolverConfig& config() const noexcept { return cfg_; }

    // Records x as iterate number k. Returns true when the run should stop.
    bool record(const Vector& x, int k) {
        out_.x = x;
        out_.iterations = k;
        out_.residual_inf = all_finite(x) ? norm_inf(residual(p_, x)) : INFINITY;
        out_.trace.push_back(out_.residual_inf);
        if (cfg_.trace) out_.iterates.push_back(x);
        if (cfg_.reference) out_.error_trace.push_back(dist_inf(x, *cfg_.reference));
        if (converged()) {
            out_.status = SolveStatus::Converged;
            return true;
        }
        if (!std::isfinite(out_.residual_inf) || out_.residual_inf > kDivergenceFactor * (1.0 + bnorm_)) {
            out_.status = SolveStatus::Diverged;
            return true;
        }
        return false;
    }

    bool converged() const { return residual_ok(out_.residual_inf, p_.b, cfg_.tol); }

    SolveOutcome finish(SolveStatus status_if_running) {
        if (out_.status == SolveStatus::NotApplicable && status_if_running != SolveStatus::NotApplicable)
            out_.status = status_if_running;
        return std::move(out_);
    }

    SolveOutcome fail(SolveStatus s, std::string message) {
        out_.status = s;
        out_.message = std::move(message);
        return std::move(out_);
    }

    // Evaluates a point without counting it as an iteration.
    void set_point(const Vector& x) {
        out_.x = x;
        out_.residual_inf = all_finite(x) ? norm_inf(residual(p_, x)) : INFINITY;
    }

private:
    const AveProblem& p_;
    const SolverConfig& cfg_;
    double bnorm_;
    SolveOutcome out_;
};

inline Vector zeros(std::size_t n) { return Vector(n, 0.0); }

}  // namespace avekit::detail
