#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "avekit/analysis.hpp"
#include "avekit/io/bundle.hpp"
#include "avekit/io/rng.hpp"

namespace avekit::io {

inline constexpr int kMaxGenerationAttempts = 100;

inline const std::vector<std::string>& generator_kinds() {
    static const std::vector<std::string> kinds{"sigma_gt1", "rho_inv_lt1", "diag_dom", "bvp", "exp2n",
                                                "infeasible", "uniform", "uniform_regular"};
    return kinds;
}

namespace detail {

inline double param_or(const std::map<std::string, double>& params, const std::string& key, double fallback) {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

inline Matrix uniform_matrix(SplitMix64& rng, std::size_t n, double lo, double hi) {
    Matrix a(n, n);
    for (auto& v : a.data()) v = rng.uniform(lo, hi);
    return a;
}

inline Vector uniform_vector(SplitMix64& rng, std::size_t n, double lo, double hi) {
    Vector v(n);
    for (auto& x : v) x = rng.uniform(lo, hi);
    return v;
}

// b = Ax* − |x*| for a random x* in [−1, 1]ⁿ.
inline Vector planted_rhs(SplitMix64& rng, const Matrix& a) {
    const Vector xs = uniform_vector(rng, a.rows(), -1.0, 1.0);
    return sub(a * xs, vabs(xs));
}

// Rescales A so that σ_min(A) = target; false when A is numerically singular.
inline bool scale_sigma_min(Matrix& a, double target) {
    const double smin = extreme_singular_values(a).sigma_min;
    if (!(smin > 1e-8)) return false;
    a *= target / smin;
    return true;
}

inline bool attempt_instance(const std::string& kind, std::size_t n, SplitMix64& rng,
                             const std::map<std::string, double>& params, Matrix& a, Vector& b) {
    if (kind == "sigma_gt1" || kind == "uniform_regular") {
        const double margin = param_or(params, "margin", 0.1);
        if (!(margin > 0.0)) throw Error(kind + " generator needs margin > 0");
        a = uniform_matrix(rng, n, -1.0, 1.0);
        if (!scale_sigma_min(a, 1.0 + margin)) return false;
        b = kind == "sigma_gt1" ? planted_rhs(rng, a) : uniform_vector(rng, n, -1.0, 1.0);
        return avekit::detail::sigma_min_gt1(a).holds();
    }
    if (kind == "rho_inv_lt1") {
        const double off = param_or(params, "offdiag", 1.0 / static_cast<double>(n));
        a = Matrix(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                a(i, j) = i == j ? rng.sign() * rng.uniform(2.0, 3.0) : off * rng.uniform(-1.0, 1.0);
        Lu lu(a);
        if (lu.singular()) return false;
        b = planted_rhs(rng, a);
        return avekit::detail::rho_abs_lt1(lu.inverse(), "rho(|inv(A)|)").holds();
    }
    if (kind == "diag_dom") {
        const double margin = param_or(params, "margin", 0.5);
        if (!(margin > 0.0)) throw Error("diag_dom generator needs margin > 0");
        a = uniform_matrix(rng, n, -1.0, 1.0);
        for (std::size_t i = 0; i < n; ++i) {
            double off = 0.0;
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) off += std::fabs(a(i, j));
            a(i, i) = rng.sign() * (1.0 + off + margin + rng.unit());
        }
        b = planted_rhs(rng, a);
        for (std::size_t i = 0; i < n; ++i) {
            double off = 0.0;
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) off += std::fabs(a(i, j));
            if (!(std::fabs(a(i, i)) > 1.0 + off)) return false;
        }
        return true;
    }
    if (kind == "bvp") {
        // u'' − |u| = f on (0, 1), u(0) = alpha, u(1) = beta, h = 1/(n+1).
        const double f = param_or(params, "f", 1.0);
        const double alpha = param_or(params, "alpha", 0.0);
        const double beta = param_or(params, "beta", 0.0);
        const double h = 1.0 / static_cast<double>(n + 1);
        const double ih2 = 1.0 / (h * h);
        a = Matrix(n, n);
        b.assign(n, f);
        for (std::size_t i = 0; i < n; ++i) {
            a(i, i) = -2.0 * ih2;
            if (i > 0) a(i, i - 1) = ih2;
            if (i + 1 < n) a(i, i + 1) = ih2;
        }
        b[0] -= alpha * ih2;
        b[n - 1] -= beta * ih2;
        return avekit::detail::sigma_min_gt1(a).holds();
    }
    if (kind == "exp2n") {
        const double scale = param_or(params, "scale", 0.2);
        a = uniform_matrix(rng, n, -1.0, 1.0);
        a *= scale / static_cast<double>(n);
        b = uniform_vector(rng, n, -2.0, -1.0);
        return check_exponential_solutions(AveProblem(a, b)).holds();
    }
    if (kind == "infeasible") {
        a = uniform_matrix(rng, n, -1.0, 1.0);
        const double na = norm2(a);
        if (!(na > 0.0)) return false;
        a *= rng.uniform(0.2, 0.9) / na;
        b = uniform_vector(rng, n, 0.0, 1.0);
        b[0] += 0.1;
        return check_unsolvable(AveProblem(a, b)).at("nonneg_rhs_contraction").holds();
    }
    if (kind == "uniform") {
        const double lo = param_or(params, "lo", -1.0);
        const double hi = param_or(params, "hi", 1.0);
        if (!(hi >= lo)) throw Error("uniform generator needs lo <= hi");
        a = uniform_matrix(rng, n, lo, hi);
        b = uniform_vector(rng, n, lo, hi);
        return true;
    }
    throw Error("unknown generator kind '" + kind + "'");
}

}  // namespace detail

// Deterministic in (kind, n, seed, params). Attempt k reseeds with
// seed + k·c; c differs from the SplitMix64 increment so retries do not
// replay a shifted copy of the first stream.
inline ProblemBundle gen_instance(const std::string& kind, std::size_t n, std::uint64_t seed,
                                  const std::map<std::string, double>& params = {}) {
    if (n == 0) throw DimensionError("instance size must be at least 1");
    for (int attempt = 0; attempt < kMaxGenerationAttempts; ++attempt) {
        SplitMix64 rng(seed + static_cast<std::uint64_t>(attempt) * 0xD1B54A32D192ED03ULL);
        Matrix a;
        Vector b;
        if (!detail::attempt_instance(kind, n, rng, params, a, b)) continue;
        if (!all_finite(a) || !all_finite(b)) continue;
        ProblemBundle pb;
        pb.n = n;
        pb.A = std::move(a);
        pb.b = std::move(b);
        BundleMetadata md;
        md.kind = kind;
        md.seed = seed;
        md.params = params;
        if (attempt > 0) md.params["attempt"] = attempt;
        pb.metadata = std::move(md);
        return pb;
    }
    throw GenerationFailed("generator '" + kind + "' failed its property check " + std::to_string(kMaxGenerationAttempts) +
                           " times (n=" + std::to_string(n) + ", seed=" + std::to_string(seed) + ")");
}

}  // namespace avekit::io
