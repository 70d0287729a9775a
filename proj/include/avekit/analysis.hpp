#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "avekit/core/linalg.hpp"
#include "avekit/core/lp.hpp"
#include "avekit/core/problem.hpp"
#include "avekit/solution_set.hpp"

namespace avekit {

inline constexpr double kStrictSlack = 1e-12;
inline constexpr double kNonnegFloor = -1e-12;

enum class VerdictState { Holds, Fails, Unknown };
enum class Tri { Yes, No, Unknown };

inline const char* to_string(VerdictState s) {
    switch (s) {
        case VerdictState::Holds: return "Holds";
        case VerdictState::Fails: return "Fails";
        case VerdictState::Unknown: return "Unknown";
    }
    return "?";
}
inline const char* to_string(Tri t) {
    switch (t) {
        case Tri::Yes: return "Yes";
        case Tri::No: return "No";
        case Tri::Unknown: return "Unknown";
    }
    return "?";
}

// Evidence attached to a verdict. Which fields are filled depends on `kind`.
struct Certificate {
    std::string kind;
    std::optional<SignVector> sign;
    std::optional<SignVector> sign2;
    std::optional<Matrix> matrix;
    Vector vec;
    std::optional<double> scalar;
    std::string detail;
};

struct Verdict {
    VerdictState state = VerdictState::Unknown;
    Certificate cert;
    std::string reason;

    bool holds() const noexcept { return state == VerdictState::Holds; }
    bool fails() const noexcept { return state == VerdictState::Fails; }

    static Verdict make(VerdictState s, Certificate c, std::string why = {}) { return {s, std::move(c), std::move(why)}; }
    static Verdict unknown(std::string why) { return {VerdictState::Unknown, {}, std::move(why)}; }
};

struct SolutionBounds {
    Vector u;             // |x| ≤ u for every solution
    Matrix inv;           // (I − |A|)⁻¹
    bool empty = false;   // some u_i < 0: no solution exists

    // (A+I)x ≥ b, (A−I)x ≥ b, −u ≤ x ≤ u as a list of ≥-rows over x.
    LinearProgram polyhedron(const AveProblem& p) const {
        const std::size_t n = p.n();
        LinearProgram lp;
        lp.c.assign(n, 0.0);
        lp.G = Matrix(0, n);
        for (int sg : {1, -1})
            for (std::size_t i = 0; i < n; ++i) {
                Vector row(p.A.row(i), p.A.row(i) + n);
                row[i] += sg;
                lp.add_row(row, p.b[i]);
            }
        for (std::size_t i = 0; i < n; ++i) {
            Vector e(n, 0.0);
            e[i] = 1.0;
            lp.add_row(e, -u[i]);
            e[i] = -1.0;
            lp.add_row(e, -u[i]);
        }
        return lp;
    }
};

struct AnalysisReport {
    std::vector<std::pair<std::string, Verdict>> verdicts;
    Tri unique_for_all_b = Tri::Unknown;
    Tri solvable_hint = Tri::Unknown;
    std::optional<SolutionBounds> bounds;

    void add(std::string name, Verdict v) { verdicts.emplace_back(std::move(name), std::move(v)); }
    const Verdict& at(const std::string& name) const {
        for (const auto& [k, v] : verdicts)
            if (k == name) return v;
        throw Error("no verdict named " + name);
    }
    bool has(const std::string& name) const {
        for (const auto& kv : verdicts)
            if (kv.first == name) return true;
        return false;
    }
    bool any_holds() const {
        for (const auto& kv : verdicts)
            if (kv.second.holds()) return true;
        return false;
    }
};

namespace detail {

// Determinant as a continuous function (no pivot threshold).
inline double raw_det(const Matrix& m) { return Lu(m, 0.0).determinant(); }

struct SingularMemberHit {
    std::uint64_t index = 0;
    double t = 0.0;
    Matrix member;
};

// Looks for a singular matrix in the convex hull spanned by `center` and the
// vertices center + delta(k), k < count, visited in Gray order. A vertex whose
// determinant sign differs from the center's yields a singular member
// center + t·delta(k) with t the first sign change on [0,1].
inline std::optional<SingularMemberHit> find_singular_member(const Matrix& center, std::uint64_t count,
                                                            const std::function<Matrix(std::uint64_t)>& delta) {
    const int center_sign = Lu(center).determinant_sign();
    if (center_sign == 0) return SingularMemberHit{0, 0.0, center};
    for (std::uint64_t k = 0; k < count; ++k) {
        const Matrix d = delta(k);
        const Matrix vertex = center + d;
        const int vs = Lu(vertex).determinant_sign();
        if (vs == center_sign) continue;
        if (vs == 0) return SingularMemberHit{k, 1.0, vertex};
        const double f0 = raw_det(center);
        auto f = [&](double t) { return raw_det(center + t * d); };
        // Coarse scan for the first sign change, then bisection.
        double lo = 0.0, hi = 1.0;
        const int samples = 64;
        for (int j = 1; j <= samples; ++j) {
            const double t = static_cast<double>(j) / samples;
            const double ft = j == samples ? raw_det(vertex) : f(t);
            if (ft == 0.0) {
                lo = hi = t;
                break;
            }
            if ((ft > 0) != (f0 > 0)) {
                lo = static_cast<double>(j - 1) / samples;
                hi = t;
                break;
            }
        }
        while (hi - lo > 1e-17 && hi > lo) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) break;
            const double fm = f(mid);
            if (fm == 0.0) {
                lo = hi = mid;
                break;
            }
            if ((fm > 0) == (f0 > 0)) lo = mid;
            else hi = mid;
        }
        const double t = std::fabs(f(lo)) <= std::fabs(f(hi)) ? lo : hi;
        return SingularMemberHit{k, t, center + t * d};
    }
    return std::nullopt;
}

inline std::uint64_t pow2(std::size_t n) { return std::uint64_t{1} << n; }

inline bool entrywise_at_least(const Matrix& m, double floor) { return min_entry(m) >= floor; }

}  // namespace detail

// Regularity of the interval matrix [C − D, C + D] (D ≥ 0) via the
// determinant signs of C − T_y D T_z. Holds means regular.
inline Verdict check_interval_regularity(const Matrix& center, const Matrix& radius,
                                         std::size_t enum_cap = kDefaultEnumCap) {
    const std::size_t n = center.rows();
    if (!center.square() || radius.rows() != n || radius.cols() != n)
        throw DimensionError("interval matrix shapes differ");
    if (min_entry(radius) < 0) throw Error("interval radius must be nonnegative");
    // Diagonal radius: the vertex family reduces to C + diag(s)·D.
    bool diagonal = true;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j && radius(i, j) != 0.0) diagonal = false;
    const std::size_t bits = diagonal ? n : (n == 0 ? 0 : 2 * n - 1);
    if (bits > std::min(enum_cap, kHardEnumCap)) return Verdict::unknown("n exceeds enumeration cap");
    auto signs_of = [&](std::uint64_t k) {
        const std::uint64_t g = k ^ (k >> 1);
        SignVector y(n, 1), z(n, 1);
        if (diagonal) {
            for (std::size_t i = 0; i < n; ++i) z.set(i, ((g >> i) & 1u) ? 1 : -1);
        } else {
            for (std::size_t i = 0; i < n; ++i) z.set(i, ((g >> i) & 1u) ? 1 : -1);
            for (std::size_t i = 1; i < n; ++i) y.set(i, ((g >> (n + i - 1)) & 1u) ? 1 : -1);
        }
        return std::make_pair(y, z);
    };
    auto delta = [&](std::uint64_t k) {
        const auto [y, z] = signs_of(k);
        Matrix d(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) d(i, j) = -y[i] * radius(i, j) * z[j];
        return d;
    };
    const auto hit = detail::find_singular_member(center, detail::pow2(bits), delta);
    Certificate c;
    if (!hit) {
        c.kind = "determinant_sign";
        c.scalar = Lu(center).determinant_sign();
        return Verdict::make(VerdictState::Holds, c);
    }
    c.kind = "singular_member";
    c.matrix = hit->member;
    c.scalar = hit->t;
    if (hit->t > 0.0) {
        auto [y, z] = signs_of(hit->index);
        c.sign = y;
        c.sign2 = z;
    }
    return Verdict::make(VerdictState::Fails, c, "interval matrix contains a singular member");
}

namespace detail {

// Exact test over A + B·diag(s); Holds when all determinants share one sign.
inline Verdict exact_regularity(const Matrix& a, const Matrix& b, std::size_t enum_cap) {
    const std::size_t n = a.rows();
    if (n > std::min(enum_cap, kHardEnumCap)) return Verdict::unknown("n exceeds enumeration cap");
    auto delta = [&](std::uint64_t k) {
        const SignVector s = SignVector::gray(n, k);
        return scale_columns(b, s.as_vector());
    };
    const auto hit = find_singular_member(a, pow2(n), delta);
    Certificate c;
    if (!hit) {
        c.kind = "determinant_sign";
        c.scalar = Lu(a).determinant_sign();
        return Verdict::make(VerdictState::Holds, c);
    }
    c.kind = "singular_member";
    c.matrix = hit->member;
    c.scalar = hit->t;
    if (hit->t > 0.0) c.sign = SignVector::gray(n, hit->index);
    return Verdict::make(VerdictState::Fails, c, "a singular member exists");
}

inline Verdict sigma_min_gt1(const Matrix& a) {
    const double smin = extreme_singular_values(a).sigma_min;
    Certificate c{"scalar", {}, {}, {}, {}, smin, "sigma_min(A)"};
    return Verdict::make(smin > 1.0 + kStrictSlack ? VerdictState::Holds : VerdictState::Fails, c);
}

// ρ(|M|) < 1 using the rigorous Collatz–Wielandt upper bound.
inline Verdict rho_abs_lt1(const Matrix& m, const std::string& what) {
    const Matrix am = mabs(m);
    const auto r = spectral_radius_nonneg(am);
    Certificate c{"scalar", {}, {}, am, {}, r.upper, what};
    if (r.upper < 1.0 - kStrictSlack) return Verdict::make(VerdictState::Holds, c);
    if (r.lower >= 1.0 - kStrictSlack || r.converged) return Verdict::make(VerdictState::Fails, c);
    return Verdict::make(VerdictState::Unknown, c, "power iteration did not converge");
}

}  // namespace detail

inline AnalysisReport check_unique_all_rhs(const Matrix& a, std::size_t enum_cap = kDefaultEnumCap) {
    if (!a.square()) throw DimensionError("matrix must be square");
    const std::size_t n = a.rows();
    AnalysisReport rep;
    rep.add("sigma_min_gt_1", detail::sigma_min_gt1(a));

    Lu lu(a);
    if (lu.singular()) {
        Certificate c{"singular_matrix", {}, {}, a, {}, {}, "A is singular"};
        rep.add("rho_abs_inverse_lt_1", Verdict::make(VerdictState::Fails, c, "A is singular"));
    } else {
        rep.add("rho_abs_inverse_lt_1", detail::rho_abs_lt1(lu.inverse(), "rho(|inv(A)|)"));
    }

    {
        double margin = INFINITY;
        std::size_t worst = 0;
        for (std::size_t i = 0; i < n; ++i) {
            double off = 0.0;
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) off += std::fabs(a(i, j));
            const double m = std::fabs(a(i, i)) - 1.0 - off;
            if (m < margin) {
                margin = m;
                worst = i;
            }
        }
        Certificate c{"scalar", {}, {}, {}, {}, margin, "min_i |a_ii| - 1 - sum_j |a_ij|, row " + std::to_string(worst)};
        rep.add("strict_diagonal_dominance",
                Verdict::make(margin > kStrictSlack ? VerdictState::Holds : VerdictState::Fails, c));
    }

    {
        Matrix m = a;
        for (std::size_t i = 0; i < n; ++i) m(i, i) -= 1.0;
        bool pos_diag = true;
        for (std::size_t i = 0; i < n; ++i) pos_diag = pos_diag && m(i, i) > 0.0;
        Matrix comp(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) comp(i, j) = i == j ? std::fabs(m(i, j)) : -std::fabs(m(i, j));
        Lu clu(comp);
        if (!pos_diag) {
            rep.add("h_matrix_positive_diagonal",
                    Verdict::make(VerdictState::Fails, {"matrix", {}, {}, m, {}, {}, "A - I has a nonpositive diagonal entry"}));
        } else if (clu.singular()) {
            rep.add("h_matrix_positive_diagonal",
                    Verdict::make(VerdictState::Fails, {"matrix", {}, {}, comp, {}, {}, "comparison matrix is singular"}));
        } else {
            const Matrix inv = clu.inverse();
            const bool ok = detail::entrywise_at_least(inv, kNonnegFloor);
            rep.add("h_matrix_positive_diagonal",
                    Verdict::make(ok ? VerdictState::Holds : VerdictState::Fails,
                                  {"matrix", {}, {}, inv, {}, min_entry(inv), "inverse of the comparison matrix of A - I"}));
        }
    }

    rep.add("exact_regularity", detail::exact_regularity(a, Matrix::identity(n), enum_cap));

    const Verdict& exact = rep.at("exact_regularity");
    if (exact.fails()) rep.unique_for_all_b = Tri::No;
    else if (rep.any_holds()) rep.unique_for_all_b = Tri::Yes;
    if (rep.unique_for_all_b == Tri::Yes) rep.solvable_hint = Tri::Yes;
    return rep;
}

inline AnalysisReport check_unique_all_rhs_gave(const Matrix& a, const Matrix& b, std::size_t enum_cap = kDefaultEnumCap) {
    if (!a.square() || a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("A and B must be square and equal in size");
    AnalysisReport rep;
    Lu lu(a);
    if (lu.singular()) {
        rep.add("rho_abs_inverse_a_b_lt_1", Verdict::unknown("A is singular"));
        rep.add("norm2_inverse_a_b_lt_1", Verdict::unknown("A is singular"));
    } else {
        const Matrix m = lu.inverse() * b;
        rep.add("rho_abs_inverse_a_b_lt_1", detail::rho_abs_lt1(m, "rho(|inv(A) B|)"));
        const double nm = norm2(m);
        rep.add("norm2_inverse_a_b_lt_1",
                Verdict::make(nm < 1.0 - kStrictSlack ? VerdictState::Holds : VerdictState::Fails,
                              {"scalar", {}, {}, {}, {}, nm, "||inv(A) B||_2"}));
    }
    const double smax_b = extreme_singular_values(b).sigma_max;
    const double smin_a = extreme_singular_values(a).sigma_min;
    rep.add("sigma_max_b_lt_sigma_min_a",
            Verdict::make(smax_b < smin_a - kStrictSlack ? VerdictState::Holds : VerdictState::Fails,
                          {"scalar", {}, {}, {}, {smax_b, smin_a}, smin_a - smax_b, "sigma_min(A) - sigma_max(B)"}));
    rep.add("exact_regularity", detail::exact_regularity(a, b, enum_cap));
    const Verdict& exact = rep.at("exact_regularity");
    if (exact.fails()) rep.unique_for_all_b = Tri::No;
    else if (rep.any_holds()) rep.unique_for_all_b = Tri::Yes;
    return rep;
}

// |x| ≤ −(I − |A|)⁻¹ b for every solution, valid when ρ(|A|) < 1.
inline SolutionBounds solution_bounds(const AveProblem& p) {
    const Matrix aa = mabs(p.A);
    const auto r = spectral_radius_nonneg(aa);
    if (!(r.upper < 1.0)) throw NotApplicable("solution bounds need rho(|A|) < 1");
    const std::size_t n = p.n();
    Matrix m = -aa;
    for (std::size_t i = 0; i < n; ++i) m(i, i) += 1.0;
    SolutionBounds sb;
    sb.inv = inverse(m);
    sb.u = scaled(sb.inv * p.b, -1.0);
    for (double v : sb.u)
        if (v < kNonnegFloor) sb.empty = true;
    return sb;
}

inline std::optional<SolutionBounds> try_solution_bounds(const AveProblem& p) {
    try {
        return solution_bounds(p);
    } catch (const NotApplicable&) {
        return std::nullopt;
    }
}

inline AnalysisReport check_unsolvable(const AveProblem& p) {
    const std::size_t n = p.n();
    AnalysisReport rep;

    // −y ≤ Aᵀy ≤ y, bᵀy ≥ 1; the objective picks the smallest certificate.
    {
        LinearProgram lp;
        lp.c.assign(n, 1.0);
        lp.G = Matrix(0, n);
        for (std::size_t i = 0; i < n; ++i) {
            Vector up(n), lo(n);
            for (std::size_t j = 0; j < n; ++j) {
                const double e = i == j ? 1.0 : 0.0;
                up[j] = e - p.A(j, i);
                lo[j] = e + p.A(j, i);
            }
            lp.add_row(up, 0.0);
            lp.add_row(lo, 0.0);
        }
        lp.add_row(p.b, 1.0);
        const auto s = solve_lp(lp);
        if (s.status == LpStatus::Optimal) {
            Certificate c{"dual_vector", {}, {}, {}, s.x, dot(p.b, s.x), "y with -y <= A^T y <= y, b^T y >= 1"};
            rep.add("dual_lp", Verdict::make(VerdictState::Holds, c));
        } else if (s.status == LpStatus::Infeasible) {
            rep.add("dual_lp", Verdict::make(VerdictState::Fails, {"lp_infeasible", {}, {}, {}, {}, {}, "dual system infeasible"}));
        } else {
            rep.add("dual_lp", Verdict::unknown(std::string("LP status ") + to_string(s.status)));
        }
    }

    {
        bool nonneg = true, nonzero = false;
        for (double v : p.b) {
            nonneg = nonneg && v >= 0.0;
            nonzero = nonzero || v != 0.0;
        }
        const double na = norm2(p.A);
        const bool holds = nonneg && nonzero && na < 1.0 - kStrictSlack;
        rep.add("nonneg_rhs_contraction",
                Verdict::make(holds ? VerdictState::Holds : VerdictState::Fails, {"scalar", {}, {}, {}, {}, na, "||A||_2"}));
    }

    const auto bounds = try_solution_bounds(p);
    if (!bounds) {
        rep.add("bounds_not_nonnegative", Verdict::unknown("rho(|A|) >= 1"));
        rep.add("componentwise_rhs_test", Verdict::unknown("rho(|A|) >= 1"));
    } else {
        rep.bounds = bounds;
        rep.add("bounds_not_nonnegative",
                Verdict::make(bounds->empty ? VerdictState::Holds : VerdictState::Fails,
                              {"bound_vector", {}, {}, {}, bounds->u, *std::min_element(bounds->u.begin(), bounds->u.end()), "u = -(I - |A|)^-1 b"}));
        const Vector t = bounds->inv * vabs(p.b);
        std::optional<std::size_t> hit;
        for (std::size_t i = 0; i < n && !hit; ++i) {
            const double mii = bounds->inv(i, i);
            if (!(mii > 0.0)) throw Error("diagonal of (I - |A|)^-1 must be positive when rho(|A|) < 1");
            if (2.0 * p.b[i] > t[i] / mii + kStrictSlack) hit = i;
        }
        Certificate c{"index", {}, {}, {}, {}, hit ? static_cast<double>(*hit) : -1.0, "row index i with 2 b_i > ((I-|A|)^-1 |b|)_i / (I-|A|)^-1_ii"};
        rep.add("componentwise_rhs_test", Verdict::make(hit ? VerdictState::Holds : VerdictState::Fails, c));
    }
    rep.solvable_hint = rep.any_holds() ? Tri::No : Tri::Unknown;
    return rep;
}

inline Verdict check_exponential_solutions(const AveProblem& p) {
    const std::size_t n = p.n();
    const auto bounds = try_solution_bounds(p);
    if (!bounds) return Verdict::make(VerdictState::Fails, {"condition", {}, {}, {}, {}, {}, "rho(|A|) >= 1"});
    for (double v : p.b)
        if (!(v < -kStrictSlack)) return Verdict::make(VerdictState::Fails, {"condition", {}, {}, {}, {}, {}, "b is not negative"});
    const Vector ab = vabs(p.b);
    const Vector mb = bounds->inv * ab;
    const Vector aab = mabs(p.A) * ab;
    bool c1 = true, c2 = true;
    for (std::size_t i = 0; i < n; ++i) {
        const double mii = bounds->inv(i, i);
        if (!(mii > 0.0)) throw Error("diagonal of (I - |A|)^-1 must be positive when rho(|A|) < 1");
        c1 = c1 && 2.0 * ab[i] > mb[i] / mii + kStrictSlack;
        c2 = c2 && ab[i] > 2.0 * aab[i] + kStrictSlack;
    }
    std::string which;
    if (c1) which = "i";
    if (c2) which += which.empty() ? "ii" : ",ii";
    if (which.empty()) return Verdict::make(VerdictState::Fails, {"condition", {}, {}, {}, {}, {}, "neither condition holds"});
    return Verdict::make(VerdictState::Holds, {"condition", {}, {}, {}, {}, {}, which});
}

inline AnalysisReport check_nonneg_solvability(const Matrix& a) {
    if (!a.square()) throw DimensionError("matrix must be square");
    const std::size_t n = a.rows();
    AnalysisReport rep;
    Matrix am = a, ap = a;
    for (std::size_t i = 0; i < n; ++i) {
        am(i, i) -= 1.0;
        ap(i, i) += 1.0;
    }
    Lu lm(am), lp(ap);
    std::optional<Matrix> im, ip;
    if (!lm.singular()) im = lm.inverse();
    if (!lp.singular()) ip = lp.inverse();
    if (!im) {
        rep.add("inverse_a_minus_i_nonneg", Verdict::make(VerdictState::Fails, {"singular_matrix", {}, {}, am, {}, {}, "A - I is singular"}));
    } else {
        const bool ok = detail::entrywise_at_least(*im, kNonnegFloor);
        rep.add("inverse_a_minus_i_nonneg",
                Verdict::make(ok ? VerdictState::Holds : VerdictState::Fails, {"matrix", {}, {}, *im, {}, min_entry(*im), "(A - I)^-1"}));
    }
    if (!im || !ip) {
        rep.add("interval_inverse_nonneg",
                Verdict::make(VerdictState::Fails, {"singular_matrix", {}, {}, !im ? am : ap, {}, {}, "an endpoint matrix is singular"}));
    } else {
        const double lo = std::min(min_entry(*im), min_entry(*ip));
        const bool ok = lo >= kNonnegFloor;
        rep.add("interval_inverse_nonneg",
                Verdict::make(ok ? VerdictState::Holds : VerdictState::Fails,
                              {"matrix", {}, {}, min_entry(*im) <= min_entry(*ip) ? *im : *ip, {}, lo, "smaller of (A - I)^-1 and (A + I)^-1"}));
    }
    {
        const double mn = min_entry(a);
        const double na = norm2(a);
        const bool ok = mn >= 0.0 && na < 1.0 - kStrictSlack;
        rep.add("nonneg_contraction_for_nonpositive_b",
                Verdict::make(ok ? VerdictState::Holds : VerdictState::Fails,
                              {"scalar", {}, {}, {}, {mn, na}, na, "requires b <= 0; vec = (min entry of A, ||A||_2)"}));
    }
    return rep;
}

inline AnalysisReport check_structure(const Matrix& a, std::size_t enum_cap = kDefaultEnumCap) {
    if (!a.square()) throw DimensionError("matrix must be square");
    const std::size_t n = a.rows();
    AnalysisReport rep;
    if (n > std::min(enum_cap, kHardEnumCap)) {
        rep.add("finite_for_all_b", Verdict::unknown("n exceeds enumeration cap"));
        rep.add("bounded_for_all_b", Verdict::unknown("n exceeds enumeration cap"));
        return rep;
    }
    std::optional<SignVector> singular_s;
    std::optional<std::pair<SignVector, Vector>> cone_witness;
    const std::uint64_t count = detail::pow2(n);
    for (std::uint64_t k = 0; k < count; ++k) {
        const SignVector s = SignVector::gray(n, k);
        const Matrix m = plus_sign_diag(a, s);
        if (!Lu(m).singular()) continue;
        if (!singular_s) singular_s = s;
        if (cone_witness) continue;
        // Nontrivial x with (A + diag s)x = 0, diag(s)x ≥ 0?
        LinearProgram lp;
        lp.c.assign(n, 0.0);
        lp.G = Matrix(0, n);
        for (std::size_t i = 0; i < n; ++i) lp.add_row(Vector(m.row(i), m.row(i) + n), 0.0, true);
        Vector norm_row(n);
        for (std::size_t i = 0; i < n; ++i) {
            Vector e(n, 0.0);
            e[i] = s[i];
            lp.add_row(e, 0.0);
            norm_row[i] = s[i];
        }
        lp.add_row(norm_row, 1.0, true);
        const auto sol = solve_lp(lp);
        if (sol.status == LpStatus::Optimal) cone_witness = std::make_pair(s, sol.x);
    }
    if (singular_s) {
        Certificate c{"singular_member", singular_s, {}, plus_sign_diag(a, *singular_s), {}, {}, "A + diag(s) is singular"};
        rep.add("finite_for_all_b", Verdict::make(VerdictState::Fails, c));
    } else {
        rep.add("finite_for_all_b", Verdict::make(VerdictState::Holds, {"enumeration", {}, {}, {}, {}, {}, "all A + diag(s) nonsingular"}));
    }
    if (cone_witness) {
        Certificate c{"nontrivial_solution", cone_witness->first, {}, {}, cone_witness->second, {}, "x != 0 with Ax + |x| = 0"};
        rep.add("bounded_for_all_b", Verdict::make(VerdictState::Fails, c));
    } else {
        rep.add("bounded_for_all_b",
                Verdict::make(VerdictState::Holds, {"enumeration", {}, {}, {}, {}, {}, "Ax + |x| = 0 has only the trivial solution"}));
    }
    return rep;
}

// Holds iff the whole solution set fits in one orthant.
inline Verdict check_convexity(const SolutionSet& set, double tol = 1e-9) {
    if (set.pieces.empty())
        return Verdict::make(VerdictState::Holds, {"empty_set", {}, {}, {}, {}, {}, "empty solution set"});
    const std::size_t n = set.pieces.front().s.size();
    std::vector<int> need(n, 0);  // 0 free, ±1 forced
    for (const auto& piece : set.pieces) {
        for (std::size_t i = 0; i < n; ++i) {
            int forced = 0;
            if (piece.kind == OrthantPiece::Kind::Point) {
                if (piece.x[i] > tol) forced = 1;
                else if (piece.x[i] < -tol) forced = -1;
            } else {
                bool zero = std::fabs(piece.x[i]) <= tol;
                for (const auto& d : piece.directions) zero = zero && std::fabs(d[i]) <= tol;
                if (!zero) forced = piece.s[i];
            }
            if (forced == 0) continue;
            if (need[i] != 0 && need[i] != forced) {
                Certificate c{"coordinate", {}, {}, {}, {}, static_cast<double>(i), "coordinate takes both signs"};
                return Verdict::make(VerdictState::Fails, c, "solutions lie in different orthants");
            }
            need[i] = forced;
        }
    }
    SignVector s(n);
    for (std::size_t i = 0; i < n; ++i) s.set(i, need[i] > 0 ? 1 : -1);
    return Verdict::make(VerdictState::Holds, {"common_orthant", s, {}, {}, {}, {}, "all pieces in one orthant"});
}

struct ConditionNumbers {
    int p = 2;
    double c = INFINITY;
    double c_rel = INFINITY;
    std::optional<SignVector> argmax_inverse;
    std::optional<SignVector> argmax_matrix;
    std::optional<SignVector> singular_member;
    std::optional<Matrix> singular_matrix;  // set whenever c = +∞
};

inline ConditionNumbers condition_numbers(const Matrix& a, int p = 2, std::size_t enum_cap = kDefaultEnumCap) {
    if (!a.square()) throw DimensionError("matrix must be square");
    const std::size_t n = a.rows();
    check_enum_cap(n, enum_cap);
    ConditionNumbers out;
    out.p = p;
    // All vertices may be nonsingular while the interval is not regular.
    const Verdict reg = detail::exact_regularity(a, Matrix::identity(n), enum_cap);
    if (reg.fails()) {
        out.singular_matrix = reg.cert.matrix;
        if (reg.cert.sign) {
            SignVector neg = *reg.cert.sign;
            for (std::size_t i = 0; i < n; ++i) neg.flip(i);
            out.singular_member = neg;  // direction of A − diag(s) from A
        }
        return out;
    }
    double cmax = 0.0, mmax = 0.0;
    const std::uint64_t count = detail::pow2(n);
    for (std::uint64_t k = 0; k < count; ++k) {
        const SignVector s = SignVector::gray(n, k);
        const Matrix m = minus_sign_diag(a, s);
        const double nm = norm(m, p);
        if (nm > mmax) {
            mmax = nm;
            out.argmax_matrix = s;
        }
        const double ni = norm(Lu(m).inverse(), p);
        if (ni > cmax) {
            cmax = ni;
            out.argmax_inverse = s;
        }
    }
    out.c = cmax;
    out.c_rel = cmax * mmax;
    return out;
}

struct ErrorCertificate {
    double absolute = INFINITY;         // ‖x − x*‖ ≤ absolute
    double relative_lower = 0.0;        // bounds on ‖x − x*‖ / ‖x*‖
    double relative_upper = INFINITY;
    bool relative_valid = false;
};

inline ErrorCertificate certify_error(const AveProblem& p, const Vector& x, const ConditionNumbers& cond) {
    if (!std::isfinite(cond.c)) throw NotApplicable("condition number is infinite");
    const double res = vector_norm(residual(p, x), cond.p);
    ErrorCertificate e;
    e.absolute = cond.c * res;
    const double nb = vector_norm(p.b, cond.p);
    if (nb > 0.0) {
        e.relative_valid = true;
        e.relative_lower = res / (cond.c_rel * nb);
        e.relative_upper = cond.c_rel * res / nb;
    }
    return e;
}

}  // namespace avekit
