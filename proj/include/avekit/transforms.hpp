#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "avekit/analysis.hpp"
#include "avekit/core/linalg.hpp"
#include "avekit/core/lp.hpp"
#include "avekit/core/problem.hpp"
#include "avekit/solvers/sign_accord.hpp"

namespace avekit {

// w = Qz + q, wᵀz = 0, w, z ≥ 0.
struct Lcp {
    Matrix Q;
    Vector q;

    Lcp() = default;
    Lcp(Matrix qm, Vector qv) : Q(std::move(qm)), q(std::move(qv)) {
        if (!Q.square() || Q.rows() != q.size()) throw DimensionError("LCP data must be n x n and n");
        if (!all_finite(Q) || !all_finite(q)) throw Error("LCP data must be finite");
    }
    std::size_t n() const noexcept { return q.size(); }
    Vector w_of(const Vector& z) const { return add(Q * z, q); }
    // max(|wᵢzᵢ|, −wᵢ, −zᵢ) over i; zero for an exact solution.
    double violation(const Vector& z) const {
        const Vector w = w_of(z);
        double v = 0.0;
        for (std::size_t i = 0; i < n(); ++i) v = std::max({v, std::fabs(w[i] * z[i]), -w[i], -z[i]});
        return v;
    }
};

// ---------- AVE ↔ LCP ----------

struct AveToLcp {
    Lcp lcp;
    // x = z − w
    Vector back(const Vector& z) const { return sub(z, lcp.w_of(z)); }
    // z = x⁺
    static Vector forward(const Vector& x) {
        Vector z(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) z[i] = std::max(x[i], 0.0);
        return z;
    }
};

// Q = (A + I)⁻¹(A − I), q = −(A + I)⁻¹b, with z = x⁺ and w = x⁻.
inline AveToLcp ave_to_lcp(const AveProblem& p) {
    const std::size_t n = p.n();
    const Matrix id = Matrix::identity(n);
    Lu lu(p.A + id);
    if (lu.singular()) throw SingularMatrix("A + I is singular");
    const Matrix inv = lu.inverse();
    return {Lcp(inv * (p.A - id), scaled(lu.solve(p.b), -1.0))};
}

struct LcpToAve {
    AveProblem ave;
    // z = |x| + x, w = |x| − x
    static std::pair<Vector, Vector> forward(const Vector& x) {
        Vector z(x.size()), w(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            z[i] = std::fabs(x[i]) + x[i];
            w[i] = std::fabs(x[i]) - x[i];
        }
        return {z, w};
    }
    // x = (z − w)/2
    static Vector back(const Vector& z, const Vector& w) { return scaled(sub(z, w), 0.5); }
};

// (I − Q)⁻¹(I + Q)x − |x| = (Q − I)⁻¹q
inline LcpToAve lcp_to_ave(const Lcp& l) {
    const std::size_t n = l.n();
    const Matrix id = Matrix::identity(n);
    Lu lu(id - l.Q);
    if (lu.singular()) throw SingularMatrix("I - Q is singular");
    return {AveProblem(lu.inverse() * (id + l.Q), scaled(lu.solve(l.q), -1.0))};
}

// ---------- Cayley-type transforms ----------

// (I + A)⁻¹(I − A)
inline Matrix cayley(const Matrix& a) {
    const Matrix id = Matrix::identity(a.rows());
    Lu lu(id + a);
    if (lu.singular()) throw SingularMatrix("I + A is singular");
    return lu.inverse() * (id - a);
}

// (A + I)⁻¹(A − I)
inline Matrix transform_al(const Matrix& a) {
    const Matrix id = Matrix::identity(a.rows());
    Lu lu(a + id);
    if (lu.singular()) throw SingularMatrix("A + I is singular");
    return lu.inverse() * (a - id);
}

// (I − Q)⁻¹(I + Q)
inline Matrix transform_la(const Matrix& q) {
    const Matrix id = Matrix::identity(q.rows());
    Lu lu(id - q);
    if (lu.singular()) throw SingularMatrix("I - Q is singular");
    return lu.inverse() * (id + q);
}

// ---------- GAVE reductions ----------

enum class GaveReduction { InverseB, Block3n };

struct GaveToAve {
    AveProblem ave;
    GaveReduction mode = GaveReduction::InverseB;
    std::size_t n = 0;
    Vector back(const Vector& y) const { return Vector(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(n)); }
};

// InverseB: B⁻¹Ax − |x| = B⁻¹b.
// Block3n: unknowns (x, y, z) with y = |x|, y = |y| + z and Ax − By − |z| = b.
// The 3n system carries −B so that it encodes Ax − B|x| = b.
inline GaveToAve gave_to_ave(const GaveProblem& g, GaveReduction mode) {
    if (!g.square()) throw DimensionError("GAVE reduction needs a square system");
    const std::size_t n = g.n();
    if (mode == GaveReduction::InverseB) {
        Lu lu(g.B);
        if (lu.singular()) throw SingularMatrix("B is singular");
        return {AveProblem(lu.inverse() * g.A, lu.solve(g.b)), mode, n};
    }
    Matrix a(3 * n, 3 * n);
    Vector b(3 * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        a(i, n + i) = 1.0;
        a(n + i, n + i) = 1.0;
        a(n + i, 2 * n + i) = -1.0;
        for (std::size_t j = 0; j < n; ++j) {
            a(2 * n + i, j) = g.A(i, j);
            a(2 * n + i, n + j) = -g.B(i, j);
        }
        b[2 * n + i] = g.b[i];
    }
    return {AveProblem(std::move(a), std::move(b)), mode, n};
}

// Ax + |Bx| = b as the 2n GAVE in (x, y): Ax + |y| = b, Bx − y = 0.
inline GaveProblem ngave_to_gave(const Matrix& a, const Matrix& bm, const Vector& b) {
    const std::size_t n = b.size();
    if (!a.square() || !bm.square() || a.rows() != n || bm.rows() != n) throw DimensionError("NGAVE data must be n x n");
    Matrix ta(2 * n, 2 * n), tb(2 * n, 2 * n);
    Vector tr(2 * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            ta(i, j) = a(i, j);
            ta(n + i, j) = bm(i, j);
        }
        ta(n + i, n + i) = -1.0;
        tb(i, n + i) = -1.0;
        tr[i] = b[i];
    }
    return {std::move(ta), std::move(tb), std::move(tr)};
}

// Column-stacking vectorization and its inverse.
inline Vector vec(const Matrix& x) {
    Vector v;
    v.reserve(x.rows() * x.cols());
    for (std::size_t j = 0; j < x.cols(); ++j)
        for (std::size_t i = 0; i < x.rows(); ++i) v.push_back(x(i, j));
    return v;
}

inline Matrix unvec(const Vector& v, std::size_t rows, std::size_t cols) {
    if (v.size() != rows * cols) throw DimensionError("unvec: length mismatch");
    Matrix x(rows, cols);
    for (std::size_t j = 0; j < cols; ++j)
        for (std::size_t i = 0; i < rows; ++i) x(i, j) = v[j * rows + i];
    return x;
}

struct SylvesterToGave {
    GaveProblem gave;
    std::size_t rows = 0, cols = 0;  // shape of X
    Matrix back(const Vector& v) const { return unvec(v, rows, cols); }
};

// AXB + C|X|D = E  ⇔  (Bᵀ⊗A)vec X − (−(Dᵀ⊗C))|vec X| = vec E.
inline SylvesterToGave sylvester_to_gave(const Matrix& a, const Matrix& b, const Matrix& c, const Matrix& d, const Matrix& e) {
    if (a.rows() != c.rows() || a.cols() != c.cols()) throw DimensionError("A and C must have the same shape");
    if (b.rows() != d.rows() || b.cols() != d.cols()) throw DimensionError("B and D must have the same shape");
    if (e.rows() != a.rows() || e.cols() != b.cols()) throw DimensionError("E must be rows(A) x cols(B)");
    const Matrix ga = kron(b.transpose(), a);
    const Matrix gb = -1.0 * kron(d.transpose(), c);
    return {GaveProblem(ga, gb, vec(e)), a.cols(), b.rows()};
}

// ---------- interval bridges ----------

struct IntervalMatrix {
    Matrix center, radius;
    IntervalMatrix() = default;
    IntervalMatrix(Matrix c, Matrix r) : center(std::move(c)), radius(std::move(r)) {
        if (center.rows() != radius.rows() || center.cols() != radius.cols()) throw DimensionError("interval matrix shapes differ");
        if (min_entry(radius) < 0.0) throw Error("interval radius must be nonnegative");
    }
    Matrix lower() const { return center - radius; }
    Matrix upper() const { return center + radius; }
};

struct IntervalVector {
    Vector center, radius;
    IntervalVector() = default;
    IntervalVector(Vector c, Vector r) : center(std::move(c)), radius(std::move(r)) {
        if (center.size() != radius.size()) throw DimensionError("interval vector sizes differ");
        for (double v : radius)
            if (v < 0.0) throw Error("interval radius must be nonnegative");
    }
    Vector lower() const { return sub(center, radius); }
    Vector upper() const { return add(center, radius); }
};

struct HullVertices {
    Verdict regularity;
    std::vector<std::pair<SignVector, Vector>> vertices;
    bool ok() const { return !regularity.fails() && vertices.size() > 0; }
};

// Vertices x_s solving Aᶜx − diag(s)AΔ|x| = bᶜ + diag(s)bΔ; their convex
// hull is the hull of the solution set of the interval system.
inline HullVertices interval_hull_vertices(const IntervalMatrix& ai, const IntervalVector& bi,
                                           std::size_t enum_cap = kDefaultEnumCap) {
    const std::size_t n = bi.center.size();
    if (!ai.center.square() || ai.center.rows() != n) throw DimensionError("interval system shapes differ");
    check_enum_cap(n, enum_cap);
    HullVertices out;
    out.regularity = check_interval_regularity(ai.center, ai.radius, enum_cap);
    if (out.regularity.fails()) return out;
    const std::uint64_t count = std::uint64_t{1} << n;
    for (std::uint64_t k = 0; k < count; ++k) {
        const SignVector s = SignVector::gray(n, k);
        Matrix b = ai.radius;
        Vector rhs = bi.center;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) b(i, j) *= s[i];
            rhs[i] += s[i] * bi.radius[i];
        }
        const auto res = solve_sign_accord(GaveProblem(ai.center, b, rhs));
        if (res.status != SolveStatus::Converged) {
            Certificate c;
            c.kind = "sign_accord";
            c.sign = s;
            c.detail = res.message;
            out.regularity = Verdict::make(VerdictState::Fails, c, "sign accord did not converge");
            out.vertices.clear();
            return out;
        }
        out.vertices.emplace_back(s, res.x);
    }
    return out;
}

// LP feasibility of x = Σλ_k p_k, λ ≥ 0, Σλ_k = 1, up to tol on the equality rows.
inline bool in_convex_hull(const std::vector<Vector>& points, const Vector& x, double tol = 1e-8) {
    if (points.empty()) return false;
    const std::size_t n = x.size(), m = points.size();
    LinearProgram lp;
    lp.c.assign(m, 0.0);
    lp.nonneg.assign(m, 1);
    lp.G = Matrix(0, m);
    for (std::size_t i = 0; i < n; ++i) {
        Vector row(m);
        for (std::size_t k = 0; k < m; ++k) row[k] = points[k][i];
        lp.add_row(row, x[i] - tol);
        lp.add_row(scaled(row, -1.0), -x[i] - tol);
    }
    lp.add_row(Vector(m, 1.0), 1.0, true);
    return solve_lp(lp).status == LpStatus::Optimal;
}

struct Membership {
    bool weak = false;
    bool strong = false;
};

// Weak: Aᶜx − AΔ|x| ≤ b̄.  Strong: Aᶜx + AΔ|x| ≤ b̲.
inline Membership weak_strong_membership(const IntervalMatrix& ai, const IntervalVector& bi, const Vector& x,
                                         double tol = 1e-10) {
    const Vector ax = ai.center * x;
    const Vector dx = ai.radius * vabs(x);
    const Vector bl = bi.lower(), bu = bi.upper();
    Membership m{true, true};
    for (std::size_t i = 0; i < ax.size(); ++i) {
        const double slack = tol * (1.0 + std::max(std::fabs(bl[i]), std::fabs(bu[i])));
        if (ax[i] - dx[i] > bu[i] + slack) m.weak = false;
        if (ax[i] + dx[i] > bl[i] + slack) m.strong = false;
    }
    return m;
}

// x solves the AVE iff it is a weak solution of [A − I, A + I]x ≤ b and a
// strong solution of −[A − I, A + I]x ≤ −b.
inline bool ave_membership(const AveProblem& p, const Vector& x, double tol = 1e-10) {
    const std::size_t n = p.n();
    const Matrix id = Matrix::identity(n);
    const Vector zero(n, 0.0);
    const bool weak = weak_strong_membership(IntervalMatrix(p.A, id), IntervalVector(p.b, zero), x, tol).weak;
    const bool strong = weak_strong_membership(IntervalMatrix(-1.0 * p.A, id), IntervalVector(scaled(p.b, -1.0), zero), x, tol).strong;
    return weak && strong;
}

struct Alternatives {
    Verdict unique_for_all;      // (i): unique solution for every |B| ≤ D and every b
    Verdict nontrivial_witness;  // (ii): |Ax| ≤ D|x| has a solution x ≠ 0
};

// Exactly one alternative holds; decided by regularity of [A − D, A + D].
inline Alternatives theorem_of_alternatives(const Matrix& a, const Matrix& d, std::size_t enum_cap = kDefaultEnumCap) {
    const std::size_t n = a.rows();
    const Verdict reg = check_interval_regularity(a, d, enum_cap);
    Alternatives alt;
    if (reg.state == VerdictState::Unknown) {
        alt.unique_for_all = reg;
        alt.nontrivial_witness = Verdict::unknown(reg.reason);
        return alt;
    }
    if (reg.holds()) {
        alt.unique_for_all = reg;
        alt.nontrivial_witness = Verdict::make(VerdictState::Fails, reg.cert, "interval matrix is regular");
        return alt;
    }
    alt.unique_for_all = reg;
    alt.unique_for_all.state = VerdictState::Fails;
    const Matrix& member = *reg.cert.matrix;
    const auto rr = rank_revealing_solve(member, Vector(n, 0.0), 1e-9);
    Certificate c = reg.cert;
    c.kind = "nullspace_witness";
    if (rr.nullspace.empty()) {
        alt.nontrivial_witness = Verdict::unknown("singular member has numerically trivial nullspace");
        return alt;
    }
    Vector x = rr.nullspace.front();
    // Normalize to ‖x‖∞ = 1 with the first significant entry positive.
    const double m = norm_inf(x);
    double lead = 0.0;
    for (double v : x)
        if (std::fabs(v) > 1e-9 * m) {
            lead = v;
            break;
        }
    x = scaled(x, (lead < 0 ? -1.0 : 1.0) / m);
    c.vec = x;
    alt.nontrivial_witness = Verdict::make(VerdictState::Holds, c);
    return alt;
}

}  // namespace avekit
