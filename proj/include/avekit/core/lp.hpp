#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "avekit/core/errors.hpp"
#include "avekit/core/linalg.hpp"
#include "avekit/core/matrix.hpp"

namespace avekit {

// min cᵀx  s.t.  G_i x ≥ h_i  (or = h_i when equality[i]).
// Variables are free unless nonneg[j] is set; an empty nonneg means all free.
struct LinearProgram {
    Vector c;
    Matrix G;
    Vector h;
    std::vector<char> equality;
    std::vector<char> nonneg;

    std::size_t num_vars() const { return c.size(); }
    std::size_t num_rows() const { return h.size(); }
    bool is_equality(std::size_t i) const { return !equality.empty() && equality[i]; }
    bool is_nonneg(std::size_t j) const { return !nonneg.empty() && nonneg[j]; }

    void add_row(const Vector& g, double rhs, bool eq = false) {
        if (g.size() != c.size()) throw DimensionError("LP row has wrong length");
        Matrix next(G.rows() + 1, c.size());
        std::copy(G.data().begin(), G.data().end(), next.data().begin());
        std::copy(g.begin(), g.end(), next.row(G.rows()));
        G = std::move(next);
        h.push_back(rhs);
        equality.resize(h.size() - 1, 0);
        equality.push_back(eq ? 1 : 0);
    }
};

enum class LpStatus { Optimal, Infeasible, Unbounded, PivotLimit };

inline const char* to_string(LpStatus s) {
    switch (s) {
        case LpStatus::Optimal: return "Optimal";
        case LpStatus::Infeasible: return "Infeasible";
        case LpStatus::Unbounded: return "Unbounded";
        case LpStatus::PivotLimit: return "PivotLimit";
    }
    return "?";
}

// Standard-form column layout used by `basis`: columns [0,n) are the
// variables (positive part for free ones), then one negative-part column per
// free variable in index order, then one surplus column per inequality row in
// row order.
struct LpSolution {
    LpStatus status = LpStatus::Infeasible;
    Vector x;
    double objective = NAN;
    std::vector<std::size_t> basis;
    Vector ray;
    std::size_t pivots = 0;
};

struct LpOptions {
    double feas_tol = 1e-9;
    double opt_tol = 1e-9;
    double pivot_tol = 1e-9;
    std::size_t max_pivots_per_row = 50000;
    int degenerate_streak_for_bland = 50;
};

namespace detail {

class Tableau {
public:
    Tableau(std::size_t m, std::size_t cols) : m_(m), cols_(cols), t_((m + 1) * (cols + 1), 0.0), basis_(m) {}

    double& at(std::size_t i, std::size_t j) { return t_[i * (cols_ + 1) + j]; }
    double at(std::size_t i, std::size_t j) const { return t_[i * (cols_ + 1) + j]; }
    double& rhs(std::size_t i) { return at(i, cols_); }
    double rhs(std::size_t i) const { return at(i, cols_); }
    double& cost(std::size_t j) { return at(m_, j); }
    std::size_t rows() const { return m_; }
    std::size_t cols() const { return cols_; }
    std::vector<std::size_t>& basis() { return basis_; }

    void pivot(std::size_t r, std::size_t c) {
        const std::size_t w = cols_ + 1;
        double* pr = &t_[r * w];
        const double inv = 1.0 / pr[c];
        for (std::size_t j = 0; j < w; ++j) pr[j] *= inv;
        pr[c] = 1.0;
        for (std::size_t i = 0; i <= m_; ++i) {
            if (i == r) continue;
            double* pi = &t_[i * w];
            const double f = pi[c];
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < w; ++j) pi[j] -= f * pr[j];
            pi[c] = 0.0;
        }
        basis_[r] = c;
    }

    // Runs primal simplex on the objective row over columns < allowed_cols.
    // Dantzig pricing; Bland's rule takes over after a streak of degenerate
    // pivots and stays until the objective strictly improves, which rules out
    // cycling.
    LpStatus run(std::size_t allowed_cols, const LpOptions& opt, std::size_t& pivots, std::size_t max_pivots,
                 std::size_t& unbounded_col) {
        bool bland = false;
        int degenerate_streak = 0;
        while (true) {
            if (pivots >= max_pivots) return LpStatus::PivotLimit;
            std::size_t enter = allowed_cols;
            double best = -opt.opt_tol;
            for (std::size_t j = 0; j < allowed_cols; ++j) {
                const double d = cost(j);
                if (d < best) {
                    enter = j;
                    if (bland) break;
                    best = d;
                }
            }
            if (enter == allowed_cols) return LpStatus::Optimal;
            std::size_t leave = m_;
            double ratio = INFINITY;
            for (std::size_t i = 0; i < m_; ++i) {
                const double a = at(i, enter);
                if (a <= opt.pivot_tol) continue;
                const double q = std::max(rhs(i), 0.0) / a;
                if (q < ratio - 1e-12 || (q <= ratio + 1e-12 && leave < m_ && basis_[i] < basis_[leave])) {
                    if (q < ratio) ratio = q;
                    leave = i;
                }
            }
            if (leave == m_) {
                unbounded_col = enter;
                return LpStatus::Unbounded;
            }
            if (ratio <= 1e-12) {
                if (++degenerate_streak >= opt.degenerate_streak_for_bland) bland = true;
            } else {
                degenerate_streak = 0;
                bland = false;
            }
            pivot(leave, enter);
            ++pivots;
        }
    }

private:
    std::size_t m_, cols_;
    std::vector<double> t_;
    std::vector<std::size_t> basis_;
};

}  // namespace detail

inline LpSolution solve_lp(const LinearProgram& lp, const LpOptions& opt = {}) {
    const std::size_t n = lp.num_vars();
    const std::size_t m = lp.num_rows();
    if (lp.G.rows() != m || (m > 0 && lp.G.cols() != n)) throw DimensionError("LP constraint matrix shape mismatch");
    if (!lp.equality.empty() && lp.equality.size() != m) throw DimensionError("LP equality flags length mismatch");
    if (!lp.nonneg.empty() && lp.nonneg.size() != n) throw DimensionError("LP sign flags length mismatch");
    if (!all_finite(lp.c) || !all_finite(lp.h) || !all_finite(lp.G)) throw Error("LP data must be finite");

    std::vector<std::size_t> neg_col(n, SIZE_MAX);
    std::size_t ncols = n;
    for (std::size_t j = 0; j < n; ++j)
        if (!lp.is_nonneg(j)) neg_col[j] = ncols++;
    std::vector<std::size_t> surplus_col(m, SIZE_MAX);
    for (std::size_t i = 0; i < m; ++i)
        if (!lp.is_equality(i)) surplus_col[i] = ncols++;
    const std::size_t structural = ncols;

    // Decide row signs and which rows need an artificial variable.
    std::vector<double> rowsign(m, 1.0);
    std::vector<std::size_t> art_row;
    for (std::size_t i = 0; i < m; ++i) {
        if (!lp.is_equality(i) && lp.h[i] <= 0.0) {
            rowsign[i] = -1.0;  // -G x + s = -h ≥ 0: surplus starts basic
        } else {
            if (lp.h[i] < 0.0) rowsign[i] = -1.0;
            art_row.push_back(i);
        }
    }
    const std::size_t total = structural + art_row.size();
    detail::Tableau tab(m, total);
    auto set_row = [&](std::size_t i) {
        const double sg = rowsign[i];
        for (std::size_t j = 0; j < n; ++j) {
            const double g = sg * lp.G(i, j);
            tab.at(i, j) = g;
            if (neg_col[j] != SIZE_MAX) tab.at(i, neg_col[j]) = -g;
        }
        if (surplus_col[i] != SIZE_MAX) tab.at(i, surplus_col[i]) = -sg;
        tab.rhs(i) = sg * lp.h[i];
    };
    for (std::size_t i = 0; i < m; ++i) set_row(i);
    std::vector<char> has_art(m, 0);
    for (std::size_t k = 0; k < art_row.size(); ++k) {
        const std::size_t i = art_row[k];
        tab.at(i, structural + k) = 1.0;
        tab.basis()[i] = structural + k;
        has_art[i] = 1;
    }
    for (std::size_t i = 0; i < m; ++i)
        if (!has_art[i]) tab.basis()[i] = surplus_col[i];

    LpSolution sol;
    const std::size_t max_pivots = opt.max_pivots_per_row * std::max<std::size_t>(m, 1);
    std::size_t unbounded_col = 0;

    // Phase 1: minimize the sum of artificials.
    if (!art_row.empty()) {
        for (std::size_t j = 0; j <= total; ++j) tab.at(m, j) = 0.0;
        for (std::size_t i : art_row)
            for (std::size_t j = 0; j <= total; ++j)
                if (j < structural || j == total) tab.at(m, j) -= tab.at(i, j);
        const LpStatus s1 = tab.run(total, opt, sol.pivots, max_pivots, unbounded_col);
        if (s1 == LpStatus::PivotLimit) {
            sol.status = s1;
            return sol;
        }
        double hscale = 1.0 + norm_inf(lp.h);
        if (-tab.rhs(m) > opt.feas_tol * hscale) {
            sol.status = LpStatus::Infeasible;
            return sol;
        }
        // Drive artificials out of the basis where possible.
        for (std::size_t r = 0; r < m; ++r) {
            if (tab.basis()[r] < structural) continue;
            std::size_t best_j = structural;
            double best = opt.pivot_tol;
            for (std::size_t j = 0; j < structural; ++j)
                if (std::fabs(tab.at(r, j)) > best) {
                    best = std::fabs(tab.at(r, j));
                    best_j = j;
                }
            if (best_j < structural) tab.pivot(r, best_j);
        }
    }

    // Phase 2 objective row.
    for (std::size_t j = 0; j <= total; ++j) tab.at(m, j) = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        tab.cost(j) = lp.c[j];
        if (neg_col[j] != SIZE_MAX) tab.cost(neg_col[j]) = -lp.c[j];
    }
    for (std::size_t r = 0; r < m; ++r) {
        const std::size_t bj = tab.basis()[r];
        const double cb = tab.cost(bj);
        if (cb == 0.0) continue;
        for (std::size_t j = 0; j <= total; ++j) tab.at(m, j) -= cb * tab.at(r, j);
    }
    const LpStatus s2 = tab.run(structural, opt, sol.pivots, max_pivots, unbounded_col);
    if (s2 == LpStatus::PivotLimit) {
        sol.status = s2;
        return sol;
    }

    // Basic solution, refined by solving with the original basis columns.
    Vector val(total, 0.0);
    for (std::size_t r = 0; r < m; ++r) val[tab.basis()[r]] = std::max(tab.rhs(r), 0.0);
    {
        Matrix bm(m, m);
        Vector rhs(m);
        bool all_structural = true;
        for (std::size_t r = 0; r < m && all_structural; ++r) {
            const std::size_t bj = tab.basis()[r];
            if (bj >= structural) {
                all_structural = false;
                break;
            }
            for (std::size_t i = 0; i < m; ++i) {
                double a = 0.0;
                if (bj < n) a = rowsign[i] * lp.G(i, bj);
                else if (surplus_col[i] == bj) a = -rowsign[i];
                else {
                    for (std::size_t j = 0; j < n; ++j)
                        if (neg_col[j] == bj) a = -rowsign[i] * lp.G(i, j);
                }
                bm(i, r) = a;
            }
        }
        if (all_structural && m > 0) {
            for (std::size_t i = 0; i < m; ++i) rhs[i] = rowsign[i] * lp.h[i];
            Lu lu(bm);
            if (!lu.singular()) {
                const Vector xb = lu.solve(rhs);
                bool ok = true;
                for (std::size_t r = 0; r < m; ++r)
                    if (!std::isfinite(xb[r]) || std::fabs(xb[r] - val[tab.basis()[r]]) > 1e-6 * (1.0 + std::fabs(xb[r])))
                        ok = false;
                if (ok)
                    for (std::size_t r = 0; r < m; ++r) val[tab.basis()[r]] = std::max(xb[r], 0.0);
            }
        }
    }
    sol.x.assign(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        sol.x[j] = val[j];
        if (neg_col[j] != SIZE_MAX) sol.x[j] -= val[neg_col[j]];
    }
    for (std::size_t r = 0; r < m; ++r)
        if (tab.basis()[r] < structural) sol.basis.push_back(tab.basis()[r]);
    sol.objective = dot(lp.c, sol.x);

    if (s2 == LpStatus::Unbounded) {
        Vector dir(total, 0.0);
        dir[unbounded_col] = 1.0;
        for (std::size_t r = 0; r < m; ++r) dir[tab.basis()[r]] = -tab.at(r, unbounded_col);
        sol.ray.assign(n, 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            sol.ray[j] = dir[j];
            if (neg_col[j] != SIZE_MAX) sol.ray[j] -= dir[neg_col[j]];
        }
        sol.status = LpStatus::Unbounded;
        return sol;
    }
    sol.status = LpStatus::Optimal;
    return sol;
}

// Rows of the LP that hold with equality at x (within tol·(1+|h_i|)).
inline std::vector<std::size_t> tight_rows(const LinearProgram& lp, const Vector& x, double tol = 1e-9) {
    std::vector<std::size_t> out;
    const Vector gx = lp.G * x;
    for (std::size_t i = 0; i < lp.num_rows(); ++i)
        if (std::fabs(gx[i] - lp.h[i]) <= tol * (1.0 + std::fabs(lp.h[i]))) out.push_back(i);
    return out;
}

inline bool lp_feasible_point(const LinearProgram& lp, const Vector& x, double tol = 1e-9) {
    const Vector gx = lp.G * x;
    for (std::size_t i = 0; i < lp.num_rows(); ++i) {
        const double slack = tol * (1.0 + std::fabs(lp.h[i]));
        if (lp.is_equality(i) ? std::fabs(gx[i] - lp.h[i]) > slack : gx[i] < lp.h[i] - slack) return false;
    }
    for (std::size_t j = 0; j < lp.num_vars(); ++j)
        if (lp.is_nonneg(j) && x[j] < -tol) return false;
    return true;
}

}  // namespace avekit
