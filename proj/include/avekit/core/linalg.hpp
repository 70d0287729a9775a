#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include "avekit/core/errors.hpp"
#include "avekit/core/matrix.hpp"

namespace avekit {

inline constexpr double kDefaultPivotTol = 1e-13;

inline double norm_inf(const Matrix& a) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) s += std::fabs(a(i, j));
        m = std::max(m, s);
    }
    return m;
}

inline double norm1(const Matrix& a) {
    double m = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < a.rows(); ++i) s += std::fabs(a(i, j));
        m = std::max(m, s);
    }
    return m;
}

// LU factorization with partial pivoting. Construction never throws on
// singular input; solve() does.
class Lu {
public:
    explicit Lu(const Matrix& a, double pivot_tol = kDefaultPivotTol) : lu_(a), perm_(a.rows()) {
        if (!a.square()) throw DimensionError("LU requires a square matrix");
        const std::size_t n = a.rows();
        const double threshold = pivot_tol * norm_inf(a);
        for (std::size_t i = 0; i < n; ++i) perm_[i] = i;
        for (std::size_t k = 0; k < n; ++k) {
            std::size_t p = k;
            double best = std::fabs(lu_(k, k));
            for (std::size_t i = k + 1; i < n; ++i) {
                const double v = std::fabs(lu_(i, k));
                if (v > best) {
                    best = v;
                    p = i;
                }
            }
            if (p != k) {
                for (std::size_t j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(p, j));
                std::swap(perm_[k], perm_[p]);
                sign_ = -sign_;
            }
            const double piv = lu_(k, k);
            if (std::fabs(piv) <= threshold || !std::isfinite(piv)) {
                singular_ = true;
                if (piv == 0.0) continue;
            }
            for (std::size_t i = k + 1; i < n; ++i) {
                const double f = lu_(i, k) / piv;
                lu_(i, k) = f;
                if (f == 0.0) continue;
                double* ri = lu_.row(i);
                const double* rk = lu_.row(k);
                for (std::size_t j = k + 1; j < n; ++j) ri[j] -= f * rk[j];
            }
        }
    }

    std::size_t size() const noexcept { return lu_.rows(); }
    bool singular() const noexcept { return singular_; }

    // Product of pivots with permutation sign; zero when flagged singular.
    double determinant() const noexcept {
        if (singular_) return 0.0;
        double d = sign_;
        for (std::size_t i = 0; i < lu_.rows(); ++i) d *= lu_(i, i);
        return d;
    }
    // Sign of the determinant in {-1, 0, +1}; avoids overflow of the product.
    int determinant_sign() const noexcept {
        if (singular_) return 0;
        int s = static_cast<int>(sign_);
        for (std::size_t i = 0; i < lu_.rows(); ++i)
            if (lu_(i, i) < 0) s = -s;
        return s;
    }

    Vector solve(const Vector& b) const {
        const std::size_t n = lu_.rows();
        if (b.size() != n) throw DimensionError("LU solve: right-hand side has wrong length");
        if (singular_) throw SingularMatrix("matrix is singular to working precision");
        Vector x(n);
        for (std::size_t i = 0; i < n; ++i) x[i] = b[perm_[i]];
        for (std::size_t i = 0; i < n; ++i) {
            const double* ri = lu_.row(i);
            double s = x[i];
            for (std::size_t j = 0; j < i; ++j) s -= ri[j] * x[j];
            x[i] = s;
        }
        for (std::size_t i = n; i-- > 0;) {
            const double* ri = lu_.row(i);
            double s = x[i];
            for (std::size_t j = i + 1; j < n; ++j) s -= ri[j] * x[j];
            x[i] = s / ri[i];
        }
        return x;
    }

    Matrix inverse() const {
        const std::size_t n = lu_.rows();
        Matrix inv(n, n);
        Vector e(n, 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            e[j] = 1.0;
            Vector c = solve(e);
            e[j] = 0.0;
            for (std::size_t i = 0; i < n; ++i) inv(i, j) = c[i];
        }
        return inv;
    }

private:
    Matrix lu_;
    std::vector<std::size_t> perm_;
    double sign_ = 1.0;
    bool singular_ = false;
};

inline Vector lu_solve(const Matrix& a, const Vector& b, double pivot_tol = kDefaultPivotTol) {
    return Lu(a, pivot_tol).solve(b);
}

inline Matrix inverse(const Matrix& a, double pivot_tol = kDefaultPivotTol) { return Lu(a, pivot_tol).inverse(); }

inline double determinant(const Matrix& a) { return Lu(a).determinant(); }

// Cyclic Jacobi eigenvalue iteration for a symmetric matrix. Returns the
// eigenvalues (unsorted, matching the columns of `vectors` when requested).
struct SymmetricEigen {
    Vector values;
    Matrix vectors;
    bool converged = true;
};

inline SymmetricEigen jacobi_eigen(Matrix a, bool want_vectors = false, double off_tol = 1e-14,
                                   int max_sweeps = 100) {
    if (!a.square()) throw DimensionError("eigen solver requires a square matrix");
    const std::size_t n = a.rows();
    Matrix v = want_vectors ? Matrix::identity(n) : Matrix();
    double scale = 0.0;
    for (double x : a.data()) scale += x * x;
    scale = std::sqrt(scale);
    SymmetricEigen out;
    out.converged = false;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
        off = std::sqrt(2.0 * off);
        if (off <= off_tol * std::max(scale, std::numeric_limits<double>::min())) {
            out.converged = true;
            break;
        }
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                a(p, q) = a(q, p) = 0.0;
                if (want_vectors) {
                    for (std::size_t k = 0; k < n; ++k) {
                        const double vkp = v(k, p), vkq = v(k, q);
                        v(k, p) = c * vkp - s * vkq;
                        v(k, q) = s * vkp + c * vkq;
                    }
                }
            }
        }
    }
    out.values = a.diagonal();
    out.vectors = std::move(v);
    return out;
}

struct SingularValueBounds {
    double sigma_min = 0.0;
    double sigma_max = 0.0;
};

inline SingularValueBounds extreme_singular_values(const Matrix& a) {
    if (a.rows() == 0 || a.cols() == 0) return {};
    const auto eig = jacobi_eigen(transpose_times(a, a));
    double lo = INFINITY, hi = 0.0;
    for (double ev : eig.values) {
        const double s = std::sqrt(std::max(ev, 0.0));
        lo = std::min(lo, s);
        hi = std::max(hi, s);
    }
    if (a.rows() < a.cols()) lo = 0.0;
    return {lo, hi};
}

inline double norm2(const Matrix& a) { return extreme_singular_values(a).sigma_max; }

inline double norm(const Matrix& a, int p) {
    switch (p) {
        case 1: return norm1(a);
        case 2: return norm2(a);
        default: return norm_inf(a);
    }
}

// Spectral radius of an entrywise-nonnegative matrix. The iteration runs on
// M+I (same Perron vector, no periodicity) and brackets ρ with the
// Collatz–Wielandt quotients of M at the current positive iterate, so
// `upper` is a rigorous bound whatever the convergence state.
struct SpectralRadius {
    double value = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    bool converged = false;
    int iterations = 0;
};

inline SpectralRadius spectral_radius_nonneg(const Matrix& m, double tol = 1e-12, int max_iters = 10000) {
    if (!m.square()) throw DimensionError("spectral radius requires a square matrix");
    for (double v : m.data())
        if (v < 0.0) throw NotApplicable("spectral_radius_nonneg: matrix has a negative entry");
    const std::size_t n = m.rows();
    SpectralRadius r;
    if (n == 0) {
        r.converged = true;
        return r;
    }
    Vector x(n, 1.0);
    Vector plain(n, 1.0);  // unshifted iterate: hits zero exactly for nilpotent M
    double prev_upper = INFINITY;
    for (int it = 1; it <= max_iters; ++it) {
        r.iterations = it;
        const Vector mx = m * x;
        double lo = INFINITY, hi = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double q = mx[i] / x[i];
            lo = std::min(lo, q);
            hi = std::max(hi, q);
        }
        r.lower = std::max(r.lower, lo);
        r.upper = it == 1 ? hi : std::min(r.upper, hi);
        if (static_cast<std::size_t>(it) <= n + 1) {
            plain = m * plain;
            if (norm_inf(plain) == 0.0) {
                r.value = r.lower = r.upper = 0.0;
                r.converged = true;
                return r;
            }
            const double s = norm_inf(plain);
            for (double& v : plain) v /= s;
        }
        const double scale = std::max(1.0, r.upper);
        if (r.upper - r.lower <= tol * scale || std::fabs(prev_upper - r.upper) <= 1e-3 * tol * scale) {
            r.converged = true;
            r.value = r.upper;
            return r;
        }
        prev_upper = r.upper;
        Vector next = add(mx, x);
        const double s = norm_inf(next);
        for (std::size_t i = 0; i < n; ++i) x[i] = next[i] / s;
    }
    r.value = r.upper;
    return r;
}

// Rank-revealing elimination with complete pivoting. Produces the rank, a
// particular solution of Mx=b (free variables zero), the consistency of the
// system and an orthonormal nullspace basis.
struct RankRevealing {
    std::size_t rank = 0;
    bool consistent = true;
    Vector particular;
    std::vector<Vector> nullspace;
};

inline std::vector<Vector> orthonormalize(std::vector<Vector> vs) {
    std::vector<Vector> out;
    for (auto& v : vs) {
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& u : out) {
                const double d = dot(u, v);
                for (std::size_t i = 0; i < v.size(); ++i) v[i] -= d * u[i];
            }
        const double nv = norm2(v);
        if (nv > 1e-12) out.push_back(scaled(v, 1.0 / nv));
    }
    return out;
}

inline RankRevealing rank_revealing_solve(const Matrix& m, const Vector& b, double rel_tol = 1e-11) {
    const std::size_t rows = m.rows(), cols = m.cols();
    if (b.size() != rows) throw DimensionError("rank_revealing_solve: size mismatch");
    Matrix a(m);
    Vector rhs(b);
    std::vector<std::size_t> colperm(cols);
    for (std::size_t j = 0; j < cols; ++j) colperm[j] = j;
    const double threshold = rel_tol * std::max(norm_inf(m), std::numeric_limits<double>::min());
    std::size_t r = 0;
    for (; r < std::min(rows, cols); ++r) {
        std::size_t pi = r, pj = r;
        double best = 0.0;
        for (std::size_t i = r; i < rows; ++i)
            for (std::size_t j = r; j < cols; ++j)
                if (std::fabs(a(i, j)) > best) {
                    best = std::fabs(a(i, j));
                    pi = i;
                    pj = j;
                }
        if (best <= threshold) break;
        if (pi != r) {
            for (std::size_t j = 0; j < cols; ++j) std::swap(a(r, j), a(pi, j));
            std::swap(rhs[r], rhs[pi]);
        }
        if (pj != r) {
            for (std::size_t i = 0; i < rows; ++i) std::swap(a(i, r), a(i, pj));
            std::swap(colperm[r], colperm[pj]);
        }
        for (std::size_t i = r + 1; i < rows; ++i) {
            const double f = a(i, r) / a(r, r);
            if (f == 0.0) continue;
            for (std::size_t j = r; j < cols; ++j) a(i, j) -= f * a(r, j);
            rhs[i] -= f * rhs[r];
        }
    }
    RankRevealing out;
    out.rank = r;
    const double rhs_tol = 1e-9 * (1.0 + norm_inf(b));
    for (std::size_t i = r; i < rows; ++i)
        if (std::fabs(rhs[i]) > rhs_tol) out.consistent = false;

    // Back substitution on the leading r×r upper-triangular block.
    auto back = [&](const Vector& top, const std::vector<double>& free_vals) {
        Vector y(cols, 0.0);
        for (std::size_t j = r; j < cols; ++j) y[j] = free_vals[j - r];
        for (std::size_t i = r; i-- > 0;) {
            double s = top[i];
            for (std::size_t j = i + 1; j < cols; ++j) s -= a(i, j) * y[j];
            y[i] = s / a(i, i);
        }
        Vector x(cols);
        for (std::size_t j = 0; j < cols; ++j) x[colperm[j]] = y[j];
        return x;
    };
    std::vector<double> zeros(cols - r, 0.0);
    out.particular = back(rhs, zeros);
    std::vector<Vector> basis;
    Vector zero_top(r, 0.0);
    for (std::size_t k = 0; k < cols - r; ++k) {
        std::vector<double> fv(cols - r, 0.0);
        fv[k] = 1.0;
        basis.push_back(back(zero_top, fv));
    }
    out.nullspace = orthonormalize(std::move(basis));
    return out;
}

}  // namespace avekit
