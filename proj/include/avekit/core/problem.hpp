#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "avekit/core/errors.hpp"
#include "avekit/core/linalg.hpp"
#include "avekit/core/matrix.hpp"

namespace avekit {

// Ax − |x| = b
struct AveProblem {
    Matrix A;
    Vector b;

    AveProblem() = default;
    AveProblem(Matrix a, Vector rhs) : A(std::move(a)), b(std::move(rhs)) { validate(); }

    std::size_t n() const noexcept { return b.size(); }
    void validate() const {
        if (!A.square()) throw DimensionError("AVE matrix must be square");
        if (A.rows() != b.size()) throw DimensionError("AVE right-hand side has wrong length");
        if (b.empty()) throw DimensionError("AVE dimension must be at least 1");
        if (!all_finite(A) || !all_finite(b)) throw Error("AVE data must be finite");
    }
};

// Ax − B|x| = b
struct GaveProblem {
    Matrix A;
    Matrix B;
    Vector b;

    GaveProblem() = default;
    GaveProblem(Matrix a, Matrix bm, Vector rhs) : A(std::move(a)), B(std::move(bm)), b(std::move(rhs)) { validate(); }
    static GaveProblem from_ave(const AveProblem& p) { return {p.A, Matrix::identity(p.n()), p.b}; }

    std::size_t m() const noexcept { return A.rows(); }
    std::size_t n() const noexcept { return A.cols(); }
    bool square() const noexcept { return A.square(); }
    void validate() const {
        if (A.rows() != B.rows() || A.cols() != B.cols()) throw DimensionError("GAVE matrices must have the same shape");
        if (A.rows() != b.size()) throw DimensionError("GAVE right-hand side has wrong length");
        if (!all_finite(A) || !all_finite(B) || !all_finite(b)) throw Error("GAVE data must be finite");
    }
};

// Entries are exactly ±1.
class SignVector {
public:
    SignVector() = default;
    explicit SignVector(std::size_t n, int fill = -1) : s_(n, fill) { check(); }
    explicit SignVector(std::vector<int> s) : s_(std::move(s)) { check(); }

    std::size_t size() const noexcept { return s_.size(); }
    int operator[](std::size_t i) const noexcept { return s_[i]; }
    void flip(std::size_t i) noexcept { s_[i] = -s_[i]; }
    void set(std::size_t i, int v) {
        if (v != 1 && v != -1) throw Error("sign entries must be ±1");
        s_[i] = v;
    }
    const std::vector<int>& values() const noexcept { return s_; }
    Vector as_vector() const { return Vector(s_.begin(), s_.end()); }

    // Gray-code member k: bit i of k^(k>>1) set means s_i = +1.
    static SignVector gray(std::size_t n, std::uint64_t k) {
        const std::uint64_t g = k ^ (k >> 1);
        SignVector s(n);
        for (std::size_t i = 0; i < n; ++i) s.s_[i] = ((g >> i) & 1u) ? 1 : -1;
        return s;
    }

    friend bool operator==(const SignVector& a, const SignVector& b) { return a.s_ == b.s_; }
    friend bool operator<(const SignVector& a, const SignVector& b) { return a.s_ < b.s_; }

    std::string str() const {
        std::string out = "(";
        for (std::size_t i = 0; i < s_.size(); ++i) {
            if (i) out += ',';
            out += s_[i] > 0 ? '+' : '-';
        }
        return out + ")";
    }

private:
    void check() const {
        for (int v : s_)
            if (v != 1 && v != -1) throw Error("sign entries must be ±1");
    }
    std::vector<int> s_;
};

// sgn with sgn(0) = −1.
inline SignVector sign_diag(const Vector& x) {
    SignVector s(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) s.set(i, x[i] > 0.0 ? 1 : -1);
    return s;
}

inline Vector residual(const AveProblem& p, const Vector& x) {
    if (x.size() != p.n()) throw DimensionError("residual: x has wrong length");
    Vector r = p.A * x;
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = r[i] - std::fabs(x[i]) - p.b[i];
    return r;
}

inline Vector residual(const GaveProblem& p, const Vector& x) {
    if (x.size() != p.n()) throw DimensionError("residual: x has wrong length");
    const Vector ax = p.A * x;
    const Vector bx = p.B * vabs(x);
    Vector r(ax.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = ax[i] - bx[i] - p.b[i];
    return r;
}

// A − diag(s)
inline Matrix minus_sign_diag(const Matrix& a, const SignVector& s) {
    Matrix m(a);
    for (std::size_t i = 0; i < s.size(); ++i) m(i, i) -= s[i];
    return m;
}
// A + diag(s)
inline Matrix plus_sign_diag(const Matrix& a, const SignVector& s) {
    Matrix m(a);
    for (std::size_t i = 0; i < s.size(); ++i) m(i, i) += s[i];
    return m;
}
// A − B·diag(s)
inline Matrix minus_b_sign(const Matrix& a, const Matrix& b, const SignVector& s) {
    Matrix m(a);
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) -= b(i, j) * s[j];
    return m;
}

inline constexpr double kDefaultTol = 1e-10;
inline constexpr std::size_t kDefaultEnumCap = 20;
inline constexpr std::size_t kHardEnumCap = 22;

inline void check_enum_cap(std::size_t n, std::size_t cap) {
    const std::size_t eff = std::min(cap, kHardEnumCap);
    if (n > eff)
        throw CapExceeded("dimension " + std::to_string(n) + " exceeds enumeration cap " + std::to_string(eff));
}

inline bool residual_ok(double residual_inf, const Vector& b, double tol) {
    return residual_inf <= tol * (1.0 + norm_inf(b));
}

struct SolverConfig {
    double tol = kDefaultTol;
    int max_iters = 1000;
    std::map<std::string, double> params;
    std::optional<Matrix> omega_matrix;
    std::vector<int> inner_iters;
    bool trace = false;
    std::optional<Vector> x0;
    // Reference solution; when present some solvers record an error trace.
    std::optional<Vector> reference;

    double param(const std::string& key, double fallback) const {
        auto it = params.find(key);
        return it == params.end() ? fallback : it->second;
    }
    void validate(std::size_t n) const {
        if (!(tol > 0)) throw Error("tolerance must be positive");
        if (max_iters < 1) throw Error("max_iters must be at least 1");
        if (omega_matrix && (omega_matrix->rows() != n || omega_matrix->cols() != n))
            throw DimensionError("Ω must be square of matching size");
        if (x0 && x0->size() != n) throw DimensionError("x0 has wrong length");
    }
};

enum class SolveStatus { Converged, MaxIters, SingularStep, Stalled, Diverged, NotApplicable, NotRegular };

inline const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Converged: return "Converged";
        case SolveStatus::MaxIters: return "MaxIters";
        case SolveStatus::SingularStep: return "SingularStep";
        case SolveStatus::Stalled: return "Stalled";
        case SolveStatus::Diverged: return "Diverged";
        case SolveStatus::NotApplicable: return "NotApplicable";
        case SolveStatus::NotRegular: return "NotRegular";
    }
    return "?";
}

struct SolveOutcome {
    SolveStatus status = SolveStatus::NotApplicable;
    Vector x;
    double residual_inf = INFINITY;
    int iterations = 0;
    int linear_solves = 0;
    std::vector<double> trace;        // residual ∞-norm per iteration
    std::vector<double> error_trace;  // only when a reference is supplied
    std::vector<Vector> iterates;     // only when cfg.trace is set
    std::string method;
    std::string message;
    std::optional<SignVector> sign_certificate;
    Vector ray;
    std::map<std::string, double> info;

    bool converged() const noexcept { return status == SolveStatus::Converged; }
};

}  // namespace avekit
