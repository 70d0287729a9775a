#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "avekit/core/errors.hpp"

namespace avekit {

using Vector = std::vector<double>;

// Dense row-major matrix.
template <class T>
class basic_matrix {
public:
    using value_type = T;

    basic_matrix() = default;
    basic_matrix(std::size_t rows, std::size_t cols, T fill = T{})
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    basic_matrix(std::initializer_list<std::initializer_list<T>> init) {
        rows_ = init.size();
        cols_ = rows_ ? init.begin()->size() : 0;
        data_.reserve(rows_ * cols_);
        for (const auto& row : init) {
            if (row.size() != cols_) throw DimensionError("ragged initializer list");
            data_.insert(data_.end(), row.begin(), row.end());
        }
    }

    static basic_matrix identity(std::size_t n) {
        basic_matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T{1};
        return m;
    }
    static basic_matrix from_row_major(std::size_t rows, std::size_t cols, std::vector<T> data) {
        if (data.size() != rows * cols) throw DimensionError("row-major data has wrong length");
        basic_matrix m;
        m.rows_ = rows;
        m.cols_ = cols;
        m.data_ = std::move(data);
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool square() const noexcept { return rows_ == cols_; }
    bool empty() const noexcept { return data_.empty(); }

    T& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }
    T* row(std::size_t i) noexcept { return data_.data() + i * cols_; }
    const T* row(std::size_t i) const noexcept { return data_.data() + i * cols_; }

    const std::vector<T>& data() const noexcept { return data_; }
    std::vector<T>& data() noexcept { return data_; }

    std::vector<T> column(std::size_t j) const {
        std::vector<T> c(rows_);
        for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
        return c;
    }
    std::vector<T> diagonal() const {
        std::vector<T> d(std::min(rows_, cols_));
        for (std::size_t i = 0; i < d.size(); ++i) d[i] = (*this)(i, i);
        return d;
    }

    basic_matrix transpose() const {
        basic_matrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    basic_matrix& operator+=(const basic_matrix& o) {
        check_same(o);
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
        return *this;
    }
    basic_matrix& operator-=(const basic_matrix& o) {
        check_same(o);
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
        return *this;
    }
    basic_matrix& operator*=(T s) {
        for (auto& v : data_) v *= s;
        return *this;
    }

    friend basic_matrix operator+(basic_matrix a, const basic_matrix& b) { return a += b; }
    friend basic_matrix operator-(basic_matrix a, const basic_matrix& b) { return a -= b; }
    friend basic_matrix operator-(basic_matrix a) {
        for (auto& v : a.data_) v = -v;
        return a;
    }
    friend basic_matrix operator*(T s, basic_matrix a) { return a *= s; }
    friend basic_matrix operator*(basic_matrix a, T s) { return a *= s; }

    friend basic_matrix operator*(const basic_matrix& a, const basic_matrix& b) {
        if (a.cols_ != b.rows_) throw DimensionError("matrix product: inner dimensions differ");
        basic_matrix c(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i) {
            T* ci = c.row(i);
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const T aik = a(i, k);
                if (aik == T{}) continue;
                const T* bk = b.row(k);
                for (std::size_t j = 0; j < b.cols_; ++j) ci[j] += aik * bk[j];
            }
        }
        return c;
    }
    friend std::vector<T> operator*(const basic_matrix& a, const std::vector<T>& x) {
        if (a.cols_ != x.size()) throw DimensionError("matrix-vector product: size mismatch");
        std::vector<T> y(a.rows_);
        for (std::size_t i = 0; i < a.rows_; ++i) {
            const T* ai = a.row(i);
            T s{};
            for (std::size_t j = 0; j < a.cols_; ++j) s += ai[j] * x[j];
            y[i] = s;
        }
        return y;
    }

    friend bool operator==(const basic_matrix& a, const basic_matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

private:
    void check_same(const basic_matrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionError("matrix shapes differ");
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using Matrix = basic_matrix<double>;

// ---- vector helpers ----

inline Vector add(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) throw DimensionError("vector sizes differ");
    Vector c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] + b[i];
    return c;
}
inline Vector sub(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) throw DimensionError("vector sizes differ");
    Vector c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] - b[i];
    return c;
}
inline Vector scaled(const Vector& a, double s) {
    Vector c(a);
    for (auto& v : c) v *= s;
    return c;
}
inline Vector vabs(const Vector& a) {
    Vector c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = std::fabs(a[i]);
    return c;
}
inline double dot(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) throw DimensionError("vector sizes differ");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}
inline double norm_inf(const Vector& a) {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::fabs(v));
    return m;
}
inline double norm1(const Vector& a) {
    double s = 0.0;
    for (double v : a) s += std::fabs(v);
    return s;
}
inline double norm2(const Vector& a) {
    double scale = norm_inf(a);
    if (scale == 0.0 || !std::isfinite(scale)) return scale;
    double s = 0.0;
    for (double v : a) s += (v / scale) * (v / scale);
    return scale * std::sqrt(s);
}
inline double vector_norm(const Vector& a, int p) {
    switch (p) {
        case 1: return norm1(a);
        case 2: return norm2(a);
        default: return norm_inf(a);
    }
}
inline double dist_inf(const Vector& a, const Vector& b) { return norm_inf(sub(a, b)); }
inline Vector ones(std::size_t n) { return Vector(n, 1.0); }

// ---- matrix helpers ----

inline Matrix diag(const Vector& d) {
    Matrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}
inline Matrix mabs(const Matrix& a) {
    Matrix m(a);
    for (auto& v : m.data()) v = std::fabs(v);
    return m;
}
inline Matrix transpose_times(const Matrix& a, const Matrix& b) {  // aᵀb
    if (a.rows() != b.rows()) throw DimensionError("transpose_times: row counts differ");
    Matrix c(a.cols(), b.cols());
    for (std::size_t k = 0; k < a.rows(); ++k) {
        const double* ak = a.row(k);
        const double* bk = b.row(k);
        for (std::size_t i = 0; i < a.cols(); ++i) {
            if (ak[i] == 0.0) continue;
            double* ci = c.row(i);
            for (std::size_t j = 0; j < b.cols(); ++j) ci[j] += ak[i] * bk[j];
        }
    }
    return c;
}
inline Vector transpose_times(const Matrix& a, const Vector& x) {  // aᵀx
    if (a.rows() != x.size()) throw DimensionError("transpose_times: size mismatch");
    Vector y(a.cols(), 0.0);
    for (std::size_t k = 0; k < a.rows(); ++k) {
        const double* ak = a.row(k);
        for (std::size_t j = 0; j < a.cols(); ++j) y[j] += ak[j] * x[k];
    }
    return y;
}
// A·diag(d)
inline Matrix scale_columns(Matrix a, const Vector& d) {
    if (a.cols() != d.size()) throw DimensionError("scale_columns: size mismatch");
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) *= d[j];
    return a;
}
// A + diag(d)
inline Matrix add_diag(Matrix a, const Vector& d) {
    if (!a.square() || a.rows() != d.size()) throw DimensionError("add_diag: size mismatch");
    for (std::size_t i = 0; i < d.size(); ++i) a(i, i) += d[i];
    return a;
}
inline Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix k(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            for (std::size_t p = 0; p < b.rows(); ++p)
                for (std::size_t q = 0; q < b.cols(); ++q)
                    k(i * b.rows() + p, j * b.cols() + q) = a(i, j) * b(p, q);
    return k;
}
inline bool all_finite(const Matrix& a) {
    return std::all_of(a.data().begin(), a.data().end(), [](double v) { return std::isfinite(v); });
}
inline bool all_finite(const Vector& a) {
    return std::all_of(a.begin(), a.end(), [](double v) { return std::isfinite(v); });
}
inline bool is_zero(const Matrix& a) {
    return std::all_of(a.data().begin(), a.data().end(), [](double v) { return v == 0.0; });
}
inline double max_abs_diff(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("matrix shapes differ");
    double m = 0.0;
    for (std::size_t k = 0; k < a.data().size(); ++k) m = std::max(m, std::fabs(a.data()[k] - b.data()[k]));
    return m;
}
inline double min_entry(const Matrix& a) {
    double m = INFINITY;
    for (double v : a.data()) m = std::min(m, v);
    return m;
}

}  // namespace avekit
