#pragma once

#include <array>
#include <cmath>
#include <initializer_list>

namespace qsd {

inline constexpr int kMaxDim = 3;

// Fixed-capacity vector for phase-space coordinates (N <= 3). Value type,
// cheap to copy; the active dimension is carried in n.
struct VecN {
    int n = 0;
    std::array<double, kMaxDim> a{};

    VecN() = default;
    VecN(std::initializer_list<double> xs) {
        n = static_cast<int>(xs.size());
        int i = 0;
        for (double v : xs) a[i++] = v;
    }
    static VecN zeros(int dim) {
        VecN v;
        v.n = dim;
        return v;
    }

    double& operator[](int i) { return a[i]; }
    double operator[](int i) const { return a[i]; }

    bool finite() const {
        for (int i = 0; i < n; ++i)
            if (!std::isfinite(a[i])) return false;
        return true;
    }
    double norm2() const {
        double s = 0;
        for (int i = 0; i < n; ++i) s += a[i] * a[i];
        return s;
    }
};

inline VecN operator+(VecN u, const VecN& v) {
    for (int i = 0; i < u.n; ++i) u.a[i] += v.a[i];
    return u;
}
inline VecN operator-(VecN u, const VecN& v) {
    for (int i = 0; i < u.n; ++i) u.a[i] -= v.a[i];
    return u;
}
inline VecN operator*(double s, VecN u) {
    for (int i = 0; i < u.n; ++i) u.a[i] *= s;
    return u;
}

// Row-major matrix with fixed kMaxDim stride, rows/cols <= 3.
struct MatNM {
    int rows = 0, cols = 0;
    std::array<double, kMaxDim * kMaxDim> a{};

    static MatNM zeros(int r, int c) {
        MatNM m;
        m.rows = r;
        m.cols = c;
        return m;
    }
    static MatNM identity(int n) {
        MatNM m = zeros(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    double& operator()(int r, int c) { return a[r * kMaxDim + c]; }
    double operator()(int r, int c) const { return a[r * kMaxDim + c]; }

    VecN col(int c) const {
        VecN v = VecN::zeros(rows);
        for (int i = 0; i < rows; ++i) v[i] = (*this)(i, c);
        return v;
    }
    VecN row(int r) const {
        VecN v = VecN::zeros(cols);
        for (int j = 0; j < cols; ++j) v[j] = (*this)(r, j);
        return v;
    }
};

inline VecN operator*(const MatNM& m, const VecN& v) {
    VecN out = VecN::zeros(m.rows);
    for (int i = 0; i < m.rows; ++i) {
        double s = 0;
        for (int j = 0; j < m.cols; ++j) s += m(i, j) * v[j];
        out[i] = s;
    }
    return out;
}

inline MatNM operator*(const MatNM& x, const MatNM& y) {
    MatNM out = MatNM::zeros(x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int k = 0; k < x.cols; ++k) {
            double v = x(i, k);
            if (v == 0.0) continue;
            for (int j = 0; j < y.cols; ++j) out(i, j) += v * y(k, j);
        }
    return out;
}

// Inverse of a square matrix with n <= 3 via the adjugate. det receives the
// determinant; the caller decides what counts as singular.
inline MatNM invert(const MatNM& m, double& det) {
    const int n = m.rows;
    MatNM inv = MatNM::zeros(n, n);
    if (n == 1) {
        det = m(0, 0);
        inv(0, 0) = 1.0 / det;
    } else if (n == 2) {
        det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
        inv(0, 0) = m(1, 1) / det;
        inv(0, 1) = -m(0, 1) / det;
        inv(1, 0) = -m(1, 0) / det;
        inv(1, 1) = m(0, 0) / det;
    } else {
        const double c00 = m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1);
        const double c01 = m(1, 2) * m(2, 0) - m(1, 0) * m(2, 2);
        const double c02 = m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0);
        det = m(0, 0) * c00 + m(0, 1) * c01 + m(0, 2) * c02;
        inv(0, 0) = c00 / det;
        inv(1, 0) = c01 / det;
        inv(2, 0) = c02 / det;
        inv(0, 1) = (m(0, 2) * m(2, 1) - m(0, 1) * m(2, 2)) / det;
        inv(1, 1) = (m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0)) / det;
        inv(2, 1) = (m(0, 1) * m(2, 0) - m(0, 0) * m(2, 1)) / det;
        inv(0, 2) = (m(0, 1) * m(1, 2) - m(0, 2) * m(1, 1)) / det;
        inv(1, 2) = (m(0, 2) * m(1, 0) - m(0, 0) * m(1, 2)) / det;
        inv(2, 2) = (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0)) / det;
    }
    return inv;
}

}  // namespace qsd
