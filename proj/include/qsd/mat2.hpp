#pragma once

#include <array>
#include <complex>

namespace qsd {

using cplx = std::complex<double>;

// Complex 2x2 matrix, row-major storage [00, 01, 10, 11].
struct Mat2 {
    std::array<cplx, 4> a{};

    static Mat2 zero() { return {}; }
    static Mat2 identity() { return {{cplx(1.0), cplx(0.0), cplx(0.0), cplx(1.0)}}; }
    static Mat2 diag(cplx d0, cplx d1) { return {{d0, cplx(0.0), cplx(0.0), d1}}; }

    cplx& operator()(int r, int c) { return a[2 * r + c]; }
    const cplx& operator()(int r, int c) const { return a[2 * r + c]; }

    Mat2 dagger() const {
        return {{std::conj(a[0]), std::conj(a[2]), std::conj(a[1]), std::conj(a[3])}};
    }
    cplx trace() const { return a[0] + a[3]; }

    Mat2& operator+=(const Mat2& o) {
        for (int i = 0; i < 4; ++i) a[i] += o.a[i];
        return *this;
    }
    Mat2& operator-=(const Mat2& o) {
        for (int i = 0; i < 4; ++i) a[i] -= o.a[i];
        return *this;
    }
};

inline Mat2 operator+(Mat2 x, const Mat2& y) { return x += y; }
inline Mat2 operator-(Mat2 x, const Mat2& y) { return x -= y; }

inline Mat2 operator*(cplx s, Mat2 m) {
    for (auto& v : m.a) v *= s;
    return m;
}
inline Mat2 operator*(double s, Mat2 m) { return cplx(s) * m; }

inline Mat2 operator*(const Mat2& x, const Mat2& y) {
    Mat2 r;
    r.a[0] = x.a[0] * y.a[0] + x.a[1] * y.a[2];
    r.a[1] = x.a[0] * y.a[1] + x.a[1] * y.a[3];
    r.a[2] = x.a[2] * y.a[0] + x.a[3] * y.a[2];
    r.a[3] = x.a[2] * y.a[1] + x.a[3] * y.a[3];
    return r;
}

inline double max_abs(const Mat2& m) {
    double r = 0;
    for (const auto& v : m.a) r = std::max(r, std::abs(v));
    return r;
}

inline Mat2 pauli_x() { return {{cplx(0.0), cplx(1.0), cplx(1.0), cplx(0.0)}}; }
inline Mat2 pauli_y() { return {{cplx(0.0), cplx(0.0, -1.0), cplx(0.0, 1.0), cplx(0.0)}}; }
inline Mat2 pauli_z() { return {{cplx(1.0), cplx(0.0), cplx(0.0), cplx(-1.0)}}; }

}  // namespace qsd
