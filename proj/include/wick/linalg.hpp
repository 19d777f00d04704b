#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

// Small fixed-size linear algebra for the Minkowski spaces R^{2,1} and
// R^{3,1} and for 2x2 real/complex matrices (sl2 / SL2 values).  Everything
// here is a plain value type; no dynamic allocation.

namespace wick {

using cplx = std::complex<double>;

struct InvalidInput : std::runtime_error {
    explicit InvalidInput(const std::string& what) : std::runtime_error(what) {}
};

// ---------------------------------------------------------------------------
// R^{2,1}

struct Vec3 {
    double c[3]{0.0, 0.0, 0.0};

    Vec3() = default;
    Vec3(double a, double b, double d) : c{a, b, d} {}

    double operator[](int i) const { return c[i]; }
    double& operator[](int i) { return c[i]; }

    Vec3 operator+(const Vec3& o) const { return {c[0] + o.c[0], c[1] + o.c[1], c[2] + o.c[2]}; }
    Vec3 operator-(const Vec3& o) const { return {c[0] - o.c[0], c[1] - o.c[1], c[2] - o.c[2]}; }
    Vec3 operator-() const { return {-c[0], -c[1], -c[2]}; }
    Vec3 operator*(double s) const { return {c[0] * s, c[1] * s, c[2] * s}; }
    Vec3& operator+=(const Vec3& o) {
        c[0] += o.c[0]; c[1] += o.c[1]; c[2] += o.c[2];
        return *this;
    }
    Vec3& operator-=(const Vec3& o) {
        c[0] -= o.c[0]; c[1] -= o.c[1]; c[2] -= o.c[2];
        return *this;
    }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

// Minkowski form -x0 y0 + x1 y1 + x2 y2.
inline double mdot(const Vec3& a, const Vec3& b) {
    return -a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

inline double enorm(const Vec3& a) {
    return std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]);
}

// Norm of a spacelike vector.
inline double snorm(const Vec3& a) {
    double q = mdot(a, a);
    return q > 0.0 ? std::sqrt(q) : 0.0;
}

// Norm of a timelike vector.
inline double tnorm(const Vec3& a) {
    double q = mdot(a, a);
    return q < 0.0 ? std::sqrt(-q) : 0.0;
}

// Minkowski cross product: <mcross(a,b), w> = det[a b w] for all w.
inline Vec3 mcross(const Vec3& a, const Vec3& b) {
    return {-(a[1] * b[2] - a[2] * b[1]),
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0]};
}

enum class Causal { Spacelike, Timelike, Null };

inline constexpr double kClassEps = 1e-9;

inline Causal classify(const Vec3& v, double eps = kClassEps) {
    double q = mdot(v, v);
    if (q > eps) return Causal::Spacelike;
    if (q < -eps) return Causal::Timelike;
    return Causal::Null;
}

// ---------------------------------------------------------------------------
// R^{3,1}

struct Vec4 {
    double c[4]{0.0, 0.0, 0.0, 0.0};

    Vec4() = default;
    Vec4(double a, double b, double d, double e) : c{a, b, d, e} {}

    double operator[](int i) const { return c[i]; }
    double& operator[](int i) { return c[i]; }

    Vec4 operator+(const Vec4& o) const {
        return {c[0] + o.c[0], c[1] + o.c[1], c[2] + o.c[2], c[3] + o.c[3]};
    }
    Vec4 operator-(const Vec4& o) const {
        return {c[0] - o.c[0], c[1] - o.c[1], c[2] - o.c[2], c[3] - o.c[3]};
    }
    Vec4 operator-() const { return {-c[0], -c[1], -c[2], -c[3]}; }
    Vec4 operator*(double s) const { return {c[0] * s, c[1] * s, c[2] * s, c[3] * s}; }
};

inline Vec4 operator*(double s, const Vec4& v) { return v * s; }

inline double mdot4(const Vec4& a, const Vec4& b) {
    return -a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3];
}

inline double enorm4(const Vec4& a) {
    return std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2] + a[3] * a[3]);
}

// ---------------------------------------------------------------------------
// 2x2 matrices

struct Mat2r {
    double a = 1.0, b = 0.0, c = 0.0, d = 1.0;

    Mat2r() = default;
    Mat2r(double a_, double b_, double c_, double d_) : a(a_), b(b_), c(c_), d(d_) {}

    static Mat2r id() { return {1, 0, 0, 1}; }

    double det() const { return a * d - b * c; }
    double tr() const { return a + d; }
    Mat2r inverse() const {
        double dt = det();
        return {d / dt, -b / dt, -c / dt, a / dt};
    }
    Mat2r transpose() const { return {a, c, b, d}; }

    Mat2r operator*(const Mat2r& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d,
                c * o.a + d * o.c, c * o.b + d * o.d};
    }
    Mat2r operator+(const Mat2r& o) const { return {a + o.a, b + o.b, c + o.c, d + o.d}; }
    Mat2r operator-(const Mat2r& o) const { return {a - o.a, b - o.b, c - o.c, d - o.d}; }
    Mat2r operator-() const { return {-a, -b, -c, -d}; }
    Mat2r operator*(double s) const { return {a * s, b * s, c * s, d * s}; }
};

inline Mat2r operator*(double s, const Mat2r& m) { return m * s; }

struct Mat2c {
    cplx a{1, 0}, b{0, 0}, c{0, 0}, d{1, 0};

    Mat2c() = default;
    Mat2c(cplx a_, cplx b_, cplx c_, cplx d_) : a(a_), b(b_), c(c_), d(d_) {}
    explicit Mat2c(const Mat2r& m) : a(m.a), b(m.b), c(m.c), d(m.d) {}

    static Mat2c id() { return {{1, 0}, {0, 0}, {0, 0}, {1, 0}}; }

    cplx det() const { return a * d - b * c; }
    cplx tr() const { return a + d; }
    Mat2c inverse() const {
        cplx dt = det();
        return {d / dt, -b / dt, -c / dt, a / dt};
    }
    Mat2c adjoint() const { return {std::conj(a), std::conj(c), std::conj(b), std::conj(d)}; }

    Mat2c operator*(const Mat2c& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d,
                c * o.a + d * o.c, c * o.b + d * o.d};
    }
    Mat2c operator+(const Mat2c& o) const { return {a + o.a, b + o.b, c + o.c, d + o.d}; }
    Mat2c operator-(const Mat2c& o) const { return {a - o.a, b - o.b, c - o.c, d - o.d}; }
    Mat2c operator-() const { return {-a, -b, -c, -d}; }
    Mat2c operator*(cplx s) const { return {a * s, b * s, c * s, d * s}; }
};

inline Mat2c operator*(cplx s, const Mat2c& m) { return m * s; }

inline double fnorm(const Mat2r& m) {
    return std::sqrt(m.a * m.a + m.b * m.b + m.c * m.c + m.d * m.d);
}
inline double fnorm(const Mat2c& m) {
    return std::sqrt(std::norm(m.a) + std::norm(m.b) + std::norm(m.c) + std::norm(m.d));
}

// Rescale by det^{-1/2}; determinant must be positive (real case) resp.
// nonzero (complex case).
inline Mat2r sl2_normalize(const Mat2r& m) {
    double dt = m.det();
    if (dt <= 0.0) throw InvalidInput("sl2_normalize: nonpositive determinant");
    double s = 1.0 / std::sqrt(dt);
    return m * s;
}
inline Mat2c sl2_normalize(const Mat2c& m) {
    cplx dt = m.det();
    if (std::abs(dt) == 0.0) throw InvalidInput("sl2_normalize: singular matrix");
    cplx s = 1.0 / std::sqrt(dt);
    return m * s;
}

// Distance in PSL: matrices are identified up to overall sign.
inline double psl_dist(const Mat2r& x, const Mat2r& y) {
    return std::min(fnorm(x - y), fnorm(x + y));
}
inline double psl_dist(const Mat2c& x, const Mat2c& y) {
    return std::min(fnorm(x - y), fnorm(x + y));
}

namespace detail {
// cosh(mu) and sinh(mu)/mu from mu^2, stable near zero.
inline void cosh_sinhc(cplx mu2, cplx& ch, cplx& shc) {
    if (std::abs(mu2) < 1e-8) {
        ch = 1.0 + mu2 * (0.5 + mu2 * (1.0 / 24.0 + mu2 / 720.0));
        shc = 1.0 + mu2 * (1.0 / 6.0 + mu2 * (1.0 / 120.0 + mu2 / 5040.0));
    } else {
        cplx mu = std::sqrt(mu2);
        ch = std::cosh(mu);
        shc = std::sinh(mu) / mu;
    }
}
}  // namespace detail

// Closed-form exponential of a traceless 2x2 matrix, by the sign of
// -det X = tr(X^2)/2 (hyperbolic / elliptic / parabolic).
inline Mat2c exp_sl2(const Mat2c& x) {
    cplx ch, shc;
    detail::cosh_sinhc(-x.det(), ch, shc);
    Mat2c r = x * shc;
    r.a += ch;
    r.d += ch;
    return r;
}

inline Mat2r exp_sl2(const Mat2r& x) {
    double k = -x.det();  // = eta(X,X) for traceless X
    double ch, shc;
    if (std::abs(k) < 1e-8) {
        ch = 1.0 + k * (0.5 + k / 24.0);
        shc = 1.0 + k * (1.0 / 6.0 + k / 120.0);
    } else if (k > 0.0) {
        double s = std::sqrt(k);
        ch = std::cosh(s);
        shc = std::sinh(s) / s;
    } else {
        double w = std::sqrt(-k);
        ch = std::cos(w);
        shc = std::sin(w) / w;
    }
    Mat2r r = x * shc;
    r.a += ch;
    r.d += ch;
    return r;
}

// ---------------------------------------------------------------------------
// 3x3 matrices acting on R^{2,1}

struct Mat3 {
    double m[3][3]{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};

    static Mat3 id() { return {}; }

    Vec3 operator*(const Vec3& v) const {
        Vec3 r;
        for (int i = 0; i < 3; ++i)
            r[i] = m[i][0] * v[0] + m[i][1] * v[1] + m[i][2] * v[2];
        return r;
    }
    Mat3 operator*(const Mat3& o) const {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                double s = 0;
                for (int k = 0; k < 3; ++k) s += m[i][k] * o.m[k][j];
                r.m[i][j] = s;
            }
        return r;
    }
};

}  // namespace wick
