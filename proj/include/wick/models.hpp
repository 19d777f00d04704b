#pragma once

#include <optional>
#include <utility>

#include "wick/linalg.hpp"

// Model geometries used throughout: the hyperbolic plane H2 as the unit
// hyperboloid in R^{2,1}, hyperbolic 3-space H3 in R^{3,1}, de Sitter space
// X1 (the q=+1 quadric of R^{3,1}), anti-de Sitter space Xm1 (SL(2,R) with
// q = -det, up to sign), their boundaries, isometry groups and dualities.
//
// Conventions, fixed once and verified by tests:
//  * S^1_inf carries the counterclockwise orientation as boundary of H2; the
//    null ray of the boundary angle t is (1, cos t, sin t).
//  * A geodesic stores its ideal endpoints in order (xi_minus -> xi_plus);
//    its unit normal v satisfies det[n(xi_minus) n(xi_plus) v] > 0.  The
//    normal points into the half-plane lying on the LEFT of the oriented
//    geodesic.
//  * sl(2,R) <-> R^{2,1}: X = [[x11,x12],[x21,-x11]] maps to
//    ((x12-x21)/2, (x12+x21)/2, x11).  This is a linear isometry for
//    eta(X,Y) = tr(XY)/2, equivariant for conjugation vs. SO+(2,1), and it
//    takes the unit translation generator of an oriented geodesic to the
//    normal above.  Worked matrices:
//      - geodesic (pi -> 0), the x2=0 branch oriented "upward": the
//        translation generator is H = diag(1,-1) (z -> e^{2t} z upstairs,
//        translation length 2t), and H maps to (0,0,1).
//      - the positive (counterclockwise) rotation generator around
//        (1,0,0) is K = [[0,1],[-1,0]], mapping to (1,0,0); exp(t K)
//        rotates tangent vectors at the fixed point by +2t.
//      - for an oriented geodesic l in the AdS plane P(Id), the pair
//        (exp(-tX), exp(tX)) with X the translation generator of l fixes l
//        pointwise and moves the positive-normal side of P(Id) toward the
//        future for t > 0.
//  * The rotation generator around an oriented geodesic (as a line of H3)
//    is X_rot = (i/2) X_trans; exp(2 pi X_rot) = Id in PSL(2,C).
//  * A leaf crossed by an arc is oriented with its normal toward the side
//    of the terminal endpoint; the sum of the resulting generators is then
//    the derivative of the quake-bend cocycle, and the flat translation
//    cocycle pairs with it without a sign.

namespace wick {

inline constexpr double kPi = 3.14159265358979323846;

inline double wrap_angle(double t) {
    t = std::fmod(t, 2 * kPi);
    if (t < 0) t += 2 * kPi;
    return t;
}

// ---------------------------------------------------------------------------
// H2 in the hyperboloid model

struct HPoint {
    Vec3 v{1, 0, 0};

    HPoint() = default;
    explicit HPoint(const Vec3& w, double tol = 1e-6) : v(w) {
        double q = mdot(v, v);
        if (std::abs(q + 1.0) > tol || v[0] <= 0.0)
            throw InvalidInput("HPoint: not a future unit timelike vector");
        v = v * (1.0 / std::sqrt(-q));
    }
    static HPoint origin() { return HPoint(); }
};

inline HPoint h2_polar(double r, double theta) {
    return HPoint(Vec3{std::cosh(r), std::sinh(r) * std::cos(theta),
                       std::sinh(r) * std::sin(theta)});
}

inline double h2_distance(const HPoint& x, const HPoint& y) {
    double c = -mdot(x.v, y.v);
    return std::acosh(std::max(1.0, c));
}

// Null ray of the ideal point at boundary angle t.
inline Vec3 boundary_null(double t) { return {1.0, std::cos(t), std::sin(t)}; }

inline double boundary_angle(const Vec3& n) {
    return wrap_angle(std::atan2(n[2] / n[0], n[1] / n[0]));
}

// Unit tangent at x toward y.
inline Vec3 h2_direction(const HPoint& x, const HPoint& y) {
    Vec3 w = y.v + mdot(x.v, y.v) * x.v;  // projection of y onto the tangent space at x
    double n = snorm(w);
    if (n < 1e-14) throw InvalidInput("h2_direction: coincident points");
    return w * (1.0 / n);
}

inline HPoint h2_exp(const HPoint& x, const Vec3& unit_tangent, double t) {
    return HPoint(std::cosh(t) * x.v + std::sinh(t) * unit_tangent);
}

// Parallel transport of a tangent vector w at y along [y,x] to x.
inline Vec3 h2_parallel_transport(const HPoint& y, const HPoint& x, const Vec3& w) {
    double c = -mdot(x.v, y.v);
    if (c < 1.0 + 1e-14) return w;
    Vec3 ty = h2_direction(y, x);                     // tangent at y toward x
    Vec3 tx = h2_direction(x, y) * -1.0;              // continuation at x
    Vec3 ny = mcross(y.v, ty);                        // completes the frame at y
    Vec3 nx = mcross(x.v, tx);
    double a = mdot(w, ty), b = mdot(w, ny);
    return a * tx + b * nx;
}

// ---------------------------------------------------------------------------
// Geodesics of H2

struct Geodesic {
    double xi_minus = 0.0;  // boundary angles
    double xi_plus = kPi;
    Vec3 normal{0, 0, 1};   // unit spacelike; det[n(xi-) n(xi+) normal] > 0

    static Geodesic from_endpoints(double xm, double xp) {
        xm = wrap_angle(xm);
        xp = wrap_angle(xp);
        Vec3 a = boundary_null(xm), b = boundary_null(xp);
        Vec3 u = mcross(a, b);
        double n = snorm(u);
        if (n < 1e-12) throw InvalidInput("Geodesic: coincident ideal endpoints");
        Geodesic g;
        g.xi_minus = xm;
        g.xi_plus = xp;
        g.normal = u * (1.0 / n);
        return g;
    }

    static Geodesic from_normal(const Vec3& u_in) {
        double n = snorm(u_in);
        if (n < 1e-12) throw InvalidInput("Geodesic: normal not spacelike");
        Vec3 u = u_in * (1.0 / n);
        // null directions of the orthogonal (timelike) plane
        Vec3 e0{1, 0, 0};
        Vec3 t = e0 - mdot(e0, u) * u;  // project e0 onto u-perp
        t = t * (1.0 / tnorm(t));
        Vec3 s = mcross(u, t);
        s = s * (1.0 / snorm(s));
        double ta = boundary_angle(t + s);
        double tb = boundary_angle(t - s);
        Geodesic g = from_endpoints(ta, tb);
        if (mdot(g.normal, u) < 0) g = from_endpoints(tb, ta);
        g.normal = u;
        return g;
    }

    Geodesic reversed() const {
        Geodesic g;
        g.xi_minus = xi_plus;
        g.xi_plus = xi_minus;
        g.normal = -normal;
        return g;
    }

    bool contains(const HPoint& x, double tol = 1e-9) const {
        return std::abs(mdot(x.v, normal)) < tol;
    }

    // Signed "side" quantity: sinh of the signed distance, positive on the
    // half-plane the normal points into (the left of the orientation).
    double side(const Vec3& x) const { return mdot(x, normal); }

    // Point of the geodesic closest to z.
    HPoint foot(const HPoint& z) const {
        Vec3 w = z.v - mdot(z.v, normal) * normal;
        return HPoint(w * (1.0 / tnorm(w)));
    }
};

inline double h2_geodesic_distance(const HPoint& x, const Geodesic& l) {
    return std::asinh(std::abs(mdot(x.v, l.normal)));
}

// Distance between two disjoint geodesics (0 if they meet).
inline double geodesic_gap(const Geodesic& a, const Geodesic& b) {
    double c = std::abs(mdot(a.normal, b.normal));
    return c > 1.0 ? std::acosh(c) : 0.0;
}

// ---------------------------------------------------------------------------
// sl(2,R) <-> R^{2,1} and PSL(2,R) -> SO+(2,1)

inline Vec3 sl2_to_mink(const Mat2r& x) {
    return {0.5 * (x.b - x.c), 0.5 * (x.b + x.c), x.a};
}

inline Mat2r mink_to_sl2(const Vec3& v) {
    return {v[2], v[0] + v[1], v[1] - v[0], -v[2]};
}

inline Mat3 so21_of(const Mat2r& a_in) {
    Mat2r a = sl2_normalize(a_in);
    Mat2r ai = a.inverse();
    Mat3 r;
    const Vec3 basis[3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    for (int j = 0; j < 3; ++j) {
        Vec3 col = sl2_to_mink(a * mink_to_sl2(basis[j]) * ai);
        for (int i = 0; i < 3; ++i) r.m[i][j] = col[i];
    }
    return r;
}

// Unit positive translation generator of an oriented geodesic; exp(tX) is
// the hyperbolic transformation with axis l and translation length 2t.
inline Mat2r translation_generator(const Geodesic& l) { return mink_to_sl2(l.normal); }

// Standard rotation generator: exp(2 pi X_rot) = Id in PSL(2,C).
inline Mat2c rotation_generator(const Geodesic& l) {
    return Mat2c(translation_generator(l)) * cplx(0.0, 0.5);
}

inline std::pair<Mat2r, Mat2c> generators(const Geodesic& l) {
    Mat2r xt = translation_generator(l);
    return {xt, Mat2c(xt) * cplx(0.0, 0.5)};
}

// Translation length of a hyperbolic element (0 for non-hyperbolic).
inline double translation_length(const Mat2r& g_in) {
    Mat2r g = sl2_normalize(g_in);
    double h = std::abs(g.tr()) / 2.0;
    return h > 1.0 ? 2.0 * std::acosh(h) : 0.0;
}

// Unit positive generator of the hyperbolic 1-parameter group containing g:
// g = +-(cosh(L/2) Id + sinh(L/2) X).
inline Mat2r hyperbolic_generator(const Mat2r& g_in) {
    Mat2r g = sl2_normalize(g_in);
    if (g.tr() < 0) g = -g;
    double h = g.tr() / 2.0;
    if (h <= 1.0 + 1e-12) throw InvalidInput("hyperbolic_generator: element not hyperbolic");
    double sh = std::sqrt(h * h - 1.0);
    Mat2r x = g;
    x.a -= h;
    x.d -= h;
    return x * (1.0 / sh);
}

// Axis of a hyperbolic element, oriented toward the attracting fixed point.
inline Geodesic axis_of(const Mat2r& g) {
    return Geodesic::from_normal(sl2_to_mink(hyperbolic_generator(g)));
}

// ---------------------------------------------------------------------------
// Upper half-plane chart (used to assemble Fuchsian data)

// z = x + iy  ->  ((x^2+y^2+1)/2y, (x^2+y^2-1)/2y, -x/y)
inline HPoint uhp_to_h2(cplx z) {
    double x = z.real(), y = z.imag();
    if (y <= 0) throw InvalidInput("uhp_to_h2: not in the upper half plane");
    double q = x * x + y * y;
    return HPoint(Vec3{(q + 1) / (2 * y), (q - 1) / (2 * y), -x / y});
}

inline cplx mobius(const Mat2r& m, cplx z) {
    return (m.a * z + m.b) / (m.c * z + m.d);
}

// Boundary angle <-> homogeneous coordinates (v1, v2), v1/v2 = -cot(theta/2),
// of the boundary point of the half-plane chart.
inline void boundary_vec2(double theta, double& v1, double& v2) {
    double h = 0.5 * theta;
    v1 = -std::cos(h);
    v2 = std::sin(h);
}

inline double boundary_theta_of_rvec(double v1, double v2) {
    return wrap_angle(2.0 * std::atan2(-v2, v1));
}

// Action of PSL(2,R) on boundary angles.
inline double mobius_boundary(const Mat2r& m, double theta) {
    double v1, v2;
    boundary_vec2(theta, v1, v2);
    return boundary_theta_of_rvec(m.a * v1 + m.b * v2, m.c * v1 + m.d * v2);
}

inline double boundary_angle_of_real(double r) { return boundary_theta_of_rvec(r, 1.0); }
inline double boundary_angle_of_infinity() { return 0.0; }

// ---------------------------------------------------------------------------
// H3 in R^{3,1}, PSL(2,C) action through Hermitian matrices

inline Vec4 embed_h2(const Vec3& v) { return {v[0], v[1], v[2], 0.0}; }

// Positive normal of H2 inside H3; the ideal point of the normal ray at x
// is the null direction x + kH3Normal.
inline const Vec4 kH3Normal{0, 0, 0, 1};

inline Mat2c herm_of(const Vec4& x) {
    return {cplx(x[0] + x[1], 0), cplx(-x[2], x[3]),
            cplx(-x[2], -x[3]), cplx(x[0] - x[1], 0)};
}

inline Vec4 vec_of_herm(const Mat2c& m) {
    return {0.5 * (m.a.real() + m.d.real()), 0.5 * (m.a.real() - m.d.real()),
            -m.b.real(), m.b.imag()};
}

// Linear isometry of R^{3,1} induced by A in SL(2,C); works on points of H3,
// X1 and null vectors alike.
inline Vec4 so31_apply(const Mat2c& a, const Vec4& x) {
    return vec_of_herm(a * herm_of(x) * a.adjoint());
}

inline double h3_distance(const Vec4& x, const Vec4& y) {
    return std::acosh(std::max(1.0, -mdot4(x, y)));
}

// ---------------------------------------------------------------------------
// Model points and exponential maps

enum class Model { H2, H3, X0, X1, Xm1, S2inf, AdSBoundary };

inline double model_inner(Model m, const Vec3& u, const Vec3& v) {
    if (m != Model::H2 && m != Model::X0) throw InvalidInput("inner: model takes 4-vectors or matrices");
    return mdot(u, v);
}
inline double model_inner(Model m, const Vec4& u, const Vec4& v) {
    if (m != Model::H3 && m != Model::X1 && m != Model::S2inf)
        throw InvalidInput("inner: model takes 3-vectors or matrices");
    return mdot4(u, v);
}

// eta(X,Y) = (tr(XY) - tr X tr Y)/2, the polarization of q(A) = -det A.
// Restricted to sl(2,R) this is tr(XY)/2.
inline double ads_eta(const Mat2r& x, const Mat2r& y) {
    double trxy = x.a * y.a + x.b * y.c + x.c * y.b + x.d * y.d;
    return 0.5 * (trxy - x.tr() * y.tr());
}
inline double ads_q(const Mat2r& x) { return -x.det(); }

// H3 / X1 exponential map; the tangent must be orthogonal to the base.
inline Vec4 exp_map4(Model m, const Vec4& base, const Vec4& tangent, double t,
                     double ortho_tol = 1e-9) {
    if (std::abs(mdot4(base, tangent)) > ortho_tol * (1 + enorm4(base) * enorm4(tangent)))
        throw InvalidInput("exp_map: tangent not orthogonal to base point");
    double q = mdot4(tangent, tangent);
    if (m == Model::H3) {
        if (q <= 0) throw InvalidInput("exp_map: H3 tangent must be spacelike");
        double s = std::sqrt(q);
        return std::cosh(t * s) * base + (std::sinh(t * s) / s) * tangent;
    }
    if (m != Model::X1) throw InvalidInput("exp_map: expected H3 or X1");
    if (q > kClassEps) {
        double s = std::sqrt(q);
        return std::cos(t * s) * base + (std::sin(t * s) / s) * tangent;
    }
    if (q < -kClassEps) {
        double s = std::sqrt(-q);
        return std::cosh(t * s) * base + (std::sinh(t * s) / s) * tangent;
    }
    return base + t * tangent;
}

// Xm1 exponential map in the matrix model.
inline Mat2r ads_exp(const Mat2r& base, const Mat2r& tangent, double t,
                     double ortho_tol = 1e-9) {
    if (std::abs(ads_eta(base, tangent)) > ortho_tol * (1 + fnorm(base) * fnorm(tangent)))
        throw InvalidInput("ads_exp: tangent not orthogonal to base point");
    double q = ads_q(tangent);
    if (q > kClassEps) {
        double s = std::sqrt(q);
        return base * std::cosh(t * s) + tangent * (std::sinh(t * s) / s);
    }
    if (q < -kClassEps) {
        double s = std::sqrt(-q);
        return base * std::cos(t * s) + tangent * (std::sin(t * s) / s);
    }
    return base + tangent * t;
}

// ---------------------------------------------------------------------------
// Anti-de Sitter model
//
// Points of Xm1 are matrices with q = -det = -1 up to sign.  The isometry
// (A,B) acts by Y -> A Y B^{-1}.  P(Id), the plane dual to Id, consists of
// the traceless points: the order-two elliptic elements.  The natural
// isometry I : P(Id) -> H2 sends a rotation by pi to its fixed point; its
// inverse is mink_to_sl2 restricted to the hyperboloid.

inline Mat2r ads_point_of_h2(const HPoint& x) { return mink_to_sl2(x.v); }

inline HPoint h2_of_ads_point(const Mat2r& m_in) {
    Mat2r m = sl2_normalize(m_in);
    if (std::abs(m.tr()) > 1e-8) throw InvalidInput("h2_of_ads_point: not on P(Id)");
    Vec3 v = sl2_to_mink(m);
    if (v[0] < 0) v = -v;
    return HPoint(v);
}

struct AdsIsometry {
    Mat2r left, right;  // Y -> left * Y * right^{-1}
    Mat2r apply(const Mat2r& y) const { return left * y * right.inverse(); }
    AdsIsometry operator*(const AdsIsometry& o) const { return {left * o.left, right * o.right}; }
    AdsIsometry inverse() const { return {left.inverse(), right.inverse()}; }
};

// Rotations around an oriented spacelike geodesic l of P(Id): the pair
// (exp(-tX), exp(tX)) with X the translation generator of l.  It fixes l
// pointwise and for t > 0 it moves the positive-normal side of P(Id)
// toward the future.
inline AdsIsometry ads_rotation(const Geodesic& l, double t) {
    Mat2r x = translation_generator(l);
    return {exp_sl2(x * (-t)), exp_sl2(x * t)};
}

// Spacelike planes are represented by their dual points.  Two planes meeting
// along a spacelike geodesic have |eta| > 1 between unit lifts; the angle is
// the distance between the dual points.
inline double ads_plane_angle(const Mat2r& p1_in, const Mat2r& p2_in) {
    Mat2r p1 = sl2_normalize(p1_in), p2 = sl2_normalize(p2_in);
    double c = std::abs(ads_eta(p1, p2));
    if (c < 1.0 - 1e-12) throw InvalidInput("ads_plane_angle: planes do not meet along a spacelike geodesic");
    return std::acosh(std::max(1.0, c));
}

// A spacelike geodesic of Xm1 given by a point and a unit spacelike tangent.
struct AdsGeodesic {
    Mat2r p;  // q(p) = -1
    Mat2r u;  // q(u) = +1, eta(p,u) = 0
    Mat2r at(double t) const { return p * std::cosh(t) + u * std::sinh(t); }
};

namespace detail {
// eta-orthonormal basis of M2(R): Id, K (timelike), P, H (spacelike).
inline const Mat2r kAdsBasis[4] = {{1, 0, 0, 1}, {0, 1, -1, 0}, {0, 1, 1, 0}, {1, 0, 0, -1}};
inline const double kAdsSig[4] = {-1.0, -1.0, 1.0, 1.0};

inline std::array<double, 4> ads_coords(const Mat2r& m) {
    std::array<double, 4> c{};
    for (int i = 0; i < 4; ++i) c[i] = ads_eta(m, kAdsBasis[i]) / kAdsSig[i];
    return c;
}
inline Mat2r ads_from_coords(const std::array<double, 4>& c) {
    Mat2r r{0, 0, 0, 0};
    for (int i = 0; i < 4; ++i) r = r + kAdsBasis[i] * c[i];
    return r;
}
}  // namespace detail

// Dual geodesic l*: Xm1 cut by the eta-orthogonal complement of span(l).
inline AdsGeodesic ads_dual_geodesic(const AdsGeodesic& l) {
    auto cp = detail::ads_coords(l.p);
    auto cu = detail::ads_coords(l.u);
    // complement of span(p,u) via Gram-Schmidt on the basis directions
    std::array<std::array<double, 4>, 2> out{};
    int found = 0;
    for (int i = 0; i < 4 && found < 2; ++i) {
        std::array<double, 4> w{};
        w[i] = 1.0;
        auto proj = [&](const std::array<double, 4>& b, double bsig) {
            double s = 0;
            for (int k = 0; k < 4; ++k) s += detail::kAdsSig[k] * w[k] * b[k];
            s /= bsig;
            for (int k = 0; k < 4; ++k) w[k] -= s * b[k];
        };
        proj(cp, -1.0);
        double qu = 0;
        for (int k = 0; k < 4; ++k) qu += detail::kAdsSig[k] * cu[k] * cu[k];
        proj(cu, qu);
        for (int j = 0; j < found; ++j) {
            double qo = 0;
            for (int k = 0; k < 4; ++k) qo += detail::kAdsSig[k] * out[j][k] * out[j][k];
            proj(out[j], qo);
        }
        double q = 0;
        for (int k = 0; k < 4; ++k) q += detail::kAdsSig[k] * w[k] * w[k];
        if (std::abs(q) < 1e-10) continue;
        double s = 1.0 / std::sqrt(std::abs(q));
        for (int k = 0; k < 4; ++k) w[k] *= s;
        out[found++] = w;
    }
    if (found != 2) throw InvalidInput("ads_dual_geodesic: degenerate span");
    Mat2r a = detail::ads_from_coords(out[0]);
    Mat2r b = detail::ads_from_coords(out[1]);
    if (ads_q(a) > 0) std::swap(a, b);  // a timelike (the point), b spacelike
    if (ads_q(a) > -0.5 || ads_q(b) < 0.5)
        throw InvalidInput("ads_dual_geodesic: dual line is not spacelike");
    return {sl2_normalize(a * (1.0 / std::sqrt(-ads_q(a))) * 1.0), b * (1.0 / std::sqrt(ads_q(b)))};
}

// ---------------------------------------------------------------------------
// Boundary of Xm1 via the modified Segre embedding S(v,w) = [v (Ew)^T]

inline const Mat2r kQuarterTurn{0, -1, 1, 0};  // E, rotation by pi/2 of R^2

inline Mat2r segre_boundary(double xi_left, double xi_right) {
    double v1, v2, w1, w2;
    boundary_vec2(xi_left, v1, v2);
    boundary_vec2(xi_right, w1, w2);
    double e1 = -w2, e2 = w1;  // E w
    return {v1 * e1, v1 * e2, v2 * e1, v2 * e2};
}

// Inverse of the Segre embedding on rank-one matrices.
inline std::pair<double, double> segre_split(const Mat2r& m) {
    double c1 = m.a * m.a + m.c * m.c, c2 = m.b * m.b + m.d * m.d;
    double v1, v2;
    if (c1 >= c2) { v1 = m.a; v2 = m.c; } else { v1 = m.b; v2 = m.d; }
    double n = v1 * v1 + v2 * v2;
    // u = M^T v / |v|^2, w = -E u
    double u1 = (m.a * v1 + m.c * v2) / n;
    double u2 = (m.b * v1 + m.d * v2) / n;
    double w1 = u2, w2 = -u1;
    return {boundary_theta_of_rvec(v1, v2), boundary_theta_of_rvec(w1, w2)};
}

// ---------------------------------------------------------------------------
// de Sitter helpers

// Dual point of the plane of H3 through x with unit normal n is n itself;
// the plane dual to v in X1 is v-perp cap H3.
inline bool x1_plane_contains(const Vec4& v, const Vec4& x, double tol = 1e-9) {
    return std::abs(mdot4(v, x)) < tol;
}

}  // namespace wick
