#include "wick/cocycle.hpp"

#include <algorithm>
#include <cmath>

namespace wick {

namespace {

constexpr int kRenormStride = 16;  // determinant-drift rescue for long products

// Ordered product over the crossings of [x, y] with per-leaf factors.
template <typename M, typename Factor>
M crossing_product(const FiniteLamination& lam, const HPoint& x, const HPoint& y,
                   const Factor& factor, const M& unit) {
    if (-mdot(x.v, y.v) - 1.0 < 1e-14) return unit;
    M out = unit;
    int count = 0;
    for (const auto& c : leaves_crossing(lam, {x, y})) {
        double w = lam.weight(c.leaf) * ((c.at_start || c.at_end) ? 0.5 : 1.0);
        out = out * factor(c.oriented, w);
        if (++count % kRenormStride == 0) out = sl2_normalize(out);
    }
    return sl2_normalize(out);
}

Mat2c quake_factor(const Geodesic& oriented, cplx z_times_weight) {
    return exp_sl2(Mat2c(translation_generator(oriented)) * (z_times_weight * 0.5));
}

struct AdsFactor {
    Mat2r neg, pos;
    AdsFactor operator*(const AdsFactor& o) const { return {neg * o.neg, pos * o.pos}; }
};

AdsFactor ads_factor(const Geodesic& oriented, double w) {
    Mat2r x = translation_generator(oriented);
    return {exp_sl2(x * (-0.5 * w)), exp_sl2(x * (0.5 * w))};
}

AdsFactor sl2_normalize(const AdsFactor& f) {
    return {wick::sl2_normalize(f.neg), wick::sl2_normalize(f.pos)};
}

// The generic lifted cocycle.  Band endpoints contribute partial leaf
// rotations measured by the retraction displacement; the middle factor is
// the base cocycle of the Gauss images with the endpoint leaves removed.
template <typename M, typename Factor>
M lifted_product(const FlatDomain& dom, const CtPoint& p, const CtPoint& q,
                 const Factor& factor, const M& unit) {
    const FiniteLamination& lam = dom.lamination();
    HPoint xn(p.N), yn(q.N);

    if (p.kind == CtPoint::Band && q.kind == CtPoint::Band && p.leaf == q.leaf) {
        // same band: rotate by the signed retraction displacement around the
        // leaf oriented with its normal on the far side of the base point
        double s = mdot(q.r - p.r, dom.far_normal(p.leaf));
        const Geodesic& g = lam.geo(p.leaf);
        Geodesic away_base = (mdot(g.normal, dom.far_normal(p.leaf)) > 0) ? g : g.reversed();
        return sl2_normalize(factor(away_base, s));
    }

    M out = unit;
    if (p.kind == CtPoint::Band) {
        const Geodesic& g = lam.geo(p.leaf);
        double side_q = g.side(q.N);
        Geodesic toward_q = (side_q > 0) ? g : g.reversed();
        // distance from r(p) to the band boundary on the q side
        double s = mdot(p.r - dom.rho_minus(p.leaf), dom.far_normal(p.leaf));
        bool q_far = (side_q > 0) == (g.side(dom.basepoint().v) < 0);
        double d = q_far ? lam.weight(p.leaf) - s : s;
        out = out * factor(toward_q, d);
    }

    if (-mdot(xn.v, yn.v) - 1.0 > 1e-14) {
        int count = 0;
        for (const auto& c : leaves_crossing(lam, {xn, yn})) {
            if (c.leaf == p.leaf || c.leaf == q.leaf) continue;  // endpoint bands
            out = out * factor(c.oriented, lam.weight(c.leaf));
            if (++count % kRenormStride == 0) out = sl2_normalize(out);
        }
    }

    if (q.kind == CtPoint::Band) {
        const Geodesic& g = lam.geo(q.leaf);
        double side_p = g.side(p.N);
        Geodesic away_from_p = (side_p > 0) ? g.reversed() : g;
        double s = mdot(q.r - dom.rho_minus(q.leaf), dom.far_normal(q.leaf));
        bool p_far = (side_p > 0) == (g.side(dom.basepoint().v) < 0);
        double d = p_far ? lam.weight(q.leaf) - s : s;
        out = out * factor(away_from_p, d);
    }
    return sl2_normalize(out);
}

}  // namespace

Mat2c bending_cocycle(const FiniteLamination& lam, const HPoint& x, const HPoint& y,
                      double weight_scale) {
    return quake_bend(lam, cplx(0, 1), x, y, weight_scale);
}

Mat2c quake_bend(const FiniteLamination& lam, cplx z, const HPoint& x, const HPoint& y,
                 double weight_scale) {
    auto factor = [&](const Geodesic& g, double w) { return quake_factor(g, z * (w * weight_scale)); };
    return crossing_product<Mat2c>(lam, x, y, factor, Mat2c::id());
}

AdsIsometry ads_cocycle(const FiniteLamination& lam, const HPoint& x, const HPoint& y,
                        double weight_scale) {
    auto factor = [&](const Geodesic& g, double w) { return ads_factor(g, w * weight_scale); };
    AdsFactor f = crossing_product<AdsFactor>(lam, x, y, factor,
                                              AdsFactor{Mat2r::id(), Mat2r::id()});
    return {f.neg, f.pos};
}

Mat2c lifted_bending(const FlatDomain& dom, const CtPoint& p, const CtPoint& q) {
    auto factor = [](const Geodesic& g, double w) { return quake_factor(g, cplx(0, w)); };
    return lifted_product<Mat2c>(dom, p, q, factor, Mat2c::id());
}

AdsIsometry lifted_ads(const FlatDomain& dom, const CtPoint& p, const CtPoint& q) {
    AdsFactor f = lifted_product<AdsFactor>(
        dom, p, q, [](const Geodesic& g, double w) { return ads_factor(g, w); },
        AdsFactor{Mat2r::id(), Mat2r::id()});
    return {f.neg, f.pos};
}

Vec4 bending_map(const FiniteLamination& lam, const HPoint& x) {
    return so31_apply(bending_cocycle(lam, lam.basepoint, x), embed_h2(x.v));
}

Mat2r ads_bending(const FiniteLamination& lam, const HPoint& x) {
    return ads_cocycle(lam, lam.basepoint, x).apply(ads_point_of_h2(x));
}

HPoint earthquake(const FiniteLamination& lam, Side side, const HPoint& x) {
    AdsIsometry b = ads_cocycle(lam, lam.basepoint, x);
    return psl2_act(side == Side::Left ? b.right : b.left, x);
}

namespace {

// Leaves separating the base point from the ideal point xi, in crossing
// order.  Atom leaves with an endpoint at xi separate only on one side of
// xi; they come last, nested by the spans of their far arcs.
std::vector<int> boundary_separators(const FiniteLamination& lam, double xi, int approach) {
    struct Item {
        int leaf;
        bool atom;
        double order;
    };
    std::vector<Item> items;
    const Vec3 base = lam.basepoint.v;
    const Vec3 n = boundary_null(xi);
    Vec3 w = n + mdot(base, n) * base;  // ray direction from the base point toward xi
    w = w * (1.0 / snorm(w));
    for (int i = 0; i < lam.size(); ++i) {
        const Geodesic& g = lam.geo(i);
        double s0 = g.side(base);
        // far arc: boundary of the half-plane not containing the base point.
        // The normal side of an oriented geodesic is bounded by the ccw arc
        // from xi_plus to xi_minus.
        double fa = (s0 > 0) ? g.xi_minus : g.xi_plus;
        double fb = (s0 > 0) ? g.xi_plus : g.xi_minus;
        double span = wrap_angle(fb - fa);
        double off = wrap_angle(xi - fa);
        bool at_start = std::min(off, 2 * kPi - off) < kDisjointEps;
        bool at_end = std::abs(off - span) < kDisjointEps;
        if (at_start || at_end) {
            bool inside = at_start ? (approach > 0) : (approach < 0);
            if (inside) items.push_back({i, true, -span});
        } else if (off > 0 && off < span) {
            double du = mdot(w, g.normal);
            double t = std::atanh(std::clamp(-s0 / du, -1.0 + 1e-15, 1.0 - 1e-15));
            items.push_back({i, false, t});
        }
    }
    std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
        if (a.atom != b.atom) return b.atom;  // strict separators first
        return a.order < b.order;
    });
    std::vector<int> out;
    out.reserve(items.size());
    for (const auto& it : items) out.push_back(it.leaf);
    return out;
}

Mat2r boundary_shear(const FiniteLamination& lam, Side side, double xi, int approach) {
    const Vec3 base = lam.basepoint.v;
    double sign = (side == Side::Left) ? 0.5 : -0.5;
    Mat2r out = Mat2r::id();
    int count = 0;
    for (int leaf : boundary_separators(lam, xi, approach)) {
        const Geodesic& g = lam.geo(leaf);
        // normal toward the ideal point, away from the base point
        Geodesic oriented = (g.side(base) > 0) ? g.reversed() : g;
        out = out * exp_sl2(translation_generator(oriented) * (sign * lam.weight(leaf)));
        if (++count % kRenormStride == 0) out = sl2_normalize(out);
    }
    return sl2_normalize(out);
}

}  // namespace

double earthquake_boundary(const FiniteLamination& lam, Side side, double xi, int approach) {
    return mobius_boundary(boundary_shear(lam, side, xi, approach), xi);
}

std::vector<BoundaryCurvePoint> boundary_curve(const FiniteLamination& lam, double xi) {
    bool atom = false;
    for (int i = 0; i < lam.size(); ++i) {
        if (std::abs(std::remainder(xi - lam.geo(i).xi_minus, 2 * kPi)) < kDisjointEps ||
            std::abs(std::remainder(xi - lam.geo(i).xi_plus, 2 * kPi)) < kDisjointEps)
            atom = true;
    }
    std::vector<BoundaryCurvePoint> out;
    for (int approach : {+1, -1}) {
        BoundaryCurvePoint b;
        b.xi_right = earthquake_boundary(lam, Side::Right, xi, approach);
        b.xi_left = earthquake_boundary(lam, Side::Left, xi, approach);
        b.point = segre_boundary(b.xi_left, b.xi_right);
        out.push_back(b);
        if (!atom) break;
    }
    return out;
}

EarthquakeFailureCase earthquake_failure_case(int n) {
    if (n < 2) throw InvalidInput("earthquake_failure_case: n must be at least 2");
    EarthquakeFailureCase out;
    // ray: the upward imaginary axis from i; leaves l_k = {|z| = e^{1/k}},
    // oriented with their normals into the half-planes {|z| > e^{1/k}}
    Mat2r g = Mat2r::id();
    for (int k = 1; k <= n; ++k) {
        double radius = std::exp(1.0 / k);
        Geodesic lk = Geodesic::from_endpoints(boundary_angle_of_real(radius),
                                               boundary_angle_of_real(-radius));
        g = sl2_normalize(g * exp_sl2(translation_generator(lk)));
        EarthquakeFailureCase::Entry e;
        e.k = k;
        e.trace = std::abs(g.tr());
        e.length = e.trace > 2 ? 2 * std::acosh(e.trace / 2) : 0;
        // fixed points of g on the real axis of the half-plane chart
        double disc = (g.a - g.d) * (g.a - g.d) + 4 * g.b * g.c;
        if (std::abs(g.c) > 1e-14 && disc > 0) {
            double r1 = ((g.a - g.d) - std::sqrt(disc)) / (2 * g.c);
            double r2 = ((g.a - g.d) + std::sqrt(disc)) / (2 * g.c);
            e.fix_lo = std::min(r1, r2);
            e.fix_hi = std::max(r1, r2);
        } else {
            e.fix_lo = e.fix_hi = 0;
        }
        Geodesic linf = Geodesic::from_endpoints(boundary_angle_of_real(-1.0),
                                                 boundary_angle_of_real(1.0));
        e.axis_gap = e.length > 0 ? geodesic_gap(axis_of(g), linf) : 0;
        e.axis_inside = std::min(std::abs(e.fix_lo), std::abs(e.fix_hi)) > 1.0 &&
                        std::max(std::abs(e.fix_lo), std::abs(e.fix_hi)) <= std::exp(1.0) + 1e-9;
        out.entries.push_back(e);
    }
    return out;
}

}  // namespace wick
