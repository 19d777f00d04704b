#include "wick/rescaling.hpp"

#include <algorithm>
#include <cmath>

#include "wick/parallel.hpp"

namespace wick {

std::string target_name(Target t) {
    switch (t) {
        case Target::Hyp: return "hyp";
        case Target::DS: return "ds";
        case Target::AdS: return "ads";
    }
    return "?";
}

Vec4 wick_develop(const FlatDomain& dom, const CtPoint& p) {
    if (!(p.T > 1.0)) throw InvalidInput("wick_develop: requires T > 1");
    Mat2c b = lifted_bending(dom, dom.base_ct_point(), p);
    Vec4 base = so31_apply(b, embed_h2(p.N));
    Vec4 normal = so31_apply(b, kH3Normal);
    double d = std::atanh(1.0 / p.T);
    return std::cosh(d) * base + std::sinh(d) * normal;
}

double hyp_boundary_distance(const CtPoint& p) {
    if (!(p.T > 1.0)) throw InvalidInput("hyp_boundary_distance: requires T > 1");
    return std::atanh(1.0 / p.T);
}

Vec4 proj_develop(const FlatDomain& dom, const CtPoint& p) {
    if (std::abs(p.T - 1.0) > 1e-9) throw InvalidInput("proj_develop: point not on the T=1 surface");
    Mat2c b = lifted_bending(dom, dom.base_ct_point(), p);
    Vec4 dir = so31_apply(b, embed_h2(p.N)) + so31_apply(b, kH3Normal);
    return dir * (1.0 / dir[0]);  // normalized null direction
}

double round_ball_factor(double alpha, double d) {
    double den = std::cos(alpha) - std::sinh(d) * std::sin(alpha);
    if (den <= 0) throw InvalidInput("round_ball_factor: point leaves the rotated disk");
    return 1.0 / den;
}

Vec4 ds_develop(const FlatDomain& dom, const CtPoint& p) {
    if (!(p.T > 0.0 && p.T < 1.0)) throw InvalidInput("ds_develop: requires 0 < T < 1");
    Mat2c b = lifted_bending(dom, dom.base_ct_point(), p);
    Vec4 v = so31_apply(b, kH3Normal);
    Vec4 x = so31_apply(b, embed_h2(p.N));
    double tau = std::atanh(p.T);
    return std::cosh(tau) * v + std::sinh(tau) * x;
}

Vec4 ds_develop_boundary(const FlatDomain& dom, const CtPoint& p) {
    Mat2c b = lifted_bending(dom, dom.base_ct_point(), p);
    Vec4 dir = so31_apply(b, kH3Normal) + so31_apply(b, embed_h2(p.N));
    return dir * (1.0 / dir[0]);
}

void ads_fiber(const FlatDomain& dom, const CtPoint& p, Mat2r& x_minus, Mat2r& x_plus) {
    AdsIsometry b = lifted_ads(dom, dom.base_ct_point(), p);
    Mat2r right_inv = b.right.inverse();
    x_minus = b.left * right_inv;                             // dual point of the moved plane
    x_plus = b.left * mink_to_sl2(p.N) * right_inv;           // bent Gauss image
}

Mat2r ads_develop(const FlatDomain& dom, const CtPoint& p) {
    if (!(p.T > 0.0)) throw InvalidInput("ads_develop: requires T > 0");
    Mat2r xm, xp;
    ads_fiber(dom, p, xm, xp);
    double tau = std::atan(p.T);
    return xm * std::cos(tau) + xp * std::sin(tau);
}

namespace {

// Orthonormal frame (X, e2, e3) at a CT point: X = N (future unit timelike),
// e2, e3 spacelike completing it.
void ct_frame(const CtPoint& p, Vec3& e2, Vec3& e3) {
    Vec3 seed = std::abs(p.N[1]) < 0.9 ? Vec3{0, 1, 0} : Vec3{0, 0, 1};
    Vec3 w = seed + mdot(seed, p.N) * p.N;
    e2 = w * (1.0 / snorm(w));
    e3 = mcross(p.N, e2);
    e3 = e3 * (1.0 / snorm(e3));
}

struct AmbientImage {
    Vec4 v4;        // hyp / ds
    Mat2r m;        // ads
};

AmbientImage develop(const FlatDomain& dom, Target t, const CtPoint& p) {
    AmbientImage out;
    switch (t) {
        case Target::Hyp: out.v4 = wick_develop(dom, p); break;
        case Target::DS: out.v4 = ds_develop(dom, p); break;
        case Target::AdS: out.m = ads_develop(dom, p); break;
    }
    return out;
}

double ambient_inner(Target t, const AmbientImage& a, const AmbientImage& b) {
    if (t == Target::AdS) return ads_eta(a.m, b.m);
    return mdot4(a.v4, b.v4);
}

AmbientImage image_diff(Target t, const AmbientImage& a, const AmbientImage& b, double inv2h) {
    AmbientImage out;
    if (t == Target::AdS)
        out.m = (a.m - b.m) * inv2h;
    else
        out.v4 = (a.v4 - b.v4) * inv2h;
    return out;
}

}  // namespace

VerifySample verify_rescaling_at(const FlatDomain& dom, Target target, const CtPoint& p,
                                 double step, double alpha_scale) {
    RescalingLaw law = RescalingLaw::of(target);
    if (!law.in_range(p.T)) throw InvalidInput("verify_rescaling: T outside the target range");

    Vec3 e2, e3;
    ct_frame(p, e2, e3);
    const Vec3 frame[3] = {p.N, e2, e3};

    AmbientImage jac[3];
    for (int k = 0; k < 3; ++k) {
        CtPoint cp = dom.ct_decompose(p.p + step * frame[k]);
        CtPoint cm = dom.ct_decompose(p.p - step * frame[k]);
        jac[k] = image_diff(target, develop(dom, target, cp), develop(dom, target, cm),
                            0.5 / step);
    }

    double g[3][3];
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) g[i][j] = g[j][i] = ambient_inner(target, jac[i], jac[j]);

    double hor = law.horizontal(p.T) * alpha_scale;
    double ver = law.vertical(p.T);
    double sign = law.vertical_sign();

    VerifySample s;
    s.p = p.p;
    s.T = p.T;
    s.beta_residual = std::abs(g[0][0] - sign * ver) / ver;
    s.alpha_residual = std::max(std::abs(g[1][1] - hor), std::abs(g[2][2] - hor)) / hor;
    double scale = std::sqrt(ver * hor);
    s.cross_residual = std::max({std::abs(g[0][1]) / scale, std::abs(g[0][2]) / scale,
                                 std::abs(g[1][2]) / hor});

    // Gram determinant of the pulled-back metric, normalized by the
    // expected value; nonzero certifies a local diffeomorphism
    double det = g[0][0] * (g[1][1] * g[2][2] - g[1][2] * g[1][2]) -
                 g[0][1] * (g[0][1] * g[2][2] - g[1][2] * g[0][2]) +
                 g[0][2] * (g[0][1] * g[1][2] - g[1][1] * g[0][2]);
    s.jacobian_gram_det = std::abs(det) / (ver * hor * hor);
    return s;
}

CtPoint sample_interior_point(const FlatDomain& dom, std::mt19937_64& rng, double margin,
                              double tmin, double tmax, double rmax) {
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    const FiniteLamination& lam = dom.lamination();
    for (int tries = 0; tries < 200000; ++tries) {
        double r = rmax * std::sqrt(uni(rng));
        double th = 2 * kPi * uni(rng);
        HPoint x = h2_polar(r, th);
        bool ok = true;
        for (int j = 0; j < lam.size() && ok; ++j)
            if (h2_geodesic_distance(x, lam.geo(j)) < margin) ok = false;
        if (!ok) continue;
        double T = tmin + (tmax - tmin) * uni(rng);
        return dom.forward_point(x, T);
    }
    throw InvalidInput("sample_interior_point: could not find a stratum-interior point");
}

VerificationReport verify_rescaling(const FlatDomain& dom, Target target,
                                    const VerifyOptions& opt) {
    VerificationReport rep;
    rep.target = target;
    rep.tolerance = opt.tol;
    rep.step = opt.step;
    rep.requested_samples = opt.samples;
    rep.seed = opt.seed;
    rep.alpha_scale = opt.alpha_scale;

    double tmin = opt.t_min, tmax = opt.t_max;
    if (tmin == 0 && tmax == 0) {
        switch (target) {
            case Target::Hyp: tmin = 1.15; tmax = 3.5; break;
            case Target::DS: tmin = 0.15; tmax = 0.85; break;
            case Target::AdS: tmin = 0.25; tmax = 3.0; break;
        }
    }

    // margin: the FD stencil must stay inside one stratum; the Gauss image
    // moves by at most step/T per ambient step
    double margin = 10.0 * opt.step * std::max(1.0, 2.0 / tmin);

    std::mt19937_64 rng(opt.seed);
    std::vector<CtPoint> pts;
    pts.reserve(opt.samples);
    for (int i = 0; i < opt.samples; ++i)
        pts.push_back(sample_interior_point(dom, rng, margin, tmin, tmax));

    rep.samples.resize(pts.size());
    parallel_for(pts.size(), [&](std::size_t i) {
        rep.samples[i] = verify_rescaling_at(dom, target, pts[i], opt.step, opt.alpha_scale);
    });

    for (const auto& s : rep.samples) {
        rep.max_alpha_residual = std::max(rep.max_alpha_residual, s.alpha_residual);
        rep.max_beta_residual = std::max(rep.max_beta_residual, s.beta_residual);
        rep.max_cross_residual = std::max(rep.max_cross_residual, s.cross_residual);
    }
    rep.pass = rep.max_alpha_residual <= opt.tol && rep.max_beta_residual <= opt.tol &&
               rep.max_cross_residual <= opt.tol;
    for (const auto& s : rep.samples)
        if (s.jacobian_gram_det < 1e-6) rep.pass = false;
    return rep;
}

}  // namespace wick
