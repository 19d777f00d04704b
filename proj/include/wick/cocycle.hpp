#pragma once

#include "wick/flat_domain.hpp"

// Bending and shear cocycles attached to a finite lamination, their
// continuous lifts to the flat domain, the bending maps into H3 and the
// anti-de Sitter space, earthquake maps with their ideal extensions, and
// the boundary curve of the AdS bending.
//
// All two-point cocycles are evaluated directly from the crossings of the
// connecting segment; the leaf orientation is recomputed per evaluation
// (normal toward the terminal side, so that dE/dz at z=0 recovers half the
// boundary cocycle), and an endpoint lying on a leaf contributes half its
// weight.

namespace wick {

// PSL(2,C)-valued bending cocycle: ordered product of exp(w_i * (i/2) X_i).
Mat2c bending_cocycle(const FiniteLamination& lam, const HPoint& x, const HPoint& y,
                      double weight_scale = 1.0);

// Quake-bend cocycle: ordered product of exp(z * w_i * X_i / 2); z = i gives
// the bending cocycle, real z the shear cocycle.
Mat2c quake_bend(const FiniteLamination& lam, cplx z, const HPoint& x, const HPoint& y,
                 double weight_scale = 1.0);

// Pair cocycle: ordered products of exp(-w_i X_i / 2) and exp(+w_i X_i / 2).
AdsIsometry ads_cocycle(const FiniteLamination& lam, const HPoint& x, const HPoint& y,
                        double weight_scale = 1.0);

// Continuous lifts to the domain: off the bands they agree with the base
// cocycle of the Gauss images; inside a band the leaf rotation is
// interpolated by the Lorentzian displacement of the retraction.
Mat2c lifted_bending(const FlatDomain& dom, const CtPoint& p, const CtPoint& q);
AdsIsometry lifted_ads(const FlatDomain& dom, const CtPoint& p, const CtPoint& q);

// F(x) = B(x0, x) x, a point of H3.
Vec4 bending_map(const FiniteLamination& lam, const HPoint& x);

// phi(x) = beta(x0, x) x, a point of Xm1 on the bent copy of P(Id).
Mat2r ads_bending(const FiniteLamination& lam, const HPoint& x);

enum class Side { Left, Right };

// Earthquake map: the shear cocycle applied to the point, stratum by
// stratum.  Left uses beta_+, right uses beta_-.
HPoint earthquake(const FiniteLamination& lam, Side side, const HPoint& x);

// Ideal extension: image angle of a boundary point.  `approach` selects the
// one-sided limit at atom endpoints (+1 approaches counterclockwise).
double earthquake_boundary(const FiniteLamination& lam, Side side, double xi,
                           int approach = +1);

struct BoundaryCurvePoint {
    double xi_right, xi_left;  // earthquake images of the angle
    Mat2r point;               // segre_boundary(xi_right, xi_left)
};

// Point(s) of the AdS boundary curve over the angle xi; two entries when xi
// is an endpoint of a weighted leaf (the two one-sided limits).
std::vector<BoundaryCurvePoint> boundary_curve(const FiniteLamination& lam, double xi);

// Diagnostic family: leaves orthogonal to a ray accumulating at its start,
// weight one each; the partial products g_k = exp(X_1)...exp(X_k) are
// hyperbolic with translation length beyond k and axes trapped between the
// first and the limit leaf.
struct EarthquakeFailureCase {
    struct Entry {
        int k;
        double trace;
        double length;            // translation length of g_k
        double fix_lo, fix_hi;    // fixed points on the real axis
        double axis_gap;          // distance of the axis from the limit leaf
        bool axis_inside;         // axis contained between l_infinity and l_1
    };
    std::vector<Entry> entries;
};
EarthquakeFailureCase earthquake_failure_case(int n);

// Action of PSL(2,R) on the hyperboloid.
inline HPoint psl2_act(const Mat2r& m, const HPoint& x) {
    return HPoint(so21_of(m) * x.v);
}

}  // namespace wick
