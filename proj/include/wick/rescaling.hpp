#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "wick/cocycle.hpp"

// The developing maps out of the flat domain (hyperbolic, projective,
// de Sitter, anti-de Sitter) and the finite-difference verifier that pulls
// the target metrics back along the cosmological-time frame and compares
// them with the closed-form rescaling functions.

namespace wick {

enum class Target { Hyp, DS, AdS };

std::string target_name(Target t);

// Closed-form rescaling data of a target.  `horizontal` scales the metric of
// the T-level surfaces, `vertical` the square of the gradient direction;
// `ct` is the target's cosmological time (distance from the hyperbolic
// boundary for the hyperbolic target).  In the statement naming, alpha and
// beta are horizontal/vertical for the hyperbolic target and
// vertical/horizontal for the two Lorentzian targets.
struct RescalingLaw {
    Target target;

    static RescalingLaw of(Target t) { return RescalingLaw{t}; }

    bool in_range(double T) const {
        switch (target) {
            case Target::Hyp: return T > 1.0;
            case Target::DS: return T > 0.0 && T < 1.0;
            case Target::AdS: return T > 0.0;
        }
        return false;
    }
    double horizontal(double T) const {
        switch (target) {
            case Target::Hyp: return 1.0 / (T * T - 1.0);
            case Target::DS: return 1.0 / (1.0 - T * T);
            case Target::AdS: return 1.0 / (1.0 + T * T);
        }
        return 0;
    }
    double vertical(double T) const {
        double h = horizontal(T);
        return h * h;
    }
    // +1 when the pulled-back metric is Riemannian (the Wick rotation flips
    // the vertical sign), -1 for the Lorentzian rescalings.
    double vertical_sign() const { return target == Target::Hyp ? 1.0 : -1.0; }
    double ct(double T) const {
        switch (target) {
            case Target::Hyp: return std::atanh(1.0 / T);
            case Target::DS: return std::atanh(T);
            case Target::AdS: return std::atan(T);
        }
        return 0;
    }
};

// D(p) = exp at F(N(p)) of arctanh(1/T) times the transported normal.
Vec4 wick_develop(const FlatDomain& dom, const CtPoint& p);

// Distance of D(p) from the hyperbolic boundary.
double hyp_boundary_distance(const CtPoint& p);

// Projective developing map on the T=1 surface: the ideal endpoint of the
// transported normal ray, as a future null direction of R^{3,1}.
Vec4 proj_develop(const FlatDomain& dom, const CtPoint& p);

// Conformal stretch of the rotated-disk metric at distance d from the
// rotation axis: 1 / (cos(alpha) - sinh(d) sin(alpha)).
double round_ball_factor(double alpha, double d);

// D*(p) = [cosh(tau) v(p) + sinh(tau) x(p)], tau = arctanh(T).
Vec4 ds_develop(const FlatDomain& dom, const CtPoint& p);

// Extension of the de Sitter map to T = 1 as a projective null direction.
Vec4 ds_develop_boundary(const FlatDomain& dom, const CtPoint& p);

// Delta(p) = [cos(tau) x_-(p) + sin(tau) x_+(p)], tau = arctan(T).
Mat2r ads_develop(const FlatDomain& dom, const CtPoint& p);

// The two endpoints of the AdS timelike fiber through p: the dual point of
// the transported plane and the bent Gauss image.
void ads_fiber(const FlatDomain& dom, const CtPoint& p, Mat2r& x_minus, Mat2r& x_plus);

struct VerifySample {
    Vec3 p;
    double T = 0;
    double alpha_residual = 0;  // horizontal entries
    double beta_residual = 0;   // vertical entry
    double cross_residual = 0;  // off-diagonal entries
    double jacobian_gram_det = 0;
};

struct VerificationReport {
    Target target;
    double tolerance = 1e-4;
    double step = 1e-4;
    int requested_samples = 0;
    std::uint64_t seed = 0;
    double alpha_scale = 1.0;  // corruption hook; 1 = honest comparison
    std::vector<VerifySample> samples;
    bool pass = false;
    double max_alpha_residual = 0, max_beta_residual = 0, max_cross_residual = 0;
};

struct VerifyOptions {
    int samples = 200;
    double tol = 1e-4;
    double step = 1e-4;
    std::uint64_t seed = 0;
    double alpha_scale = 1.0;       // multiplies the expected horizontal factor
    double t_min = 0, t_max = 0;    // 0,0 = default range of the target
};

// Pull back the target metric by central differences at one stratum-interior
// point and compare with the rescaling law.
VerifySample verify_rescaling_at(const FlatDomain& dom, Target target, const CtPoint& p,
                                 double step, double alpha_scale = 1.0);

// Batch verification over seeded stratum-interior samples.
VerificationReport verify_rescaling(const FlatDomain& dom, Target target,
                                    const VerifyOptions& opt);

// Draw a stratum-interior CT point with the given hyperbolic margin from
// every leaf and T in [tmin, tmax].
CtPoint sample_interior_point(const FlatDomain& dom, std::mt19937_64& rng, double margin,
                              double tmin, double tmax, double rmax = 1.3);

}  // namespace wick
