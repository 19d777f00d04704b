#pragma once

#include <random>

#include "wick/lamination.hpp"

// Shared fixtures for the test suites: seeded random points and laminations
// and the two-parabolic orbit lamination used as the standing punctured
// example.

namespace wick::testing {

inline std::mt19937_64& rng() {
    static std::mt19937_64 r(20240811);
    return r;
}

inline double urand(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng());
}

inline HPoint random_h2_point(double rmax = 1.5) {
    return h2_polar(urand(0.0, rmax), urand(0.0, 2 * kPi));
}

inline FiniteLamination random_lamination(int n, double rmax = 1.2, double wmax = 1.2) {
    std::vector<WeightedGeodesic> lv;
    int guard = 0;
    while (static_cast<int>(lv.size()) < n && guard++ < 6000) {
        double a = urand(0, 2 * kPi);
        double b = wrap_angle(a + urand(0.4, 2 * kPi - 0.4));
        Geodesic g = Geodesic::from_endpoints(a, b);
        bool ok = true;
        for (const auto& l : lv)
            if (!geodesics_disjoint(l.geo, g, 1e-3)) { ok = false; break; }
        if (ok) lv.push_back({g, urand(0.15, wmax)});
    }
    while (true) {
        HPoint base = random_h2_point(rmax);
        bool off = true;
        for (const auto& l : lv)
            if (std::abs(l.geo.side(base.v)) < 1e-3) off = false;
        if (off) return FiniteLamination(lv, base);
    }
}

// A point of the open part of the lamination complement with a guaranteed
// hyperbolic margin from every leaf.
inline HPoint random_stratum_point(const FiniteLamination& lam, double margin,
                                   double rmax = 1.4, int tries = 4000) {
    for (int i = 0; i < tries; ++i) {
        HPoint x = random_h2_point(rmax);
        bool ok = true;
        for (int j = 0; j < lam.size() && ok; ++j)
            if (h2_geodesic_distance(x, lam.geo(j)) < margin) ok = false;
        if (ok) return x;
    }
    throw std::runtime_error("random_stratum_point: no point with the requested margin");
}

// Two-parabolic punctured-sphere data: generators z -> z+2 and
// z -> z/(2z+1), the three edge classes of the ideal triangle (0, 1, inf)
// and the incenter of that triangle as base point.
struct PuncturedSphere {
    Mat2r g1{1, 2, 0, 1};
    Mat2r g2{1, 0, 2, 1};
    double a1, a2, a3;

    explicit PuncturedSphere(double w1 = 0.3, double w2 = 0.5, double w3 = 0.7)
        : a1(w1), a2(w2), a3(w3) {}

    HPoint basepoint() const { return uhp_to_h2(cplx(0.5, std::sqrt(3.0) / 2.0)); }

    FiniteLamination base_leaves() const {
        Geodesic e1 = Geodesic::from_endpoints(boundary_angle_of_real(0.0), 0.0);   // (0, inf)
        Geodesic e2 = Geodesic::from_endpoints(boundary_angle_of_real(1.0), 0.0);   // (1, inf)
        Geodesic e3 = Geodesic::from_endpoints(boundary_angle_of_real(0.0),
                                               boundary_angle_of_real(1.0));        // (0, 1)
        return FiniteLamination({{e1, a1}, {e2, a2}, {e3, a3}}, basepoint());
    }

    OrbitLamination orbit(double radius = 2.4, int word_length = 6) const {
        return OrbitLamination{{g1, g2}, base_leaves(), radius, word_length};
    }
};

}  // namespace wick::testing
