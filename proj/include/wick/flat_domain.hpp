#pragma once

#include <limits>

#include "wick/lamination.hpp"

// The flat regular domain attached to a finite lamination: the boundary
// cocycle rho, the cosmological time decomposition p = r + T N, level
// surfaces, the initial singularity and the scaling map between rays.
//
// The domain is the set {a x + rho(x)} over points x off the weighted
// leaves, together with the bands {a x + t rho_+ + (1-t) rho_-} over points
// on the leaves.  rho is normalized to vanish at the base point.

namespace wick {

struct CtPoint {
    Vec3 p;
    double T = 1.0;
    Vec3 N{1, 0, 0};
    Vec3 r{0, 0, 0};
    enum Kind { Open, Band } kind = Open;
    int stratum = 0;      // stratum index when kind == Open
    int leaf = -1;        // leaf index when kind == Band
    double band_t = 0.0;  // position in [0,1] along [rho_-, rho_+]
};

struct OutsideDomain : InvalidInput {
    Vec3 support_normal;  // a violated support direction
    OutsideDomain(const std::string& what, Vec3 n) : InvalidInput(what), support_normal(n) {}
};

struct WindowTooSmall : InvalidInput {
    using InvalidInput::InvalidInput;
};

struct Stratum {
    Vec3 rho;
    std::vector<int8_t> side;  // sign of <., normal_j> on the stratum, per leaf
};

struct SingularityGraph {
    std::vector<Vec3> vertices;                  // rho values of the strata
    struct Edge {
        int leaf;
        int near_vertex, far_vertex;             // stratum indices
        Vec3 a, b;                               // [rho_-, rho_+]
        double length;                           // Lorentzian length = weight
    };
    std::vector<Edge> edges;
};

class FlatDomain {
  public:
    explicit FlatDomain(FiniteLamination lam,
                        double window_radius = std::numeric_limits<double>::infinity());

    const FiniteLamination& lamination() const { return lam_; }
    const HPoint& basepoint() const { return lam_.basepoint; }
    double window_radius() const { return window_radius_; }

    // Boundary cocycle: sum of weight * (unit normal toward x) over the
    // leaves separating the base point from x.  Zero at the base point.
    Vec3 rho(const HPoint& x) const;

    // One-sided limits of rho on a leaf; rho_plus - rho_minus is the
    // far-pointing normal scaled by the weight.
    Vec3 rho_minus(int leaf) const { return rho_minus_[leaf]; }
    Vec3 rho_plus(int leaf) const { return rho_plus_[leaf]; }
    Vec3 far_normal(int leaf) const { return far_normal_[leaf]; }

    // Forward parametrization of the domain.
    CtPoint forward_point(const HPoint& x, double a) const;          // open stratum
    CtPoint forward_band_point(int leaf, const HPoint& x, double a, double t) const;

    // Cosmological time decomposition of an ambient point.
    CtPoint ct_decompose(const Vec3& p) const;

    // Lorentzian gradient of T: (r - p)/T = -N.
    Vec3 gradient_T(const Vec3& p) const;

    CtPoint base_ct_point(double a = 1.0) const { return forward_point(basepoint(), a); }

    // Strata of the complement of the leaves (index 0 = base stratum).
    const std::vector<Stratum>& strata() const { return strata_; }
    int stratum_of(const HPoint& x) const;  // -1 if x lies on a leaf

    SingularityGraph singularity_graph() const;

    // Mass of the level-surface lamination along a polyline on U(a), as the
    // Lorentzian total variation of the retraction.
    double surface_mass(const std::vector<CtPoint>& path) const;

    // Intrinsic length of the spacelike polyline.
    static double path_length(const std::vector<CtPoint>& path);

    // The scaling map x -> t x carries this domain onto the domain of the
    // scaled lamination.
    FlatDomain scaled(double t) const { return FlatDomain(lam_.scaled(t), window_radius_); }

  private:
    FiniteLamination lam_;
    double window_radius_;
    std::vector<Stratum> strata_;
    std::vector<Vec3> rho_minus_, rho_plus_, far_normal_;
    std::vector<int8_t> base_side_;     // side of the base point per leaf
    std::vector<int> near_stratum_, far_stratum_;  // strata adjacent to each leaf
};

// Triangulated graph mesh of the level surface U(a) over the plane x0 = 0.
struct LevelMesh {
    std::vector<CtPoint> vertices;
    std::vector<std::array<int, 3>> triangles;
};
LevelMesh mesh_level_surface(const FlatDomain& dom, double a, double extent, int subdivisions);

}  // namespace wick
