#include "wick/flat_domain.hpp"

#include <algorithm>
#include <cmath>

namespace wick {

namespace {

int8_t sgn(double x) { return x >= 0 ? int8_t(1) : int8_t(-1); }

}  // namespace

FlatDomain::FlatDomain(FiniteLamination lam, double window_radius)
    : lam_(std::move(lam)), window_radius_(window_radius) {
    const int n = lam_.size();
    const Vec3 base = lam_.basepoint.v;

    base_side_.resize(n);
    far_normal_.resize(n);
    std::vector<HPoint> sample(n, HPoint::origin());  // interior sample of each leaf
    for (int i = 0; i < n; ++i) {
        base_side_[i] = sgn(lam_.geo(i).side(base));
        far_normal_[i] = -double(base_side_[i]) * lam_.geo(i).normal;
        sample[i] = lam_.geo(i).foot(lam_.basepoint);
    }

    // side of leaf i as seen by every other leaf j (constant on the leaf)
    auto leaf_side = [&](int i, int j) { return sgn(lam_.geo(j).side(sample[i].v)); };

    // strata: the base stratum plus, for each leaf, the adjacent stratum on
    // its far side
    strata_.resize(n + 1);
    strata_[0].side.resize(n);
    for (int j = 0; j < n; ++j) strata_[0].side[j] = base_side_[j];
    strata_[0].rho = Vec3{0, 0, 0};
    for (int i = 0; i < n; ++i) {
        Stratum& s = strata_[i + 1];
        s.side.resize(n);
        for (int j = 0; j < n; ++j) s.side[j] = (j == i) ? int8_t(-base_side_[i]) : leaf_side(i, j);
        Vec3 r{0, 0, 0};
        for (int j = 0; j < n; ++j)
            if (s.side[j] != base_side_[j]) r += lam_.weight(j) * far_normal_[j];
        s.rho = r;
    }

    // one-sided limits of rho on each leaf
    rho_minus_.resize(n);
    rho_plus_.resize(n);
    for (int i = 0; i < n; ++i) {
        Vec3 r{0, 0, 0};
        for (int j = 0; j < n; ++j)
            if (j != i && leaf_side(i, j) != base_side_[j]) r += lam_.weight(j) * far_normal_[j];
        rho_minus_[i] = r;
        rho_plus_[i] = r + lam_.weight(i) * far_normal_[i];
    }

    // strata adjacent to each leaf: leaf i bounds stratum s iff the leaf is
    // weakly on the same side of every other leaf as the stratum
    near_stratum_.assign(n, -1);
    far_stratum_.assign(n, -1);
    for (int i = 0; i < n; ++i) {
        far_stratum_[i] = i + 1;
        for (int s = 0; s <= n; ++s) {
            if (s == i + 1) continue;
            if (strata_[s].side[i] != base_side_[i]) continue;  // wrong side
            bool adj = true;
            for (int j = 0; j < n && adj; ++j)
                if (j != i && leaf_side(i, j) != strata_[s].side[j]) adj = false;
            if (adj) {
                near_stratum_[i] = s;
                break;
            }
        }
    }
}

int FlatDomain::stratum_of(const HPoint& x) const {
    const int n = lam_.size();
    for (int i = 0; i < n; ++i)
        if (std::abs(lam_.geo(i).side(x.v)) < kOnLeafEps) return -1;
    for (int s = 0; s < static_cast<int>(strata_.size()); ++s) {
        bool ok = true;
        for (int j = 0; j < n && ok; ++j)
            if (sgn(lam_.geo(j).side(x.v)) != strata_[s].side[j]) ok = false;
        if (ok) return s;
    }
    throw WindowTooSmall("stratum_of: point outside the materialized strata");
}

Vec3 FlatDomain::rho(const HPoint& x) const {
    int s = stratum_of(x);
    if (s < 0) throw InvalidInput("rho: point lies on a leaf; use the one-sided limits");
    return strata_[s].rho;
}

CtPoint FlatDomain::forward_point(const HPoint& x, double a) const {
    if (!(a > 0)) throw InvalidInput("forward_point: T must be positive");
    int s = stratum_of(x);
    if (s < 0) throw InvalidInput("forward_point: point lies on a leaf; use forward_band_point");
    CtPoint c;
    c.kind = CtPoint::Open;
    c.stratum = s;
    c.T = a;
    c.N = x.v;
    c.r = strata_[s].rho;
    c.p = a * x.v + c.r;
    return c;
}

CtPoint FlatDomain::forward_band_point(int leaf, const HPoint& x, double a, double t) const {
    if (!(a > 0)) throw InvalidInput("forward_band_point: T must be positive");
    if (t < 0 || t > 1) throw InvalidInput("forward_band_point: band parameter outside [0,1]");
    if (!lam_.geo(leaf).contains(x)) throw InvalidInput("forward_band_point: point not on the leaf");
    CtPoint c;
    c.kind = CtPoint::Band;
    c.leaf = leaf;
    c.band_t = t;
    c.T = a;
    c.N = x.v;
    c.r = t * rho_plus_[leaf] + (1.0 - t) * rho_minus_[leaf];
    c.p = a * x.v + c.r;
    return c;
}

CtPoint FlatDomain::ct_decompose(const Vec3& p) const {
    const int n = lam_.size();
    CtPoint best;
    double best_margin = -std::numeric_limits<double>::infinity();
    Vec3 worst_normal{0, 0, 0};

    // open strata candidates
    for (int s = 0; s <= n; ++s) {
        Vec3 q = p - strata_[s].rho;
        double qq = mdot(q, q);
        if (qq >= 0 || q[0] <= 0) continue;
        double T = std::sqrt(-qq);
        Vec3 N = q * (1.0 / T);
        double margin = std::numeric_limits<double>::infinity();
        for (int j = 0; j < n; ++j) {
            double m = double(strata_[s].side[j]) * lam_.geo(j).side(N);
            if (m < margin) {
                margin = m;
                if (m < best_margin) break;
            }
        }
        if (margin > best_margin) {
            best_margin = margin;
            best.kind = CtPoint::Open;
            best.stratum = s;
            best.leaf = -1;
            best.T = T;
            best.N = N;
            best.r = strata_[s].rho;
            best.p = p;
        }
    }

    // band candidates
    for (int i = 0; i < n; ++i) {
        const double w = lam_.weight(i);
        double s = mdot(p - rho_minus_[i], far_normal_[i]);  // displacement along the band
        Vec3 q = p - rho_minus_[i] - s * far_normal_[i];
        double qq = mdot(q, q);
        if (qq >= 0 || q[0] <= 0) continue;
        double T = std::sqrt(-qq);
        Vec3 N = q * (1.0 / T);
        if (std::abs(lam_.geo(i).side(N)) > 1e-7) continue;  // N must lie on the leaf
        double margin = std::min(s, w - s);
        if (margin > best_margin) {
            best_margin = margin;
            best.kind = CtPoint::Band;
            best.stratum = -1;
            best.leaf = i;
            best.band_t = std::clamp(s / w, 0.0, 1.0);
            best.T = T;
            best.N = N;
            best.r = rho_minus_[i] + s * far_normal_[i];
            best.p = p;
        }
    }

    if (best_margin == -std::numeric_limits<double>::infinity())
        throw OutsideDomain("ct_decompose: point not in the future of the singularity", worst_normal);
    if (best_margin < -1e-9) {
        if (best.kind == CtPoint::Open && best.stratum >= 0) {
            // report the most violated support direction
            int worst = 0;
            double m = std::numeric_limits<double>::infinity();
            for (int j = 0; j < n; ++j) {
                double mj = double(strata_[best.stratum].side[j]) * lam_.geo(j).side(best.N);
                if (mj < m) { m = mj; worst = j; }
            }
            worst_normal = lam_.geo(worst).normal;
        }
        throw OutsideDomain("ct_decompose: point not in the regular domain", worst_normal);
    }

    if (std::isfinite(window_radius_) &&
        h2_distance(HPoint(best.N), lam_.basepoint) > window_radius_ - 1e-9)
        throw WindowTooSmall("ct_decompose: decomposition reaches the window boundary");
    return best;
}

Vec3 FlatDomain::gradient_T(const Vec3& p) const {
    CtPoint c = ct_decompose(p);
    return (c.r - p) * (1.0 / c.T);
}

SingularityGraph FlatDomain::singularity_graph() const {
    SingularityGraph g;
    g.vertices.reserve(strata_.size());
    for (const auto& s : strata_) g.vertices.push_back(s.rho);
    for (int i = 0; i < lam_.size(); ++i) {
        SingularityGraph::Edge e;
        e.leaf = i;
        e.near_vertex = near_stratum_[i];
        e.far_vertex = far_stratum_[i];
        e.a = rho_minus_[i];
        e.b = rho_plus_[i];
        e.length = snorm(e.b - e.a);
        g.edges.push_back(e);
    }
    return g;
}

double FlatDomain::surface_mass(const std::vector<CtPoint>& path) const {
    double m = 0;
    for (std::size_t i = 1; i < path.size(); ++i) {
        Vec3 d = path[i].r - path[i - 1].r;
        double q = mdot(d, d);
        if (q < -1e-12) throw InvalidInput("surface_mass: retraction step not spacelike");
        m += q > 0 ? std::sqrt(q) : 0.0;
    }
    return m;
}

double FlatDomain::path_length(const std::vector<CtPoint>& path) {
    double len = 0;
    for (std::size_t i = 1; i < path.size(); ++i) {
        Vec3 d = path[i].p - path[i - 1].p;
        double q = mdot(d, d);
        if (q < -1e-12) throw InvalidInput("path_length: step not spacelike");
        len += q > 0 ? std::sqrt(q) : 0.0;
    }
    return len;
}

LevelMesh mesh_level_surface(const FlatDomain& dom, double a, double extent, int subdivisions) {
    if (!(a > 0) || subdivisions < 1) throw InvalidInput("mesh_level_surface: bad parameters");
    LevelMesh mesh;
    const int n = subdivisions;
    std::vector<std::vector<int>> index(n + 1, std::vector<int>(n + 1, -1));
    const Vec3 base = dom.basepoint().v;
    for (int i = 0; i <= n; ++i) {
        for (int j = 0; j <= n; ++j) {
            double x1 = base[1] + extent * (2.0 * i / n - 1.0);
            double x2 = base[2] + extent * (2.0 * j / n - 1.0);
            // solve T(x0, x1, x2) = a by bisection; T increases along x0
            auto value = [&](double x0) -> double {
                try {
                    return dom.ct_decompose(Vec3{x0, x1, x2}).T - a;
                } catch (const InvalidInput&) {
                    return -1.0;
                }
            };
            double lo = std::sqrt(x1 * x1 + x2 * x2);
            double span = a + extent + 4.0;
            int guard = 0;
            while (value(lo) >= 0 && guard++ < 60) lo -= span;
            double hi = lo + span;
            while (value(hi) < 0 && guard++ < 60) hi += span;
            if (guard >= 60) continue;
            for (int it = 0; it < 60; ++it) {
                double mid = 0.5 * (lo + hi);
                (value(mid) < 0 ? lo : hi) = mid;
            }
            CtPoint c;
            try {
                c = dom.ct_decompose(Vec3{hi, x1, x2});
            } catch (const InvalidInput&) {
                continue;
            }
            index[i][j] = static_cast<int>(mesh.vertices.size());
            mesh.vertices.push_back(c);
        }
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            int v00 = index[i][j], v10 = index[i + 1][j];
            int v01 = index[i][j + 1], v11 = index[i + 1][j + 1];
            if (v00 < 0 || v10 < 0 || v01 < 0 || v11 < 0) continue;
            mesh.triangles.push_back({v00, v10, v11});
            mesh.triangles.push_back({v00, v11, v01});
        }
    return mesh;
}

}  // namespace wick
