#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_helpers.hpp"
#include "wick/flat_domain.hpp"

using namespace wick;
using namespace wick::testing;

namespace {

// Single leaf {x2=0} with the base point on the x2<0 side: rho jumps by
// alpha0 * (0,0,1) across the leaf.
FlatDomain single_leaf_domain(double alpha0) {
    FiniteLamination lam({{Geodesic::from_endpoints(kPi, 0), alpha0}}, h2_polar(0.7, 3 * kPi / 2));
    return FlatDomain(std::move(lam));
}

FlatDomain static_domain() {
    return FlatDomain(FiniteLamination({}, HPoint::origin()));
}

// Dense sample of the initial singularity: all vertices plus edge
// subdivisions, at least `total` points.
std::vector<Vec3> singularity_samples(const FlatDomain& dom, int total) {
    SingularityGraph g = dom.singularity_graph();
    std::vector<Vec3> pts = g.vertices;
    double len = 0;
    for (const auto& e : g.edges) len += e.length;
    for (const auto& e : g.edges) {
        int k = std::max(2, static_cast<int>(std::ceil(total * (len > 0 ? e.length / len : 0.0))));
        for (int i = 0; i <= k; ++i) pts.push_back(e.a + (e.b - e.a) * (double(i) / k));
    }
    return pts;
}

double oracle_T(const std::vector<Vec3>& sing, const Vec3& p) {
    double best = 0;
    for (const auto& q : sing) {
        Vec3 d = p - q;
        double qq = mdot(d, d);
        if (qq < 0 && d[0] > 0) best = std::max(best, std::sqrt(-qq));
    }
    return best;
}

CtPoint random_domain_point(const FlatDomain& dom, double tmin = 0.3, double tmax = 3.0) {
    HPoint x = random_stratum_point(dom.lamination(), 1e-4);
    return dom.forward_point(x, urand(tmin, tmax));
}

}  // namespace

TEST_CASE("rho: base point, single leaf, path independence") {
    double a0 = 0.8;
    FlatDomain dom = single_leaf_domain(a0);
    CHECK(enorm(dom.rho(dom.basepoint())) < 1e-15);
    // far side of the leaf
    CHECK(enorm(dom.rho(h2_polar(0.9, kPi / 2)) - Vec3{0, 0, a0}) < 1e-12);
    // a point on the leaf must be rejected
    CHECK_THROWS_AS(dom.rho(HPoint(Vec3{1, 0, 0})), InvalidInput);

    // two parallel leaves: rho adds up and is path independent; compare the
    // stratum sum against a crossing-based sum over a different transverse arc
    FiniteLamination two({{Geodesic::from_endpoints(2 * kPi - 1.2, 1.2), 0.4},
                          {Geodesic::from_endpoints(2 * kPi - 0.9, 0.9), 0.6}},
                         h2_polar(1.0, kPi));
    FlatDomain dtwo(two);
    for (int trial = 0; trial < 1000; ++trial) {
        HPoint y = h2_polar(urand(1.2, 2.0), urand(-0.15, 0.15));
        bool clear = true;
        for (int i = 0; i < two.size(); ++i)
            if (h2_geodesic_distance(y, two.geo(i)) < 1e-5) clear = false;
        if (!clear) continue;
        Vec3 direct = dtwo.rho(y);
        // independent route: waypoint far off to the side, summing crossings
        HPoint w = h2_polar(2.2, urand(0.6, 1.0));
        Vec3 via{0, 0, 0};
        for (const auto& c : leaves_crossing(two, {two.basepoint, w}))
            via += two.weight(c.leaf) * orthogonal_field(c);
        bool w_clear = true;
        for (int i = 0; i < two.size(); ++i)
            if (h2_geodesic_distance(w, two.geo(i)) < 1e-5) w_clear = false;
        if (!w_clear) continue;
        for (const auto& c : leaves_crossing(two, {w, y}))
            via += two.weight(c.leaf) * orthogonal_field(c);
        CHECK(enorm(direct - via) < 1e-12);
    }
}

TEST_CASE("rho one-sided limits") {
    double a0 = 0.8;
    FlatDomain dom = single_leaf_domain(a0);
    CHECK(enorm(dom.rho_minus(0)) < 1e-15);
    CHECK(enorm(dom.rho_plus(0) - Vec3{0, 0, a0}) < 1e-12);

    for (int trial = 0; trial < 1000; ++trial) {
        FiniteLamination lam = random_lamination(5);
        FlatDomain d(lam);
        int leaf = static_cast<int>(urand(0, lam.size() - 1e-9));
        Vec3 jump = d.rho_plus(leaf) - d.rho_minus(leaf);
        CHECK(snorm(jump) == doctest::Approx(lam.weight(leaf)).epsilon(1e-10));
        CHECK(std::abs(mdot(jump, mcross(d.lamination().geo(leaf).foot(lam.basepoint).v,
                                         lam.geo(leaf).normal))) < 1e-9);
        // near-side limit agrees with rho just before the leaf
        HPoint foot = lam.geo(leaf).foot(lam.basepoint);
        Vec3 dir = d.far_normal(leaf);
        HPoint near_pt(foot.v * std::cosh(1e-5) - std::sinh(1e-5) * dir);
        bool clear = true;
        for (int j = 0; j < lam.size(); ++j)
            if (j != leaf && h2_geodesic_distance(near_pt, lam.geo(j)) < 1e-4) clear = false;
        if (clear) CHECK(enorm(d.rho(near_pt) - d.rho_minus(leaf)) < 1e-12);
    }
}

TEST_CASE("forward_point closed forms") {
    double a0 = 0.8;
    FlatDomain dom = single_leaf_domain(a0);
    // near-side point (sqrt2, 0, -1) at T = 3
    HPoint x(Vec3{std::sqrt(2.0), 0, -1});
    CtPoint c = dom.forward_point(x, 3.0);
    CHECK(enorm(c.p - Vec3{3 * std::sqrt(2.0), 0, -3}) < 1e-12);
    CHECK(c.T == doctest::Approx(3.0));
    CHECK(enorm(c.r) < 1e-15);

    // band point above (1,0,0) at T = 2, halfway across
    CtPoint b = dom.forward_band_point(0, HPoint(Vec3{1, 0, 0}), 2.0, 0.5);
    CHECK(enorm(b.p - Vec3{2, 0, a0 / 2}) < 1e-12);
    CHECK(enorm(b.r - Vec3{0, 0, a0 / 2}) < 1e-12);
}

TEST_CASE("ct_decompose: static cone and bands") {
    FlatDomain stat = static_domain();
    CtPoint c = stat.ct_decompose(Vec3{2, 1, 0});
    CHECK(c.T == doctest::Approx(std::sqrt(3.0)));
    CHECK(enorm(c.N - Vec3{2, 1, 0} * (1.0 / std::sqrt(3.0))) < 1e-12);
    CHECK(enorm(c.r) < 1e-15);

    double a0 = 0.8;
    FlatDomain dom = single_leaf_domain(a0);
    CtPoint b = dom.ct_decompose(Vec3{2, 0, a0 / 2});
    CHECK(b.kind == CtPoint::Band);
    CHECK(b.T == doctest::Approx(2.0));
    CHECK(b.band_t == doctest::Approx(0.5));

    CHECK_THROWS_AS(stat.ct_decompose(Vec3{0.5, 1, 0}), OutsideDomain);
}

TEST_CASE("ct_decompose round trips forward_point") {
    for (int trial = 0; trial < 1000; ++trial) {
        FiniteLamination lam = random_lamination(5);
        FlatDomain dom(lam);
        HPoint x = random_stratum_point(lam, 1e-6);
        double a = urand(0.2, 3.0);
        CtPoint c = dom.forward_point(x, a);
        CtPoint back = dom.ct_decompose(c.p);
        CHECK(back.T == doctest::Approx(a).epsilon(1e-10));
        CHECK(enorm(back.N - x.v) < 1e-8);
        CHECK(enorm(back.r - c.r) < 1e-8);
        // the decomposition identity p = r + T N holds exactly
        CHECK(enorm(back.p - (back.r + back.T * back.N)) < 1e-10);
    }
}

TEST_CASE("ct_decompose against the dense singularity oracle") {
    for (int rep = 0; rep < 3; ++rep) {
        FiniteLamination lam = random_lamination(5);
        FlatDomain dom(lam);
        auto sing = singularity_samples(dom, 10000);
        for (int i = 0; i < 40; ++i) {
            CtPoint c = random_domain_point(dom, 0.4, 2.5);
            double to = oracle_T(sing, c.p);
            CHECK(std::abs(c.T - to) < 1e-3);
            CHECK(c.T >= to - 1e-12);  // samples only underestimate
        }
    }
}

TEST_CASE("gradient of the cosmological time") {
    FlatDomain stat = static_domain();
    CHECK(enorm(stat.gradient_T(Vec3{2, 0, 0}) - Vec3{-1, 0, 0}) < 1e-12);

    FiniteLamination lam = random_lamination(4);
    FlatDomain dom(lam);
    int done = 0;
    while (done < 200) {
        CtPoint c;
        try {
            c = random_domain_point(dom, 0.5, 2.5);
        } catch (...) { continue; }
        Vec3 g = dom.gradient_T(c.p);
        CHECK(mdot(g, g) == doctest::Approx(-1.0).epsilon(1e-9));
        CHECK(enorm(g + c.N) < 1e-9);
        // central differences of T
        double h = 1e-5;
        bool ok = true;
        Vec3 fd;
        for (int k = 0; k < 3; ++k) {
            Vec3 e{0, 0, 0};
            e[k] = 1;
            double tp, tm;
            try {
                tp = dom.ct_decompose(c.p + h * e).T;
                tm = dom.ct_decompose(c.p - h * e).T;
            } catch (...) { ok = false; break; }
            fd[k] = (tp - tm) / (2 * h);
        }
        if (!ok) continue;
        // dT(v) = <grad, v>: components vs the Minkowski pairing
        Vec3 expect{-g[0], g[1], g[2]};
        CHECK(enorm(fd - expect) < 1e-5);
        ++done;
    }
}

TEST_CASE("singularity graph") {
    FlatDomain stat = static_domain();
    SingularityGraph g0 = stat.singularity_graph();
    CHECK(g0.vertices.size() == 1);
    CHECK(g0.edges.empty());

    double a0 = 0.8;
    FlatDomain dom = single_leaf_domain(a0);
    SingularityGraph g1 = dom.singularity_graph();
    CHECK(g1.edges.size() == 1);
    CHECK(g1.edges[0].length == doctest::Approx(a0));

    // edge lengths equal weights on random laminations
    for (int rep = 0; rep < 50; ++rep) {
        FiniteLamination lam = random_lamination(6);
        FlatDomain d(lam);
        SingularityGraph g = d.singularity_graph();
        CHECK(g.vertices.size() == std::size_t(lam.size() + 1));
        CHECK(g.edges.size() == std::size_t(lam.size()));  // a tree: V = E + 1
        for (const auto& e : g.edges) {
            CHECK(e.length == doctest::Approx(lam.weight(e.leaf)).epsilon(1e-10));
            CHECK(mdot(e.b - e.a, e.b - e.a) > 0);  // spacelike edges
            CHECK(e.near_vertex >= 0);
        }
    }
}

TEST_CASE("three-cusp singularity graph is a trivalent tree") {
    PuncturedSphere ps;
    FiniteLamination lam = materialize(ps.orbit(1.5, 6));
    FlatDomain dom(lam);
    SingularityGraph g = dom.singularity_graph();
    CHECK(g.edges.size() == std::size_t(lam.size()));
    // count leaf-adjacencies per stratum; strata whose region is an ideal
    // triangle fully inside the window must have degree exactly 3
    std::vector<int> degree(g.vertices.size(), 0);
    for (const auto& e : g.edges) {
        degree[e.far_vertex]++;
        if (e.near_vertex >= 0) degree[e.near_vertex]++;
    }
    int trivalent = 0;
    for (std::size_t s = 0; s < g.vertices.size(); ++s) {
        CHECK(degree[s] <= 3);  // dual tree of an ideal triangulation
        if (degree[s] == 3) ++trivalent;
    }
    CHECK(trivalent >= 3);  // window holds several complete triangles
}

TEST_CASE("surface mass and the density bound") {
    double a0 = 0.8;
    FlatDomain dom = single_leaf_domain(a0);

    // path inside one stratum: zero mass
    std::vector<CtPoint> flatpath;
    for (int i = 0; i <= 20; ++i)
        flatpath.push_back(dom.forward_point(h2_polar(0.5, 3 * kPi / 2 + 0.02 * i), 1.7));
    CHECK(dom.surface_mass(flatpath) == doctest::Approx(0.0));

    // crossing the band orthogonally picks up exactly the weight, at any level
    for (double level : {0.6, 1.0, 2.3}) {
        std::vector<CtPoint> path;
        int steps = 400;
        for (int i = 0; i <= steps; ++i) {
            double t = -0.5 + i * 1.0 / steps;
            HPoint x = h2_polar(std::abs(t), t < 0 ? 3 * kPi / 2 : kPi / 2);
            if (std::abs(t) < 1e-12) x = HPoint::origin();
            try {
                path.push_back(dom.forward_point(x, level));
            } catch (const InvalidInput&) {
                // point on the leaf: take the band fiber
                path.push_back(dom.forward_band_point(0, x, level, 0.0));
                path.push_back(dom.forward_band_point(0, x, level, 1.0));
            }
        }
        CHECK(dom.surface_mass(path) == doctest::Approx(a0).epsilon(1e-9));
        CHECK(dom.surface_mass(path) <= FlatDomain::path_length(path) + 1e-9);
    }

    // band scaling at level a: the retraction direction is isometric and
    // the leaf direction scales by a
    for (double level : {0.7, 1.9}) {
        HPoint on(Vec3{1, 0, 0});
        std::vector<CtPoint> across{dom.forward_band_point(0, on, level, 0.1),
                                    dom.forward_band_point(0, on, level, 0.9)};
        CHECK(FlatDomain::path_length(across) == doctest::Approx(0.8 * a0).epsilon(1e-12));
        double ds = 0.4;
        HPoint along(Vec3{std::cosh(ds), std::sinh(ds), 0});
        std::vector<CtPoint> leafdir{dom.forward_band_point(0, on, level, 0.3),
                                     dom.forward_band_point(0, along, level, 0.3)};
        // chord of the leaf-direction geodesic on U(a): length a * ds
        double chord = FlatDomain::path_length(leafdir);
        CHECK(2 * std::asinh(chord / (2 * level)) == doctest::Approx(ds).epsilon(1e-12));
    }

    // random surface paths obey mass <= length
    for (int rep = 0; rep < 1000; ++rep) {
        FiniteLamination lam = random_lamination(4);
        FlatDomain d(lam);
        double level = urand(0.5, 2.0);
        HPoint from = random_stratum_point(lam, 1e-5), to = random_stratum_point(lam, 1e-5);
        if (h2_distance(from, to) < 0.05) continue;
        std::vector<CtPoint> path;
        Vec3 dir = h2_direction(from, to);
        double len = h2_distance(from, to);
        int steps = 200;
        bool ok = true;
        for (int i = 0; i <= steps && ok; ++i) {
            try {
                path.push_back(d.ct_decompose(
                    d.forward_point(HPoint(std::cosh(len * i / steps) * from.v +
                                           std::sinh(len * i / steps) * dir),
                                    level)
                        .p));
            } catch (const InvalidInput&) {
                ok = false;  // grid point fell on a leaf
            }
        }
        if (!ok) continue;
        CHECK(d.surface_mass(path) <= FlatDomain::path_length(path) + 1e-9);
    }
}

TEST_CASE("scaling map") {
    double a0 = 0.7;
    FlatDomain dom = single_leaf_domain(a0);
    FlatDomain dbl = dom.scaled(2.0);
    CHECK(dbl.lamination().weight(0) == doctest::Approx(2 * a0));
    for (int i = 0; i < 200; ++i) {
        CtPoint c = random_domain_point(dom);
        CtPoint d = dbl.ct_decompose(2.0 * c.p);
        CHECK(d.T == doctest::Approx(2.0 * c.T).epsilon(1e-12));
        CHECK(enorm(d.N - c.N) < 1e-9);
    }
    // identity at t = 1
    FlatDomain one = dom.scaled(1.0);
    CtPoint c = random_domain_point(dom);
    CHECK(one.ct_decompose(c.p).T == doctest::Approx(c.T));
}

TEST_CASE("concavity of T on midpoints") {
    FiniteLamination lam = random_lamination(5);
    FlatDomain dom(lam);
    int done = 0;
    while (done < 10000) {
        CtPoint a = random_domain_point(dom), b = random_domain_point(dom);
        CtPoint m;
        try {
            m = dom.ct_decompose((a.p + b.p) * 0.5);
        } catch (...) { continue; }
        CHECK(m.T >= 0.5 * (a.T + b.T) - 1e-9);
        ++done;
    }
}

TEST_CASE("fundamental inequality") {
    FiniteLamination lam = random_lamination(6);
    FlatDomain dom(lam);
    for (int i = 0; i < 10000; ++i) {
        CtPoint a = random_domain_point(dom), b = random_domain_point(dom);
        CHECK(mdot(a.N, a.r - b.r) >= -1e-9);
    }
}

TEST_CASE("gauss map surjectivity at window scale") {
    FiniteLamination lam = random_lamination(5);
    FlatDomain dom(lam);
    for (int i = 0; i < 500; ++i) {
        HPoint x = random_stratum_point(lam, 1e-7);
        CtPoint c = dom.forward_point(x, urand(0.3, 2.5));
        CHECK(enorm(dom.ct_decompose(c.p).N - x.v) < 1e-8);
    }
    // leaf points are reached by band fibers
    for (int i = 0; i < lam.size(); ++i) {
        HPoint x = lam.geo(i).foot(lam.basepoint);
        CtPoint c = dom.forward_band_point(i, x, 1.3, 0.4);
        CtPoint back = dom.ct_decompose(c.p);
        CHECK(back.kind == CtPoint::Band);
        CHECK(enorm(back.N - x.v) < 1e-8);
    }
}

TEST_CASE("gauss map is 1/a-Lipschitz on level surfaces") {
    FiniteLamination lam = random_lamination(4);
    FlatDomain dom(lam);
    int done = 0;
    while (done < 300) {
        double a = urand(0.5, 2.5);
        HPoint x = random_stratum_point(lam, 1e-5), y = random_stratum_point(lam, 1e-5);
        if (h2_distance(x, y) < 0.05) continue;
        // surface polyline over the connecting geodesic of H2
        std::vector<CtPoint> path;
        Vec3 dir = h2_direction(x, y);
        double len = h2_distance(x, y);
        bool ok = true;
        for (int i = 0; i <= 400 && ok; ++i) {
            HPoint xi(std::cosh(len * i / 400) * x.v + std::sinh(len * i / 400) * dir);
            try {
                path.push_back(dom.ct_decompose(Vec3{0, 0, 0} + a * xi.v + dom.rho(xi)));
            } catch (const InvalidInput&) {
                ok = false;
            }
        }
        if (!ok) continue;
        double surf = FlatDomain::path_length(path);
        double jumps = dom.surface_mass(path);
        CHECK(h2_distance(x, y) <= (surf + jumps) / a + 1e-6);
        ++done;
    }
}

TEST_CASE("weight perturbation moves T by O(delta)") {
    FiniteLamination lam = random_lamination(4);
    FlatDomain dom(lam);
    // pick a point whose decomposition depends on the weights
    CtPoint c;
    do {
        c = random_domain_point(dom, 1.0, 2.0);
    } while (enorm(c.r) < 1e-6);
    double ratio_prev = -1;
    for (double delta : {1e-2, 1e-3, 1e-4}) {
        auto bumped = lam;
        FiniteLamination pert(
            [&] {
                std::vector<WeightedGeodesic> lv = bumped.leaves;
                for (auto& l : lv) l.weight += delta;
                return lv;
            }(),
            lam.basepoint);
        FlatDomain dp(pert);
        double dT = std::abs(dp.ct_decompose(c.p).T - c.T);
        double ratio = dT / delta;
        if (ratio_prev > 0) CHECK(ratio < 3.0 * ratio_prev + 1e-9);
        ratio_prev = ratio;
        MESSAGE("delta=", delta, " |dT|/delta=", ratio);
    }
}

TEST_CASE("window guard on truncated domains") {
    // decompositions that would depend on leaves outside the materialized
    // window are refused instead of silently truncated
    Mat2r g = exp_sl2(translation_generator(Geodesic::from_endpoints(kPi, 0.0)) * 0.3);
    Geodesic perp = Geodesic::from_endpoints(kPi / 2, 3 * kPi / 2);
    HPoint base_pt = uhp_to_h2(cplx(0.0, std::exp(0.05)));
    OrbitLamination orb{{g}, FiniteLamination({{perp, 1.0}}, base_pt), 0.9, 4};
    FlatDomain dom(materialize(orb), 0.9);
    CHECK_THROWS_AS(dom.ct_decompose(dom.forward_point(h2_polar(2.0, 0.3), 1.0).p),
                    WindowTooSmall);
    // well-inside points decompose fine
    CHECK(dom.ct_decompose(Vec3{1.4, 0.1, 0.0}).T > 0);
}

TEST_CASE("level surface mesh") {
    FlatDomain dom = single_leaf_domain(0.8);
    LevelMesh mesh = mesh_level_surface(dom, 1.5, 1.2, 12);
    CHECK(mesh.vertices.size() > 50);
    CHECK(!mesh.triangles.empty());
    for (const auto& v : mesh.vertices) CHECK(v.T == doctest::Approx(1.5).epsilon(1e-9));
}
