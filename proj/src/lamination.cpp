#include "wick/lamination.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace wick {

namespace {

// Position of angle t relative to the counterclockwise arc from a to b:
// 1 clearly inside, 0 clearly outside, -1 within the margin of an endpoint.
int arc_position(double t, double a, double b, double margin) {
    double span = wrap_angle(b - a);
    double off = wrap_angle(t - a);
    if (off > margin && off < span - margin) return 1;
    if (off > span + margin && off < 2 * kPi - margin) return 0;
    return -1;
}

bool near_angle(double a, double b, double eps) {
    return std::abs(std::remainder(a - b, 2 * kPi)) < eps;
}

}  // namespace

bool geodesics_disjoint(const Geodesic& a, const Geodesic& b, double eps) {
    // shared ideal endpoints are allowed; otherwise the endpoint pairs must
    // be clearly unlinked, with ambiguous configurations counted as crossing
    if (near_angle(a.xi_minus, b.xi_minus, kDisjointEps) ||
        near_angle(a.xi_minus, b.xi_plus, kDisjointEps) ||
        near_angle(a.xi_plus, b.xi_minus, kDisjointEps) ||
        near_angle(a.xi_plus, b.xi_plus, kDisjointEps))
        return true;
    int m = arc_position(b.xi_minus, a.xi_minus, a.xi_plus, eps);
    int p = arc_position(b.xi_plus, a.xi_minus, a.xi_plus, eps);
    if (m < 0 || p < 0) return false;
    return m == p;
}

FiniteLamination::FiniteLamination(std::vector<WeightedGeodesic> lv, HPoint base,
                                   bool allow_basepoint_on_leaf)
    : leaves(std::move(lv)), basepoint(base) {
    for (const auto& l : leaves)
        if (!(l.weight > 0)) throw InvalidInput("FiniteLamination: weights must be positive");
    std::sort(leaves.begin(), leaves.end(), [](const WeightedGeodesic& a, const WeightedGeodesic& b) {
        double am = std::min(a.geo.xi_minus, a.geo.xi_plus), bm = std::min(b.geo.xi_minus, b.geo.xi_plus);
        if (am != bm) return am < bm;
        return std::max(a.geo.xi_minus, a.geo.xi_plus) < std::max(b.geo.xi_minus, b.geo.xi_plus);
    });
    for (int i = 0; i < size(); ++i)
        for (int j = i + 1; j < size(); ++j)
            if (!geodesics_disjoint(leaves[i].geo, leaves[j].geo))
                throw LaminationError("FiniteLamination: leaves " + std::to_string(i) + " and " +
                                          std::to_string(j) + " cross",
                                      i, j);
    for (int i = 0; i < size(); ++i) {
        if (std::abs(leaves[i].geo.side(basepoint.v)) < kOnLeafEps) {
            if (!allow_basepoint_on_leaf)
                throw LaminationError("FiniteLamination: basepoint lies on a leaf", i, i);
            basepoint_on_leaf = true;
            basepoint_leaf = i;
        }
    }
}

FiniteLamination FiniteLamination::scaled(double t) const {
    if (!(t > 0)) throw InvalidInput("scaled: factor must be positive");
    FiniteLamination out = *this;
    for (auto& l : out.leaves) l.weight *= t;
    return out;
}

std::vector<Crossing> leaves_crossing(const FiniteLamination& lam, const TransverseArc& arc) {
    double len = h2_distance(arc.x, arc.y);
    if (len < 1e-14) throw InvalidInput("leaves_crossing: degenerate arc");
    Vec3 dir = h2_direction(arc.x, arc.y);
    std::vector<Crossing> out;
    for (int i = 0; i < lam.size(); ++i) {
        const Geodesic& l = lam.geo(i);
        double sx = l.side(arc.x.v), sy = l.side(arc.y.v);
        bool x_on = std::abs(sx) < kOnLeafEps, y_on = std::abs(sy) < kOnLeafEps;
        if (x_on && y_on) throw InvalidInput("leaves_crossing: arc lies inside a leaf");
        Crossing c;
        c.leaf = i;
        if (x_on) {
            c.t = 0.0;
            c.point = arc.x;
            c.at_start = true;
            // normal toward the y side
            c.oriented = (sy > 0) ? lam.geo(i) : lam.geo(i).reversed();
            c.toward_far = (sy > 0 ? 1.0 : -1.0) * l.normal;
        } else if (y_on) {
            c.t = len;
            c.point = arc.y;
            c.at_end = true;
            // normal away from the x side
            c.oriented = (sx > 0) ? lam.geo(i).reversed() : lam.geo(i);
            c.toward_far = (sx > 0 ? -1.0 : 1.0) * l.normal;
        } else if ((sx > 0) != (sy > 0)) {
            // interior crossing: solve <cosh t x + sinh t dir, u> = 0
            double du = mdot(dir, l.normal);
            double t = std::atanh(std::max(-1.0 + 1e-15, std::min(1.0 - 1e-15, -sx / du)));
            if (!(t > 0 && t < len)) {
                // fall back to a bisection; the sign change guarantees a root
                double lo = 0, hi = len;
                for (int it = 0; it < 200; ++it) {
                    double mid = 0.5 * (lo + hi);
                    double s = mdot(std::cosh(mid) * arc.x.v + std::sinh(mid) * dir, l.normal);
                    ((s > 0) == (sx > 0) ? lo : hi) = mid;
                }
                t = 0.5 * (lo + hi);
            }
            c.t = t;
            c.point = HPoint(std::cosh(t) * arc.x.v + std::sinh(t) * dir);
            // the crossed leaf is oriented with its normal toward the y side
            c.oriented = (sy > 0) ? lam.geo(i) : lam.geo(i).reversed();
            c.toward_far = (sy > 0 ? 1.0 : -1.0) * l.normal;
        } else {
            continue;
        }
        out.push_back(c);
    }
    std::sort(out.begin(), out.end(), [](const Crossing& a, const Crossing& b) { return a.t < b.t; });
    return out;
}

double transverse_mass(const FiniteLamination& lam, const TransverseArc& arc) {
    double m = 0;
    for (const auto& c : leaves_crossing(lam, arc))
        m += lam.weight(c.leaf) * ((c.at_start || c.at_end) ? 0.5 : 1.0);
    return m;
}

Vec3 orthogonal_field(const Crossing& c) { return c.toward_far; }

FiniteLamination standard_approximation(const FiniteLamination& lam, const TransverseArc& arc,
                                        double eps, int n) {
    if (n < 1) throw InvalidInput("standard_approximation: n must be positive");
    // extend the arc by eps on both sides along its geodesic
    double len = h2_distance(arc.x, arc.y);
    Vec3 dir = h2_direction(arc.x, arc.y);
    HPoint x0 = h2_exp(arc.x, dir, -eps);
    double total = len + 2 * eps;
    TransverseArc wide{x0, h2_exp(arc.x, dir, len + eps)};
    auto crossings = leaves_crossing(lam, wide);

    // cell boundaries of length < 1/n, nudged off atoms
    int cells = static_cast<int>(std::ceil(total * n)) + 1;
    std::vector<double> bounds(cells + 1);
    for (int i = 0; i <= cells; ++i) bounds[i] = total * i / cells;
    double nudge = std::min(eps, total / cells) / 10.0;
    for (int i = 1; i < cells; ++i) {
        for (const auto& c : crossings)
            while (std::abs(bounds[i] - c.t) < 1e-12) bounds[i] += nudge;
    }

    std::vector<WeightedGeodesic> out;
    std::size_t k = 0;
    for (int i = 0; i < cells; ++i) {
        double mass = 0;
        int pick = -1;
        while (k < crossings.size() && crossings[k].t < bounds[i + 1]) {
            if (pick < 0) pick = crossings[k].leaf;
            mass += lam.weight(crossings[k].leaf);
            ++k;
        }
        if (pick >= 0 && mass > 0) out.push_back({lam.geo(pick), mass});
    }
    return FiniteLamination(std::move(out), lam.basepoint);
}

std::vector<std::vector<int>> reduced_words(int num_generators, int max_length) {
    std::vector<std::vector<int>> words{{}};
    std::vector<std::vector<int>> frontier{{}};
    for (int l = 1; l <= max_length; ++l) {
        std::vector<std::vector<int>> next;
        for (const auto& w : frontier) {
            for (int g = 1; g <= num_generators; ++g) {
                for (int s : {g, -g}) {
                    if (!w.empty() && w.back() == -s) continue;
                    auto nw = w;
                    nw.push_back(s);
                    next.push_back(nw);
                }
            }
        }
        words.insert(words.end(), next.begin(), next.end());
        frontier = std::move(next);
    }
    return words;
}

Mat2r evaluate_word(const std::vector<Mat2r>& generators, const std::vector<int>& word) {
    Mat2r m = Mat2r::id();
    for (int s : word) {
        const Mat2r& g = generators[std::abs(s) - 1];
        m = m * (s > 0 ? g : g.inverse());
    }
    return sl2_normalize(m);
}

FiniteLamination materialize(const OrbitLamination& orbit) {
    const double sinhR = std::sinh(orbit.window_radius);
    std::map<std::pair<long long, long long>, WeightedGeodesic> seen;
    auto key = [](const Geodesic& g) {
        const long long full = llround(2 * kPi * 1e7);
        auto q = [&](double t) { return llround(wrap_angle(t) * 1e7) % full; };
        long long a = q(g.xi_minus), b = q(g.xi_plus);
        return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
    };
    const Vec3 c = orbit.base.basepoint.v;
    for (const auto& word : reduced_words(static_cast<int>(orbit.generators.size()),
                                          orbit.word_length)) {
        Mat3 rot = so21_of(evaluate_word(orbit.generators, word));
        for (const auto& wl : orbit.base.leaves) {
            Vec3 u = rot * wl.geo.normal;
            if (std::abs(mdot(c, u)) >= sinhR) continue;  // misses the window disk
            Geodesic g = Geodesic::from_normal(u);
            auto k = key(g);
            auto it = seen.find(k);
            if (it == seen.end()) {
                seen.emplace(k, WeightedGeodesic{g, wl.weight});
            } else if (std::abs(it->second.weight - wl.weight) > 1e-9) {
                throw InvalidInput("materialize: overlapping translates with distinct weights");
            }
        }
    }
    std::vector<WeightedGeodesic> leaves;
    leaves.reserve(seen.size());
    for (auto& [k, v] : seen) leaves.push_back(v);
    try {
        return FiniteLamination(std::move(leaves), orbit.base.basepoint);
    } catch (const LaminationError& e) {
        throw InvalidInput(std::string("materialize: invariance failure: ") + e.what());
    }
}

}  // namespace wick
