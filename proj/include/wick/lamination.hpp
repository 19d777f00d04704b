#pragma once

#include <string>
#include <vector>

#include "wick/models.hpp"

// Finite measured geodesic laminations: ordered families of pairwise
// disjoint weighted geodesics with a base point, transverse arcs and their
// masses, group-orbit laminations truncated to a window, and standard
// finite approximations.

namespace wick {

inline constexpr double kDisjointEps = 1e-8;  // angular separation for the unlinking test
inline constexpr double kOnLeafEps = 1e-9;    // |<x,u>| below this counts as "on the leaf"

struct WeightedGeodesic {
    Geodesic geo;
    double weight = 1.0;
};

struct LaminationError : InvalidInput {
    int leaf_a = -1, leaf_b = -1;
    LaminationError(const std::string& what, int a, int b)
        : InvalidInput(what), leaf_a(a), leaf_b(b) {}
};

// True iff the two geodesics are disjoint in the open disk: their endpoint
// pairs do not strictly interleave on the circle.  Leaves sharing an ideal
// endpoint are disjoint.
bool geodesics_disjoint(const Geodesic& a, const Geodesic& b, double eps = kDisjointEps);

struct FiniteLamination {
    std::vector<WeightedGeodesic> leaves;  // canonically ordered by endpoint angles
    HPoint basepoint;
    bool basepoint_on_leaf = false;
    int basepoint_leaf = -1;

    FiniteLamination() = default;
    FiniteLamination(std::vector<WeightedGeodesic> lv, HPoint base,
                     bool allow_basepoint_on_leaf = false);

    int size() const { return static_cast<int>(leaves.size()); }
    const Geodesic& geo(int i) const { return leaves[i].geo; }
    double weight(int i) const { return leaves[i].weight; }

    FiniteLamination scaled(double t) const;
};

struct TransverseArc {
    HPoint x, y;  // the geodesic segment [x, y]
};

struct Crossing {
    int leaf = -1;
    double t = 0.0;        // arc-length parameter from x
    HPoint point;          // crossing point
    Vec3 toward_far;       // unit normal at the crossing pointing toward y
    Geodesic oriented;     // leaf oriented with its normal toward the y side
    bool at_start = false; // arc endpoint x lies on the leaf
    bool at_end = false;   // arc endpoint y lies on the leaf
};

// Leaves met by the arc, ordered by the crossing parameter.  Endpoints of
// the arc lying on a leaf produce flagged crossings at t=0 / t=length.
std::vector<Crossing> leaves_crossing(const FiniteLamination& lam, const TransverseArc& arc);

// Total weight crossed; an endpoint on a leaf contributes half its weight.
double transverse_mass(const FiniteLamination& lam, const TransverseArc& arc);

// The unit spacelike field driving the boundary cocycle: orthogonal to the
// leaf at the crossing point and pointing toward the terminal endpoint.
Vec3 orthogonal_field(const Crossing& c);

// Standard finite approximation: subdivide the arc's epsilon-extension into
// cells of length < 1/n, concentrate each cell's mass on one of its leaves.
FiniteLamination standard_approximation(const FiniteLamination& lam, const TransverseArc& arc,
                                        double eps, int n);

struct OrbitLamination {
    std::vector<Mat2r> generators;
    FiniteLamination base;
    double window_radius = 2.0;
    int word_length = 4;
};

// All distinct translates of the base leaves by group words of length at
// most the bound whose geodesics meet the window disk around the base point.
FiniteLamination materialize(const OrbitLamination& orbit);

// Enumerate reduced words (no immediate backtracking) up to the length
// bound, as generator-index strings; index k encodes generators[k], negative
// encodes the inverse.
std::vector<std::vector<int>> reduced_words(int num_generators, int max_length);

Mat2r evaluate_word(const std::vector<Mat2r>& generators, const std::vector<int>& word);

// Depth-first walk over all reduced words up to the length bound, handing
// each group element to the callback without storing the words.
template <typename Fn>
void for_each_group_element(const std::vector<Mat2r>& generators, int max_length, const Fn& fn) {
    fn(Mat2r::id());
    struct Frame {
        Mat2r m;
        int last;
        int depth;
    };
    std::vector<Frame> stack;
    const int k = static_cast<int>(generators.size());
    for (int s = 1; s <= k; ++s) {
        stack.push_back({generators[s - 1], s, 1});
        stack.push_back({generators[s - 1].inverse(), -s, 1});
    }
    while (!stack.empty()) {
        Frame f = stack.back();
        stack.pop_back();
        fn(f.m);
        if (f.depth >= max_length) continue;
        for (int s = 1; s <= k; ++s) {
            if (f.last != -s) {
                Mat2r m = f.m * generators[s - 1];
                if (f.depth % 8 == 7) m = sl2_normalize(m);
                stack.push_back({m, s, f.depth + 1});
            }
            if (f.last != s) {
                Mat2r m = f.m * generators[s - 1].inverse();
                if (f.depth % 8 == 7) m = sl2_normalize(m);
                stack.push_back({m, -s, f.depth + 1});
            }
        }
    }
}

}  // namespace wick
