#include "wick/holonomy.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace wick {

Word parse_word(const std::string& text, int num_generators) {
    Word w;
    std::istringstream in(text);
    std::string tok;
    while (in >> tok) {
        bool inverse = false;
        if (tok.size() > 2 && tok.substr(tok.size() - 3) == "^-1") {
            inverse = true;
            tok = tok.substr(0, tok.size() - 3);
        } else if (!tok.empty() && tok.back() == '\'') {
            inverse = true;
            tok.pop_back();
        }
        if (tok.empty() || tok[0] != 'g')
            throw InvalidInput("parse_word: expected tokens like g1 or g2^-1");
        int idx = std::stoi(tok.substr(1));
        if (idx < 1 || idx > num_generators)
            throw InvalidInput("parse_word: generator index out of range");
        w.push_back(inverse ? -idx : idx);
    }
    if (w.empty()) throw InvalidInput("parse_word: empty word");
    return w;
}

std::string word_to_string(const Word& w) {
    std::ostringstream out;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) out << ' ';
        out << 'g' << std::abs(w[i]);
        if (w[i] < 0) out << "^-1";
    }
    return out.str();
}

HolonomyTable::HolonomyTable(std::vector<Mat2r> generators, FiniteLamination base_leaves,
                             double window_radius, int word_length)
    : gens_(std::move(generators)),
      base_(std::move(base_leaves)),
      window_radius_(window_radius),
      base_window_radius_(window_radius),
      word_length_(word_length) {
    double r = window_radius_;
    window_radius_ = 0;
    ensure_window(r);
}

void HolonomyTable::ensure_window(double radius) {
    if (domain_ && radius <= window_radius_ + 1e-12) return;
    window_radius_ = std::max(radius, window_radius_);
    if (gens_.empty()) {
        domain_ = std::make_unique<FlatDomain>(base_);
        return;
    }
    OrbitLamination orbit{gens_, base_, window_radius_, word_length_};
    domain_ = std::make_unique<FlatDomain>(materialize(orbit), window_radius_);
}

namespace {

struct OrbitCrossing {
    double t;          // crossing parameter along [x0, y]
    double weight;
    Geodesic oriented; // leaf oriented with its normal toward the y side
};

// Crossings of the segment [x0, y] with the whole orbit of the base leaves,
// enumerated directly: no global window is materialized.  Duplicate
// translates are removed by their ideal endpoints.
std::vector<OrbitCrossing> orbit_segment_crossings(const std::vector<Mat2r>& gens,
                                                   const FiniteLamination& base,
                                                   const HPoint& x0, const HPoint& y,
                                                   int word_length) {
    std::vector<OrbitCrossing> out;
    if (-mdot(x0.v, y.v) - 1.0 < 1e-14) return out;
    std::set<std::pair<long long, long long>> seen;
    const long long full = llround(2 * kPi * 1e7);
    auto key = [&](const Geodesic& g) {
        auto q = [&](double t) { return llround(wrap_angle(t) * 1e7) % full; };
        long long a = q(g.xi_minus), b = q(g.xi_plus);
        return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
    };
    Vec3 dir = h2_direction(x0, y);
    double len = h2_distance(x0, y);
    auto visit = [&](const Mat2r& g) {
        Mat3 rot = so21_of(g);
        for (const auto& wl : base.leaves) {
            Vec3 u = rot * wl.geo.normal;
            double sx = mdot(x0.v, u), sy = mdot(y.v, u);
            if (std::abs(sx) < kOnLeafEps || std::abs(sy) < kOnLeafEps)
                throw InvalidInput("orbit crossings: segment endpoint on an orbit leaf");
            if ((sx > 0) == (sy > 0)) continue;
            Geodesic oriented = Geodesic::from_normal(sy > 0 ? u : -u);
            auto k = key(oriented);
            if (!seen.insert(k).second) continue;
            double s0 = -mdot(x0.v, oriented.normal);  // positive on the x0 side
            double du = mdot(dir, oriented.normal);
            double t = std::atanh(std::clamp(s0 / du, -1.0 + 1e-15, 1.0 - 1e-15));
            if (!(t > 0 && t < len)) t = std::clamp(t, 1e-12, len - 1e-12);
            out.push_back({t, wl.weight, oriented});
        }
    };
    for_each_group_element(gens, word_length, visit);
    std::sort(out.begin(), out.end(),
              [](const OrbitCrossing& a, const OrbitCrossing& b) { return a.t < b.t; });
    return out;
}

}  // namespace

Vec3 HolonomyTable::tau(const Word& w) {
    Mat2r g = fuchsian(w);
    HPoint target = psl2_act(g, basepoint());
    int wl = std::min(13, word_length_ + static_cast<int>(w.size()));
    Vec3 sum{0, 0, 0};
    for (const auto& c :
         orbit_segment_crossings(gens_, base_, basepoint(), target, gens_.empty() ? 0 : wl))
        sum += c.weight * c.oriented.normal;  // the field points toward the target
    return sum;
}

FlatIsometry HolonomyTable::flat_image(const Word& w) {
    return {so21_of(fuchsian(w)), tau(w)};
}

Mat2c HolonomyTable::hyp_image(const Word& w, double weight_scale) {
    Mat2r g = fuchsian(w);
    HPoint target = psl2_act(g, basepoint());
    int wl = std::min(13, word_length_ + static_cast<int>(w.size()));
    Mat2c out = Mat2c::id();
    int count = 0;
    for (const auto& c :
         orbit_segment_crossings(gens_, base_, basepoint(), target, gens_.empty() ? 0 : wl)) {
        out = out * exp_sl2(Mat2c(translation_generator(c.oriented)) *
                            cplx(0, 0.5 * c.weight * weight_scale));
        if (++count % 16 == 0) out = sl2_normalize(out);
    }
    return sl2_normalize(out * Mat2c(g));
}

AdsIsometry HolonomyTable::ads_image(const Word& w, double weight_scale) {
    Mat2r g = fuchsian(w);
    HPoint target = psl2_act(g, basepoint());
    int wl = std::min(13, word_length_ + static_cast<int>(w.size()));
    Mat2r neg = Mat2r::id(), pos = Mat2r::id();
    int count = 0;
    for (const auto& c :
         orbit_segment_crossings(gens_, base_, basepoint(), target, gens_.empty() ? 0 : wl)) {
        Mat2r x = translation_generator(c.oriented);
        neg = neg * exp_sl2(x * (-0.5 * c.weight * weight_scale));
        pos = pos * exp_sl2(x * (0.5 * c.weight * weight_scale));
        if (++count % 16 == 0) {
            neg = sl2_normalize(neg);
            pos = sl2_normalize(pos);
        }
    }
    return {sl2_normalize(neg * g), sl2_normalize(pos * g)};
}

namespace {

// Branch of (ell, M) from tr = +-2 cosh((ell + iM)/2) with ell >= 0 and
// M in (-pi, pi].
void complex_length(cplx trace, double& ell, double& margulis) {
    for (cplx sign : {cplx(1, 0), cplx(-1, 0)}) {
        cplx z = std::acosh(sign * trace * 0.5);
        if (z.real() < 0) z = -z;
        double m = 2 * z.imag();
        if (m > -kPi + 1e-12 && m <= kPi + 1e-12) {
            ell = 2 * z.real();
            margulis = m;
            return;
        }
    }
    throw InvalidInput("complex_length: no branch with M in (-pi, pi]");
}

}  // namespace

SpectrumEntry spectrum(HolonomyTable& table, const Word& w, int kappa, double weight_scale) {
    SpectrumEntry e;
    e.word = w;
    e.kappa = kappa;
    Mat2r g = table.fuchsian(w);
    if (std::abs(g.tr()) <= 2.0 + 1e-12)
        throw InvalidInput("spectrum: the word is not hyperbolic");
    switch (kappa) {
        case 0: {
            e.ell = translation_length(g);
            Vec3 v = sl2_to_mink(hyperbolic_generator(g));
            e.margulis = mdot(v, table.tau(w)) * weight_scale;
            e.trace = cplx(std::abs(g.tr()), 0);
            break;
        }
        case 1: {
            Mat2c h = table.hyp_image(w, weight_scale);
            e.trace = h.tr();
            complex_length(e.trace, e.ell, e.margulis);
            break;
        }
        case -1: {
            AdsIsometry r = table.ads_image(w, weight_scale);
            double m = translation_length(r.left);
            double n = translation_length(r.right);
            if (m == 0 || n == 0)
                throw InvalidInput("spectrum: an anti-de sitter factor is not hyperbolic");
            e.ell = 0.5 * (m + n);
            e.margulis = 0.5 * (n - m);
            e.trace = cplx(std::abs(r.left.tr()), std::abs(r.right.tr()));
            break;
        }
        default:
            throw InvalidInput("spectrum: kappa must be 0, 1 or -1");
    }
    return e;
}

RayDerivative ray_derivative(HolonomyTable& table, const Word& w, int kappa, double step) {
    RayDerivative out;
    out.margulis0 = spectrum(table, w, 0).margulis;
    if (kappa == 0) {
        SpectrumEntry plus = spectrum(table, w, 0, step);
        SpectrumEntry minus = spectrum(table, w, 0, -step);
        out.d_ell = 0.0;  // the flat length does not depend on the weights
        out.d_margulis = (plus.margulis - minus.margulis) / (2 * step);
        return out;
    }
    SpectrumEntry plus = spectrum(table, w, kappa, step);
    SpectrumEntry minus = spectrum(table, w, kappa, -step);
    out.d_ell = (plus.ell - minus.ell) / (2 * step);
    out.d_margulis = (plus.margulis - minus.margulis) / (2 * step);
    return out;
}

double em_derivative_residual(const FiniteLamination& lam, const HPoint& x, const HPoint& y,
                              double step) {
    Mat2c expect{cplx(0, 0), cplx(0, 0), cplx(0, 0), cplx(0, 0)};
    if (-mdot(x.v, y.v) - 1.0 > 1e-14) {
        for (const auto& c : leaves_crossing(lam, {x, y})) {
            double w = lam.weight(c.leaf) * ((c.at_start || c.at_end) ? 0.5 : 1.0);
            expect = expect + Mat2c(translation_generator(c.oriented)) * cplx(0.5 * w, 0);
        }
    }
    Mat2c fd = (quake_bend(lam, cplx(step, 0), x, y) - quake_bend(lam, cplx(-step, 0), x, y)) *
               cplx(0.5 / step, 0);
    return fnorm(fd - expect);
}

CoboundarySolution coboundary_solve(HolonomyTable& table) {
    // stack (I - gamma_k) b = tau_k over the generators; solve the normal
    // equations of the 3k x 3 system
    double ata[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
    double aty[3] = {0, 0, 0};
    std::vector<std::pair<Mat3, Vec3>> rows;
    for (int k = 1; k <= table.num_generators(); ++k) {
        Word w{k};
        Mat3 lin = so21_of(table.fuchsian(w));
        Vec3 t = table.tau(w);
        Mat3 a;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) a.m[i][j] = (i == j ? 1.0 : 0.0) - lin.m[i][j];
        rows.push_back({a, t});
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                aty[j] += a.m[i][j] * t[i];
                for (int l = 0; l < 3; ++l) ata[j][l] += a.m[i][j] * a.m[i][l];
            }
        }
    }
    // 3x3 solve by gaussian elimination with a tiny ridge for the static case
    double m[3][4];
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) m[i][j] = ata[i][j] + (i == j ? 1e-14 : 0.0);
        m[i][3] = aty[i];
    }
    for (int c = 0; c < 3; ++c) {
        int piv = c;
        for (int r = c + 1; r < 3; ++r)
            if (std::abs(m[r][c]) > std::abs(m[piv][c])) piv = r;
        std::swap(m[c], m[piv]);
        for (int r = 0; r < 3; ++r) {
            if (r == c) continue;
            double f = m[r][c] / m[c][c];
            for (int j = c; j < 4; ++j) m[r][j] -= f * m[c][j];
        }
    }
    CoboundarySolution sol;
    sol.b = Vec3{m[0][3] / m[0][0], m[1][3] / m[1][1], m[2][3] / m[2][2]};
    double res2 = 0;
    for (const auto& [a, t] : rows) {
        Vec3 r = a * sol.b - t;
        res2 += r[0] * r[0] + r[1] * r[1] + r[2] * r[2];
    }
    sol.residual = std::sqrt(res2);
    return sol;
}

ThreeCusp three_cusp_build(double a1, double a2, double a3, double window_radius,
                           int word_length) {
    if (!(a1 > 0 && a2 > 0 && a3 > 0))
        throw InvalidInput("three_cusp_build: weights must be positive");
    Mat2r g1{1, 2, 0, 1};  // z -> z + 2
    Mat2r g2{1, 0, 2, 1};  // z -> z / (2z + 1)
    HPoint base = uhp_to_h2(cplx(0.5, std::sqrt(3.0) / 2.0));  // incenter of (0, 1, inf)
    Geodesic e1 = Geodesic::from_endpoints(boundary_angle_of_real(0.0), 0.0);
    Geodesic e2 = Geodesic::from_endpoints(boundary_angle_of_real(1.0), 0.0);
    Geodesic e3 = Geodesic::from_endpoints(boundary_angle_of_real(0.0),
                                           boundary_angle_of_real(1.0));
    FiniteLamination leaves({{e1, a1}, {e2, a2}, {e3, a3}}, base);
    ThreeCusp out{HolonomyTable({g1, g2}, std::move(leaves), window_radius, word_length),
                  Word{1},          // fixes infinity
                  Word{2},          // fixes 0
                  Word{1, -2},      // g1 g2^-1 fixes 1
                  a1 + a2, a1 + a3, a2 + a3};
    return out;
}

}  // namespace wick
