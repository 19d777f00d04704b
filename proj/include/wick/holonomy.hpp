#pragma once

#include <memory>

#include "wick/rescaling.hpp"

// The three holonomy representations of a lamination-invariant group, their
// length and rotation spectra in the three curvatures, derivatives along the
// ray of scaled laminations, and the coboundary test for the flat holonomy.

namespace wick {

// A word in the generators: positive index k = generators[k-1], negative its
// inverse.
using Word = std::vector<int>;

Word parse_word(const std::string& text, int num_generators);
std::string word_to_string(const Word& w);

struct FlatIsometry {
    Mat3 linear;
    Vec3 translation;
    Vec3 apply(const Vec3& p) const { return linear * p + translation; }
};

class HolonomyTable {
  public:
    HolonomyTable(std::vector<Mat2r> generators, FiniteLamination base_leaves,
                  double window_radius, int word_length);

    int num_generators() const { return static_cast<int>(gens_.size()); }
    const Mat2r& generator(int i) const { return gens_[i]; }
    const FlatDomain& domain() const { return *domain_; }
    const HPoint& basepoint() const { return base_.basepoint; }
    OrbitLamination orbit() const { return {gens_, base_, base_window_radius_, word_length_}; }

    Mat2r fuchsian(const Word& w) const { return evaluate_word(gens_, w); }

    // Translation cocycle tau(w) = rho(w x0); grows the window on demand.
    Vec3 tau(const Word& w);

    FlatIsometry flat_image(const Word& w);                    // gamma + tau(gamma)
    Mat2c hyp_image(const Word& w, double weight_scale = 1.0); // B(x0, w x0) w
    AdsIsometry ads_image(const Word& w, double weight_scale = 1.0);

  private:
    void ensure_window(double radius);

    std::vector<Mat2r> gens_;
    FiniteLamination base_;
    double window_radius_;
    double base_window_radius_;
    int word_length_;
    std::unique_ptr<FlatDomain> domain_;
};

struct SpectrumEntry {
    Word word;
    int kappa = 0;
    double ell = 0;
    double margulis = 0;
    cplx trace{0, 0};  // trace of the image in the target group
};

// kappa = 0: translation length and the Margulis invariant <v, tau>;
// kappa = +1: tr h = +-2 cosh((ell + i M)/2), M in (-pi, pi];
// kappa = -1: half sum/difference of the two translation lengths.
SpectrumEntry spectrum(HolonomyTable& table, const Word& w, int kappa,
                       double weight_scale = 1.0);

// Central differences of t -> spectrum(t lambda) at t = 0.
struct RayDerivative {
    double d_ell = 0;
    double d_margulis = 0;
    double margulis0 = 0;  // the flat Margulis invariant, the expected slope
};
RayDerivative ray_derivative(HolonomyTable& table, const Word& w, int kappa, double step = 1e-3);

// || d/dz E_{z lambda}(x,y) |_0 - (1/2) sum w_i X_i ||, by central differences.
double em_derivative_residual(const FiniteLamination& lam, const HPoint& x, const HPoint& y,
                              double step = 1e-4);

// Least squares b with tau(g_k) = b - g_k b over the generators; a residual
// near zero certifies that the flat holonomy is conjugate to its linear part.
struct CoboundarySolution {
    Vec3 b;
    double residual = 0;
};
CoboundarySolution coboundary_solve(HolonomyTable& table);

// The punctured-sphere lamination: two parabolic generators, the three edge
// classes of the standard ideal triangle with weights (a1, a2, a3), and the
// three cusp words with crossing masses a1+a2, a1+a3, a2+a3.
struct ThreeCusp {
    HolonomyTable table;
    Word cusp_inf, cusp_zero, cusp_one;
    double expected_mass_inf, expected_mass_zero, expected_mass_one;
};
ThreeCusp three_cusp_build(double a1, double a2, double a3, double window_radius = 2.4,
                           int word_length = 6);

}  // namespace wick
