#pragma once

#include <array>
#include <complex>
#include <utility>
#include <vector>

#include "oscdecay/fit.hpp"
#include "oscdecay/fourier.hpp"
#include "oscdecay/surface.hpp"
#include "oscdecay/weights.hpp"

namespace oscdecay::restriction {

// Anisotropic Knapp cap data. Q is the reference patch
// {t.(1, s) : t in [1/2, 1], s in s_band}; eta shrinks it until
// |phi| < 1 on eta.Q and the rescaled s-band sits inside [-1, 1], so
// every phase argument of the box transform stays <= 2 on the cap
// F_eps = (eps*eta).Q uniformly in eps.
struct KnappBox {
    double epsilon = 0.0;
    double eta = 0.0;
    std::pair<double, double> s_band{0.0, 0.0};
    double sup_abs_phi = 0.0;  // sup over Q of max(|phi1|, |phi2|)

    // s_band {0, 0} selects the default: the middle third of (c, d).
    // Throws std::invalid_argument on epsilon outside (0,1) or a band
    // not strictly inside (c, d).
    KnappBox(const SurfaceMap& phi, const Weights& w, const SectorRegion& r,
             double epsilon, std::pair<double, double> s_band = {0.0, 0.0});
};

// Fourier transform of the indicator of E_eps = eps^{-1} (.) [0,1]^4:
// the product over coordinates of (1 - e^{-i xi_j L_j}) / (i xi_j) with
// side lengths L = (eps^{-a1}, eps^{-a2}, eps^{-m}, eps^{-m}).
std::complex<double> knapp_box_transform(const Weights& w, double epsilon,
                                         const fourier::Frequency4& xi);

enum class NormDomain {
    full_region,  // all of V (t in (0,1], s in [c,d])
    knapp_patch,  // F_eps = (eps*eta).Q only
};

struct RestrictionNormSettings {
    NormDomain domain = NormDomain::knapp_patch;
    bool unit_integrand = false;  // test hook: integrate 1 instead of |f^|
    double ppp = 8.0;             // panels per period along the radial axis
    int gl = 6;
    std::size_t min_panels = 8;
    std::size_t max_panels = 100000;
};

// ( int_V |f^_eps(x, phi(x))|^q dmu )^{1/q} by quadrature in the (t, s)
// parameters with the Jacobian weight a1 t^{a1+a2-1}.
double restriction_norm(const SurfaceMap& phi, const Weights& w,
                        const SectorRegion& r, const KnappBox& box, double q,
                        const RestrictionNormSettings& st = {});

// Exact L^p norm of the box family: ||f_eps||_p = eps^{-(a1+a2+2m)/p}.
double knapp_f_norm(const Weights& w, double epsilon, double p);

struct KnappFit {
    ScalingFit fit;
    double predicted_slope = 0.0;  // -(a1+a2+2m) + (a1+a2)/q
    double q = 0.0;
    double eta = 0.0;
    std::pair<double, double> s_band{0.0, 0.0};
    std::vector<double> eps_list;
};

// Fits log ||R f_eps||_{L^q(Sigma_eps, dmu)} against log eps over the
// given epsilons. Preconditions: >= 6 epsilons spanning >= 2 decades,
// all inside [2^{-12}, 1). Throws DegenerateFitError when the fitted
// slope strays more than 0.05 from the prediction.
KnappFit knapp_exponent_fit(const SurfaceMap& phi, const Weights& w,
                            const SectorRegion& r, double q,
                            const std::vector<double>& eps_list,
                            const RestrictionNormSettings& st = {},
                            int jobs = 0);

struct ExponentTable {
    double restriction_threshold = 0.0;  // (a1+a2+4m) / (2(a1+a2+2m))
    std::array<std::array<double, 2>, 4> quadrilateral{};  // (1/p, 1/q)
    double knapp_slope_factor = 0.0;     // (a1+a2+2m) / (a1+a2)
};

ExponentTable critical_exponents(const Weights& w);

} // namespace oscdecay::restriction
