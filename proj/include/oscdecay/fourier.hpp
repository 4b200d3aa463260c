#pragma once

#include <complex>
#include <vector>

#include "oscdecay/fit.hpp"
#include "oscdecay/oscillatory.hpp"
#include "oscdecay/surface.hpp"
#include "oscdecay/weights.hpp"

namespace oscdecay::fourier {

struct Frequency4 {
    Point2 xi_prime{0.0, 0.0};
    Point2 xi_dprime{0.0, 0.0};
};

// Quadrature policy for mu^: the inner u-integral follows the 1D panel
// rule; the outer s-integral uses wavelength-proportional panels against
// the envelope rate |xi2| + |xi''| max|G_s|. One recomputation with both
// panel densities doubled supplies the error estimate.
struct MuHatSettings {
    double h_max_u = 0.05;
    double h_max_s = 0.0;  // 0 => (d - c) / 8
    double ppp_u = 8.0;
    double ppp_s = 8.0;
    int gl_u = 4;
    int gl_s = 4;
    long long max_node_pairs = 2'000'000'000;
};

// mu^(xi) = alpha1 int_c^d int_0^1
//   e^{-i(xi1 t^a1 + xi2 s t^a2 + t^m <phi(1,s), xi''>)} t^{a1+a2-1} dt ds.
OscResult mu_hat(const SurfaceMap& phi, const Weights& w, const SectorRegion& r,
                 const Frequency4& xi, const MuHatSettings& st = {});

struct DecaySample {
    double R;
    std::complex<double> value;
    double err;
    bool excluded = false;  // |value| below 10x its error estimate
};

struct DecayFitEntry {
    Point2 direction;
    Point2 xi_prime;
    ScalingFit fit;
    std::vector<DecaySample> samples;
    int excluded_count = 0;
};

struct DecayReport {
    std::vector<DecayFitEntry> entries;
    double worst_slope = 0.0;   // largest fitted slope across entries
    double min_r_squared = 1.0;
    double c_emp = 0.0;         // sup over samples of |mu^| * R^{1/gamma}
    double target_slope = 0.0;  // -(a1+a2)/m
    QuadStatus status = QuadStatus::ok;
};

// Fits log |mu^(xi', R dir)| against log R for every (direction, xi')
// pair. Preconditions: >= 8 radii spanning >= 3 decades.
DecayReport decay_fit(const SurfaceMap& phi, const Weights& w,
                      const SectorRegion& r,
                      const std::vector<Point2>& directions,
                      const std::vector<Point2>& xi_primes,
                      const std::vector<double>& radii,
                      const MuHatSettings& st = {}, int jobs = 0);

// Default direction set for decay runs: n unit vectors at angles
// offset half a step from the axes (the axes can carry in-region zeros
// of G, where desk-scale radii are still pre-asymptotic).
std::vector<Point2> default_directions(int n);

// int_c^d |G(zeta, s)|^{-1/gamma} ds with dyadic refinement toward the
// zeros of G(zeta, .); grid_n controls both zero detection and the panel
// density of the regular part.
struct SingularZetaResult {
    double value = 0.0;
    bool divergence_suspected = false;
    std::vector<double> zeros;
};

SingularZetaResult singular_integral_zeta(const SurfaceMap& phi, const Weights& w,
                                          const SectorRegion& r, const Point2& zeta,
                                          int grid_n = 2048);

struct SingularResult {
    double sup_value = 0.0;
    double argmax_angle = 0.0;
    double refinement_ratio = 0.0;  // sup at grid_n / sup at 2*grid_n
    bool divergence_suspected = false;
    int zeta_angles = 0;
    int grid_n = 0;
};

// Requires zeta_angles >= 360; zeta sampled as (cos theta, sin theta) at
// uniform angles.
SingularResult singular_integral_sup(const SurfaceMap& phi, const Weights& w,
                                     const SectorRegion& r, int zeta_angles,
                                     int grid_n = 2048, int jobs = 0);

} // namespace oscdecay::fourier
