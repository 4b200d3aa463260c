#pragma once

#include <array>
#include <functional>
#include <utility>
#include <vector>

#include "oscdecay/fit.hpp"
#include "oscdecay/surface.hpp"
#include "oscdecay/weights.hpp"

namespace oscdecay::convolution {

using Point4 = std::array<double, 4>;

// delta-box test data. R_delta is the box whose translates cover
// x - Gamma(y) for x in A_delta, y in E_delta = delta.Q; M is the sup of
// max(|phi1|, |phi2|) over the reference patch Q = [1/2,1] x s_band.
struct DeltaBox {
    double delta = 0.0;
    double M = 0.0;
    std::pair<double, double> s_band{0.0, 0.0};
    Point4 half{};      // R_delta half-widths (2 d^a1, 2 d^a2, (2M+1) d^m x2)
    double z_thick = 0.0;  // A_delta z half-thickness delta^m

    // s_band {0, 0} selects the middle third of (c, d). Throws
    // std::invalid_argument on delta outside (0,1) or a bad band.
    DeltaBox(const SurfaceMap& phi, const Weights& w, const SectorRegion& r,
             double delta, std::pair<double, double> s_band = {0.0, 0.0});
};

// |Q| = (s2 - s1) * a1/(a1+a2) * (1 - 2^{-(a1+a2)}); |E_delta| is
// delta^{a1+a2} times this.
double patch_measure(const Weights& w, const DeltaBox& box);

// |A_delta| = |E_delta| * (2 delta^m)^2, closed form.
double a_delta_measure(const Weights& w, const DeltaBox& box);

// |R_delta|^{1/p}, the exact L^p norm of the box indicator.
double box_f_norm(const DeltaBox& box, double p);

// Maps patch parameters (tau in [1/2,1], s in s_band, zt in [-1,1]^2) to
// the point (y, phi(y) + delta^m zt) of A_delta, y = (delta tau).(1, s).
Point4 a_delta_sample(const SurfaceMap& phi, const Weights& w,
                      const DeltaBox& box, double tau, double s, double z1,
                      double z2);

using TestFunction = std::function<double(const Point4&)>;

struct ConvolveSettings {
    std::size_t t_panels = 64;   // generic path: (u, s) Gauss grid
    std::size_t s_panels = 64;
    int gl = 4;
    std::size_t box_scan_n = 2048;  // box path: s-scan resolution
};

// (mu * f)(x) = int_V f(x' - y, x'' - phi(y)) dy by Gauss quadrature in
// the (t, s) parameters (radial substitution u = t^{a1}).
double convolve_mu(const SurfaceMap& phi, const Weights& w,
                   const SectorRegion& r, const TestFunction& f,
                   const Point4& x, const ConvolveSettings& st = {});

// Same convolution against the R_delta indicator. For fixed s every
// constraint cuts one t-interval out of a monomial window, so the
// t-integral collapses to a closed form and only the s-scan is numeric.
double convolve_mu_box(const SurfaceMap& phi, const Weights& w,
                       const SectorRegion& r, const DeltaBox& box,
                       const Point4& x, const ConvolveSettings& st = {});

struct BoxFit {
    ScalingFit fit;
    double predicted_slope = 0.0;  // (a1+a2) + (a1+a2+2m)/q
    double q = 0.0;
    double M = 0.0;
    std::pair<double, double> s_band{0.0, 0.0};
    std::vector<double> delta_list;
    std::vector<double> norms;       // ||mu * f_delta||_{L^q(A_delta)}
    std::vector<double> f_norms;     // |R_delta|^{1/p} with p = q here
    std::vector<double> a_measures;  // |A_delta|
};

// Fits log ||mu * f_delta||_{L^q(A_delta)} against log delta.
// Preconditions: >= 6 deltas in (0,1) spanning >= 2 decades. Throws
// DegenerateFitError when the slope misses the prediction by > 0.1.
BoxFit box_lower_bound_fit(const SurfaceMap& phi, const Weights& w,
                           const SectorRegion& r, double q,
                           const std::vector<double>& delta_list,
                           const ConvolveSettings& st = {}, int jobs = 0);

struct TypeSetVertex {
    double inv_p = 0.0;  // (a1+a2+m) / (a1+a2+2m)
    double inv_q = 0.0;  // 1 - inv_p
};

TypeSetVertex typeset_vertex(const Weights& w);

enum class TestFamily { box, gaussian };

struct ProbeSample {
    double param = 0.0;  // dyadic scale of the family member
    double norm_q = 0.0;
    double norm_p = 0.0;
    double ratio = 0.0;
};

struct ProbeResult {
    double p = 0.0, q = 0.0;
    TestFamily family = TestFamily::box;
    double sup_ratio = 0.0;
    double arg_param = 0.0;
    std::vector<ProbeSample> samples;
    // Monotone growth with more than 2x overall increase; the delta-box
    // family realizes this whenever (1/p, 1/q) lies outside the scaling
    // line through the type-set vertex.
    bool growth_suspected = false;
};

// Empirical sup of ||mu * f||_q / ||f||_p over n_tests dyadic family
// members. Not an operator-norm computation: the q-norm is taken over
// the anchored patch A_delta (box) or a fixed neighborhood of the graph
// (gaussian).
ProbeResult operator_norm_probe(const SurfaceMap& phi, const Weights& w,
                                const SectorRegion& r, double p, double q,
                                TestFamily family, int n_tests,
                                const ConvolveSettings& st = {}, int jobs = 0);

} // namespace oscdecay::convolution
