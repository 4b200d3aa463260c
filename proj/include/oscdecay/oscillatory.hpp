#pragma once

#include <complex>
#include <vector>

#include "oscdecay/weights.hpp"

namespace oscdecay::fourier {

enum class QuadStatus { ok, budget_exceeded };

struct OscResult {
    std::complex<double> value{0.0, 0.0};
    double abs_error_estimate = 0.0;
    long long panels_used = 0;
    QuadStatus status = QuadStatus::ok;
};

// Panel policy for the 1D oscillatory kernel: composite Gauss panels whose
// length never exceeds min(h_max, 2*pi / (panels_per_period * local rate)),
// evaluated once as configured and once at doubled panel density; the
// difference of the two levels is the error estimate and the finer value
// is reported.
struct OscSettings {
    double h_max = 0.05;
    double panels_per_period = 8.0;
    int gauss_order = 5;
    long long max_panels = 4'000'000;
};

// I(A1, A2, A3) = int_0^1 e^{-i(A1 t^a1 + A2 t^a2 + A3 t^m)} t^{a1+a2-1} dt.
// Computed after u = t^{a1+a2}, which removes the algebraic weight and
// turns the phase into A1 u^{g1} + A2 u^{g2} + A3 u^{gamma} with
// g_i = alpha_i/(a1+a2); the integrand is then e^{-i Phi(u)}/(a1+a2).
OscResult oscillatory_integral_1d(const Weights& w, double A1, double A2,
                                  double A3, const OscSettings& st = {});

// Empirical scan of the normalized magnitude |I| * |A3|^{(a1+a2)/m} over a
// grid of (A1, A2) co-scaled with A3 (A1 = a |A3|^{a1/m}, A2 = b |A3|^{a2/m},
// the scaling under which the normalized oscillator is invariant).
struct VdcScan {
    struct Sample {
        double A3;
        double a;
        double b;
        double normalized;  // |I| * |A3|^exponent
    };
    struct DecadeSup {
        int decade;  // floor(log10 |A3|)
        double sup;
    };

    std::vector<Sample> samples;
    std::vector<DecadeSup> decade_sups;
    double overall_sup = 0.0;
    double exponent = 0.0;       // normalization exponent actually used
    bool growth_flagged = false; // monotone decade growth by more than 2x
};

// fake_exponent, when >= 0, replaces the theoretical (a1+a2)/m in the
// normalization; the scan then acts as its own negative control.
VdcScan vdc_constant_scan(const Weights& w, const std::vector<double>& A3_list,
                          double grid_half_width = 3.0, int grid_n = 7,
                          double fake_exponent = -1.0,
                          const OscSettings& st = {}, int jobs = 0);

} // namespace oscdecay::fourier
