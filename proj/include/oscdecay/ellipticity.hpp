#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "oscdecay/fit.hpp"
#include "oscdecay/surface.hpp"
#include "oscdecay/weights.hpp"

namespace oscdecay::ellipticity {

// Matrix K(x) of the quadratic form Q_x(zeta) = <K(x) zeta, zeta> built
// from the Hessians of phi1, phi2.
struct SymmetricMatrix2 {
    double k11;
    double k12;
    double k22;

    double det() const { return k11 * k22 - k12 * k12; }
    double trace() const { return k11 + k22; }
};

struct EigenPair {
    double lambda1;  // lambda1 <= lambda2
    double lambda2;
};

enum class PointClass { elliptic, nonelliptic };

struct Classification {
    PointClass cls;
    EigenPair eigen;
    double min_abs_q;  // min_zeta |Q_x(zeta)| = min |Lambda_i| when same-signed
};

// k11 = det Hess phi1, k22 = det Hess phi2,
// k12 = (phi1_xx phi2_yy + phi1_yy phi2_xx - 2 phi1_xy phi2_xy) / 2.
SymmetricMatrix2 k_matrix(const SurfaceMap& phi, const Point2& x);

// Closed-form eigenvalues of a symmetric 2x2 matrix.
EigenPair eigenvalues(const SymmetricMatrix2& K);

Classification classify_point(const SurfaceMap& phi, const Weights& w,
                              const Point2& x, double tol = 1e-8);

// Max relative residual of the Hessian-determinant identity
//   alpha1^2 det(zeta1 phi1''(1,s) + zeta2 phi2''(1,s))
//     = m(m-alpha1) G G_ss + alpha2(alpha1-alpha2) s G_s G_ss - (m-alpha2)^2 G_s^2
// over the sample list. Throws if phi fails the homogeneity check (the
// identity is a consequence of the Euler relations).
double verify_euler_identity(const SurfaceMap& phi, const Weights& w,
                             const std::vector<std::pair<Point2, double>>& samples);

struct SigmaScan {
    std::vector<double> candidates;  // refined nonelliptic parameter values
    bool h3_holds() const { return candidates.size() == 1; }
};

// Scans s -> min_i |Lambda_i(1, s)| over [c, d] on grid_n points, brackets
// the near-zero local minima and refines each by golden-section search.
SigmaScan find_sigma(const SurfaceMap& phi, const Weights& w,
                     const SectorRegion& r, int grid_n = 512);

enum class Side { left, right };

struct DegeneracyResult {
    int n = 0;            // fitted vanishing order
    double D = 0.0;       // empirical inf of value / |s - sigma|^n
    ScalingFit fit;
    double t_scaling_max_rel_err = 0.0;  // check of the t^beta factor
    bool absent = false;  // no one-sided neighborhood inside the region
    std::string note;
};

// Fits min_i |Lambda_i(1, sigma -/+ 2^-k)| against the dyadic offsets.
// Offsets are clipped to the region: k starts at the smallest value with
// 2^-k inside half the region width, so narrow regions are handled.
// Throws a degenerate_fit error (std::runtime_error) if R^2 < 0.99 or the
// slope is not within 0.1 of an integer.
DegeneracyResult degeneracy_orders(const SurfaceMap& phi, const Weights& w,
                                   const SectorRegion& r, double sigma,
                                   Side side, int depths = 8);

struct H4Result {
    bool pass;
    double margin;  // (2m/(alpha1+alpha2) - 3) - max{n1, n2}
    double bound;
};

H4Result check_H4(std::optional<int> n1, std::optional<int> n2, const Weights& w);

// f1 = m(m-a1) G G_ss, f2 = (m-a2)^2 G_s^2, f3 = a2(a1-a2) s G_s G_ss,
// H = f1 - f2 + f3.
struct HParts {
    double H;
    double f1;
    double f2;
    double f3;
};

HParts H_eval(const SurfaceMap& phi, const Weights& w, const Point2& zeta,
              double s);

// Connected-component counts of the five threshold sets
//   {f1 > thr}, {f1 < -thr}, {f2 > thr}, {f3 > thr}, {f3 < -thr}
// on a uniform grid. For sides left/right the threshold is
// (C/4)|s-sigma|^n on (sigma-delta, sigma) resp. (sigma, sigma+delta);
// for the interval variant around tau the threshold is the constant C/4
// on (tau-delta, tau+delta) intersected with [c, d].
struct ThresholdSetCount {
    std::string set_id;   // "I1".."I5", "J1".."J5", "K1".."K5"
    double zeta_angle;
    int component_count;
    int grid_n;
};

struct ThresholdQuery {
    double sigma;
    double delta;
    double C;
    int n;                 // vanishing order used in the threshold
    Side side = Side::left;
    std::optional<double> tau;  // set => K-variant on (tau-delta, tau+delta)
};

std::vector<ThresholdSetCount> threshold_components(
    const SurfaceMap& phi, const Weights& w, const SectorRegion& r,
    const Point2& zeta, const ThresholdQuery& q, int grid_n = 4096);

// Aggregate H1-H4 report used by the CLI and the acceptance harness.
struct EllipticityReport {
    bool h1_structural = true;  // polynomial components: always true here
    HomogeneityReport h2;
    SigmaScan sigma_scan;
    double sigma = 0.0;
    std::optional<int> n1;
    std::optional<int> n2;
    double D_estimate = 0.0;
    double D_tilde_estimate = 0.0;
    std::vector<ScalingFit> fits;
    std::optional<H4Result> h4;
    bool all_pass = false;
};

EllipticityReport run_hypothesis_suite(const SurfaceMap& phi, const Weights& w,
                                       const SectorRegion& r);

} // namespace oscdecay::ellipticity
