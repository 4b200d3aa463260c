#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "oscdecay/polynomial.hpp"
#include "oscdecay/weights.hpp"

namespace oscdecay {

using Point2 = std::array<double, 2>;

// phi = (phi1, phi2): R^2 -> R^2 with polynomial components.
struct SurfaceMap {
    BivariatePolynomial phi1;
    BivariatePolynomial phi2;

    Point2 eval(double x, double y) const {
        return {phi1.eval(x, y), phi2.eval(x, y)};
    }
};

// Parameter box of the sector V_1^{c,d} = { t.(1,s) : s in (c,d), 0 < t < 1 }.
struct SectorRegion {
    double c;
    double d;
    double t_max = 1.0;

    SectorRegion(double c_, double d_) : c(c_), d(d_) {
        if (!(c < d)) throw std::invalid_argument("SectorRegion: need c < d");
    }
};

// Jet of the section function G(zeta, s) = <phi(1,s), zeta> in s.
struct SectionJet {
    double G;
    double G_s;
    double G_ss;
};

// Anisotropic dilation t.x.
Point2 dilate(const Weights& w, double t, const Point2& x);

struct HomogeneityReport {
    bool monomials_ok = false;       // every monomial satisfies a1*i + a2*j = m
    bool spot_checks_ok = false;     // phi(t.x) = t^m phi(x) on samples
    bool weight_inequality_ok = false;  // m >= 3(alpha1 + alpha2)
    std::vector<std::pair<int, int>> offending;  // monomial (i, j) exponents
    double max_spot_rel_error = 0.0;

    bool pass() const { return monomials_ok && spot_checks_ok; }
};

// Exact exponent test plus a deterministic numeric spot check of the
// scaling relation. The weight inequality is reported alongside so a
// single call answers the full H2 question.
HomogeneityReport check_quasi_homogeneous(const SurfaceMap& phi, const Weights& w);

// Precomputed s-section polynomials of both components and their first
// two derivatives; the hot kernels evaluate these directly.
struct SectionCache {
    Poly1 p1, p1s, p1ss;
    Poly1 p2, p2s, p2ss;

    explicit SectionCache(const SurfaceMap& phi);

    double G(double z1, double z2, double s) const {
        return z1 * p1.eval(s) + z2 * p2.eval(s);
    }
    double G_s(double z1, double z2, double s) const {
        return z1 * p1s.eval(s) + z2 * p2s.eval(s);
    }
    double G_ss(double z1, double z2, double s) const {
        return z1 * p1ss.eval(s) + z2 * p2ss.eval(s);
    }
};

// Requires |zeta| = 1 within 1e-12.
SectionJet section_jet(const SurfaceMap& phi, const Weights& w,
                       const Point2& zeta, double s);

// Lebesgue measure of V_1^{c,d}: alpha1 (d - c) / (alpha1 + alpha2);
// this equals mu^(0).
double region_measure(const Weights& w, const SectorRegion& r);

// Membership test for the closed sector; x1 > 0 required.
bool region_contains(const Weights& w, const SectorRegion& r, const Point2& x);

} // namespace oscdecay
