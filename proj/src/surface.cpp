#include "oscdecay/surface.hpp"

#include <cmath>
#include <stdexcept>

namespace oscdecay {

Point2 dilate(const Weights& w, double t, const Point2& x) {
    if (!(t > 0.0)) throw std::invalid_argument("dilate: t must be positive");
    return {std::pow(t, w.alpha1) * x[0], std::pow(t, w.alpha2) * x[1]};
}

HomogeneityReport check_quasi_homogeneous(const SurfaceMap& phi, const Weights& w) {
    HomogeneityReport rep;
    rep.monomials_ok = true;
    rep.weight_inequality_ok = w.weight_inequality_ok();
    for (const BivariatePolynomial* p : {&phi.phi1, &phi.phi2}) {
        for (const auto& t : p->terms()) {
            const double degree = w.alpha1 * t.i + w.alpha2 * t.j;
            if (std::abs(degree - w.m) > 1e-12 * std::max(1.0, std::abs(w.m))) {
                rep.monomials_ok = false;
                rep.offending.emplace_back(t.i, t.j);
            }
        }
    }

    // Deterministic spot checks of phi(t.x) = t^m phi(x).
    rep.spot_checks_ok = true;
    const double ts[] = {0.5, 0.9, 1.0, 1.7, 2.0};
    const double xs[] = {0.3, 0.7, 1.0, 1.4};
    const double ys[] = {-1.2, -0.5, 0.6, 1.1};
    for (double t : ts)
        for (double x : xs)
            for (double y : ys) {
                const Point2 tx = dilate(w, t, {x, y});
                const double tm = std::pow(t, w.m);
                for (const BivariatePolynomial* p : {&phi.phi1, &phi.phi2}) {
                    const double lhs = p->eval(tx[0], tx[1]);
                    const double rhs = tm * p->eval(x, y);
                    const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
                    const double rel = std::abs(lhs - rhs) / scale;
                    rep.max_spot_rel_error = std::max(rep.max_spot_rel_error, rel);
                }
            }
    if (rep.max_spot_rel_error > 1e-12) rep.spot_checks_ok = false;
    // A map failing the exact exponent test should not pass via spot noise.
    if (!rep.monomials_ok) rep.spot_checks_ok = false;
    return rep;
}

SectionCache::SectionCache(const SurfaceMap& phi)
    : p1(section_poly(phi.phi1)), p2(section_poly(phi.phi2)) {
    p1s = p1.derivative();
    p1ss = p1s.derivative();
    p2s = p2.derivative();
    p2ss = p2s.derivative();
}

SectionJet section_jet(const SurfaceMap& phi, const Weights& /*w*/,
                       const Point2& zeta, double s) {
    const double norm = std::hypot(zeta[0], zeta[1]);
    if (std::abs(norm - 1.0) > 1e-12)
        throw std::invalid_argument("section_jet: zeta must be a unit vector");
    SectionCache cache(phi);
    return {cache.G(zeta[0], zeta[1], s), cache.G_s(zeta[0], zeta[1], s),
            cache.G_ss(zeta[0], zeta[1], s)};
}

double region_measure(const Weights& w, const SectorRegion& r) {
    return w.alpha1 * (r.d - r.c) / (w.alpha1 + w.alpha2);
}

bool region_contains(const Weights& w, const SectorRegion& r, const Point2& x) {
    if (!(x[0] > 0.0)) return false;
    const double t = std::pow(x[0], 1.0 / w.alpha1);
    if (!(t > 0.0) || t > r.t_max) return false;
    const double s = x[1] / std::pow(t, w.alpha2);
    return s > r.c && s < r.d;
}

} // namespace oscdecay
