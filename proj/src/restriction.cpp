#include "oscdecay/restriction.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "oscdecay/parallel.hpp"
#include "oscdecay/quadrature.hpp"

namespace oscdecay::restriction {

namespace {

constexpr double two_pi = 6.283185307179586476925286766559;

// One coordinate factor (1 - e^{-i xi L}) / (i xi), with the L limit as
// xi -> 0 taken through the series.
std::complex<double> box_factor(double xi, double L) {
    const double th = xi * L;
    if (std::abs(th) < 1e-8)
        return {L * (1.0 - th * th / 6.0), -L * th / 2.0};
    return {std::sin(th) / xi, -(1.0 - std::cos(th)) / xi};
}

double poly_sup(const Poly1& p, double a, double b, int n = 4096) {
    double m = 0.0;
    for (int i = 0; i <= n; ++i)
        m = std::max(m, std::abs(p.eval(a + (b - a) * i / n)));
    return m;
}

} // namespace

KnappBox::KnappBox(const SurfaceMap& phi, const Weights& w,
                   const SectorRegion& r, double epsilon,
                   std::pair<double, double> band) {
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw std::invalid_argument("KnappBox: epsilon must lie in (0,1)");
    if (band.first == 0.0 && band.second == 0.0)
        band = {r.c + (r.d - r.c) / 3.0, r.c + 2.0 * (r.d - r.c) / 3.0};
    if (!(r.c < band.first && band.first < band.second && band.second < r.d))
        throw std::invalid_argument("KnappBox: s_band not inside (c, d)");

    this->epsilon = epsilon;
    this->s_band = band;

    // sup over Q = [1/2,1] x s_band of max(|phi1|, |phi2|); the t^m factor
    // peaks at t = 1, so only the unit section matters.
    const SectionCache sec(phi);
    sup_abs_phi = std::max(poly_sup(sec.p1, band.first, band.second),
                           poly_sup(sec.p2, band.first, band.second));

    double cap = 1.0;
    if (sup_abs_phi > 0.0)
        cap = std::min(cap, std::pow(1.0 / sup_abs_phi, 1.0 / w.m));
    const double sb = std::max(std::abs(band.first), std::abs(band.second));
    if (sb > 0.0) cap = std::min(cap, std::pow(1.0 / sb, 1.0 / w.alpha2));
    eta = 0.9 * cap;

    if (!(std::pow(eta, w.m) * sup_abs_phi < 1.0) ||
        !(std::pow(eta, w.alpha2) * band.first >= -1.0) ||
        !(std::pow(eta, w.alpha2) * band.second <= 1.0))
        throw std::logic_error("KnappBox: eta construction failed");
}

std::complex<double> knapp_box_transform(const Weights& w, double epsilon,
                                         const fourier::Frequency4& xi) {
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw std::invalid_argument("knapp_box_transform: epsilon in (0,1)");
    const double L1 = std::pow(epsilon, -w.alpha1);
    const double L2 = std::pow(epsilon, -w.alpha2);
    const double Lm = std::pow(epsilon, -w.m);
    return box_factor(xi.xi_prime[0], L1) * box_factor(xi.xi_prime[1], L2) *
           box_factor(xi.xi_dprime[0], Lm) * box_factor(xi.xi_dprime[1], Lm);
}

double restriction_norm(const SurfaceMap& phi, const Weights& w,
                        const SectorRegion& r, const KnappBox& box, double q,
                        const RestrictionNormSettings& st) {
    if (!(q >= 1.0))
        throw std::invalid_argument("restriction_norm: q >= 1 required");
    const SectionCache sec(phi);
    const double asum = w.alpha_sum();
    const GaussRule rule = gauss_legendre(st.gl);

    auto integrand = [&](double t, double s) {
        double v = 1.0;
        if (!st.unit_integrand) {
            fourier::Frequency4 xi;
            const double tm = std::pow(t, w.m);
            xi.xi_prime = {std::pow(t, w.alpha1), std::pow(t, w.alpha2) * s};
            xi.xi_dprime = {tm * sec.p1.eval(s), tm * sec.p2.eval(s)};
            v = std::abs(knapp_box_transform(w, box.epsilon, xi));
        }
        return std::pow(v, q);
    };

    double acc = 0.0;
    if (st.domain == NormDomain::knapp_patch) {
        // F_eps in parameters: t' = eps*eta*tau with tau in [1/2, 1],
        // s in the band. The phase arguments are eps-free there, so a
        // fixed (tau, s) grid integrates a family-independent shape.
        const double lo = 0.5 * box.epsilon * box.eta;
        const double hi = box.epsilon * box.eta;
        std::vector<double> T, TW, S, SW;
        uniform_panels(lo, hi, 24).expand(rule, T, TW);
        uniform_panels(box.s_band.first, box.s_band.second, 24).expand(rule, S,
                                                                       SW);
        for (std::size_t i = 0; i < T.size(); ++i) {
            const double jw = w.alpha1 * std::pow(T[i], asum - 1.0) * TW[i];
            for (std::size_t k = 0; k < S.size(); ++k)
                acc += jw * SW[k] * integrand(T[i], S[k]);
        }
    } else {
        // Full region, radial substitution u = t^{a1}: the weighted
        // Jacobian becomes u^{a2/a1} du -- smooth at 0 -- and the first
        // phase argument turns linear in u.
        const double pw = 1.0 / w.alpha1;
        const double sig = asum / w.alpha1;
        const double L1 = std::pow(box.epsilon, -w.alpha1);
        const double L2 = std::pow(box.epsilon, -w.alpha2);
        const double Lm = std::pow(box.epsilon, -w.m);
        const double smax = std::max(std::abs(r.c), std::abs(r.d));
        const double p1m = poly_sup(sec.p1, r.c, r.d);
        const double p2m = poly_sup(sec.p2, r.c, r.d);
        const double p1sm = poly_sup(sec.p1s, r.c, r.d);
        const double p2sm = poly_sup(sec.p2s, r.c, r.d);

        const double rate_u = L1 + (w.alpha2 / w.alpha1) * smax * L2 +
                              (w.m / w.alpha1) * (p1m + p2m) * Lm;
        const double rate_s = L2 + (p1sm + p2sm) * Lm;
        auto clampn = [&](double rate, double len) {
            const double n = std::ceil(st.ppp * rate * len / two_pi);
            return std::clamp(static_cast<std::size_t>(std::max(1.0, n)),
                              st.min_panels, st.max_panels);
        };
        std::size_t nu = clampn(rate_u, 1.0), ns = clampn(rate_s, r.d - r.c);
        while (nu * ns > 4'000'000) {  // node-pair safety valve
            nu = std::max<std::size_t>(1, nu / 2);
            ns = std::max<std::size_t>(1, ns / 2);
        }
        std::vector<double> U, UW, S, SW;
        uniform_panels(0.0, 1.0, nu).expand(rule, U, UW);
        uniform_panels(r.c, r.d, ns).expand(rule, S, SW);
        for (std::size_t i = 0; i < U.size(); ++i) {
            const double jw = std::pow(U[i], sig - 1.0) * UW[i];
            const double t = std::pow(U[i], pw);
            for (std::size_t k = 0; k < S.size(); ++k)
                acc += jw * SW[k] * integrand(t, S[k]);
        }
    }
    return std::pow(acc, 1.0 / q);
}

double knapp_f_norm(const Weights& w, double epsilon, double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("knapp_f_norm: p >= 1");
    return std::pow(epsilon, -(w.alpha_sum() + 2.0 * w.m) / p);
}

KnappFit knapp_exponent_fit(const SurfaceMap& phi, const Weights& w,
                            const SectorRegion& r, double q,
                            const std::vector<double>& eps_list,
                            const RestrictionNormSettings& st, int jobs) {
    if (eps_list.size() < 6)
        throw std::invalid_argument("knapp_exponent_fit: need >= 6 epsilons");
    const auto [lo, hi] = std::minmax_element(eps_list.begin(), eps_list.end());
    if (!(*lo >= std::pow(2.0, -12.0) && *hi < 1.0))
        throw std::invalid_argument(
            "knapp_exponent_fit: epsilons must lie in [2^-12, 1)");
    if (*hi / *lo < 100.0 * (1.0 - 1e-9))
        throw std::invalid_argument(
            "knapp_exponent_fit: epsilons must span >= 2 decades");

    RestrictionNormSettings pst = st;
    pst.domain = NormDomain::knapp_patch;

    std::vector<double> norms(eps_list.size());
    double eta = 0.0;
    std::pair<double, double> band;
    {
        const KnappBox probe(phi, w, r, eps_list.front());
        eta = probe.eta;
        band = probe.s_band;
    }
    parallel_for(
        eps_list.size(),
        [&](std::size_t i) {
            const KnappBox box(phi, w, r, eps_list[i]);
            norms[i] = restriction_norm(phi, w, r, box, q, pst);
        },
        jobs);

    KnappFit out;
    out.fit = fit_power_law(eps_list, norms);
    out.predicted_slope = -(w.alpha_sum() + 2.0 * w.m) + w.alpha_sum() / q;
    out.q = q;
    out.eta = eta;
    out.s_band = band;
    out.eps_list = eps_list;
    if (std::abs(out.fit.slope - out.predicted_slope) > 0.05)
        throw DegenerateFitError("knapp_exponent_fit: slope misses prediction",
                                 out.fit);
    return out;
}

ExponentTable critical_exponents(const Weights& w) {
    ExponentTable t;
    const double asum = w.alpha_sum();
    t.restriction_threshold = (asum + 4.0 * w.m) / (2.0 * (asum + 2.0 * w.m));
    t.quadrilateral = {{{1.0, 0.0},
                        {1.0, 1.0},
                        {t.restriction_threshold, 1.0},
                        {t.restriction_threshold, 0.5}}};
    t.knapp_slope_factor = (asum + 2.0 * w.m) / asum;
    return t;
}

} // namespace oscdecay::restriction
