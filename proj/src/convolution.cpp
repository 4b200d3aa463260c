#include "oscdecay/convolution.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "oscdecay/parallel.hpp"
#include "oscdecay/quadrature.hpp"

namespace oscdecay::convolution {

namespace {

// Grid maximum of max(|p1|, |p2|) over [a, b], sharpened by shrinking
// windows around the coarse argmax.
double refined_sup(const Poly1& p1, const Poly1& p2, double a, double b) {
    auto val = [&](double s) {
        return std::max(std::abs(p1.eval(s)), std::abs(p2.eval(s)));
    };
    double lo = a, hi = b, best = 0.0, arg = a;
    const int n = 1024;
    for (int round = 0; round < 4; ++round) {
        for (int i = 0; i <= n; ++i) {
            const double s = lo + (hi - lo) * i / n;
            const double v = val(s);
            if (v > best) {
                best = v;
                arg = s;
            }
        }
        const double w = (hi - lo) / n * 4.0;
        lo = std::max(a, arg - w);
        hi = std::min(b, arg + w);
    }
    return best;
}

// Intersects {t > 0 : lo <= coef * t^k <= hi} into [tlo, thi]; returns
// false when the result is empty.
bool clip_monomial(double coef, double kexp, double lo, double hi, double& tlo,
                   double& thi) {
    if (coef == 0.0) return lo <= 0.0 && hi >= 0.0;
    const double a = (coef > 0.0 ? lo : hi) / coef;
    const double b = (coef > 0.0 ? hi : lo) / coef;
    if (b <= 0.0) return false;
    thi = std::min(thi, std::pow(b, 1.0 / kexp));
    if (a > 0.0) tlo = std::max(tlo, std::pow(a, 1.0 / kexp));
    return tlo < thi;
}

// Shared s-scan core for the box convolution; the caller supplies the
// section values on the scan grid so repeated calls can reuse them.
double box_convolve_core(const Weights& w, const SectorRegion& r,
                         const DeltaBox& box, const Point4& x,
                         const std::vector<double>& S,
                         const std::vector<double>& P1,
                         const std::vector<double>& P2) {
    const double asum = w.alpha_sum();
    const double ds = (r.d - r.c) / static_cast<double>(S.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < S.size(); ++i) {
        double tlo = 0.0, thi = r.t_max;
        if (!clip_monomial(1.0, w.alpha1, x[0] - box.half[0], x[0] + box.half[0],
                           tlo, thi))
            continue;
        if (!clip_monomial(S[i], w.alpha2, x[1] - box.half[1],
                           x[1] + box.half[1], tlo, thi))
            continue;
        if (!clip_monomial(P1[i], w.m, x[2] - box.half[2], x[2] + box.half[2],
                           tlo, thi))
            continue;
        if (!clip_monomial(P2[i], w.m, x[3] - box.half[3], x[3] + box.half[3],
                           tlo, thi))
            continue;
        acc += std::pow(thi, asum) - std::pow(tlo, asum);
    }
    return acc * ds * w.alpha1 / asum;
}

struct ScanCache {
    std::vector<double> S, P1, P2;
    ScanCache(const SectionCache& sec, const SectorRegion& r, std::size_t n) {
        S.resize(n);
        P1.resize(n);
        P2.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            S[i] = r.c + (r.d - r.c) * (static_cast<double>(i) + 0.5) /
                             static_cast<double>(n);
            P1[i] = sec.p1.eval(S[i]);
            P2[i] = sec.p2.eval(S[i]);
        }
    }
};

// || mu * f_delta ||_{L^q(A_delta)} via (t, s, z) patch quadrature; the
// x-points track A_delta exactly, so the integrand inherits the clean
// delta-scaling of the construction.
double box_norm_q(const SurfaceMap& phi, const Weights& w,
                  const SectorRegion& r, const DeltaBox& box, double q,
                  const ConvolveSettings& st) {
    const SectionCache sec(phi);
    const ScanCache cache(sec, r, st.box_scan_n);
    const GaussRule rule = gauss_legendre(st.gl);
    const double asum = w.alpha_sum();

    std::vector<double> T, TW, S, SW, Z, ZW;
    uniform_panels(0.5 * box.delta, box.delta, 8).expand(rule, T, TW);
    uniform_panels(box.s_band.first, box.s_band.second, 8).expand(rule, S, SW);
    uniform_panels(-1.0, 1.0, 1).expand(rule, Z, ZW);

    const double zt = box.z_thick;
    double acc = 0.0;
    for (std::size_t it = 0; it < T.size(); ++it) {
        const double t = T[it];
        const double y1 = std::pow(t, w.alpha1);
        const double ta2 = std::pow(t, w.alpha2);
        const double tm = std::pow(t, w.m);
        const double jw = w.alpha1 * std::pow(t, asum - 1.0) * TW[it];
        for (std::size_t is = 0; is < S.size(); ++is) {
            const double s = S[is];
            const double f1 = tm * sec.p1.eval(s), f2 = tm * sec.p2.eval(s);
            for (std::size_t i1 = 0; i1 < Z.size(); ++i1)
                for (std::size_t i2 = 0; i2 < Z.size(); ++i2) {
                    const Point4 x{y1, ta2 * s, f1 + zt * Z[i1],
                                   f2 + zt * Z[i2]};
                    const double v =
                        box_convolve_core(w, r, box, x, cache.S, cache.P1,
                                          cache.P2);
                    acc += jw * SW[is] * (zt * ZW[i1]) * (zt * ZW[i2]) *
                           std::pow(v, q);
                }
        }
    }
    return std::pow(acc, 1.0 / q);
}

} // namespace

DeltaBox::DeltaBox(const SurfaceMap& phi, const Weights& w,
                   const SectorRegion& r, double delta,
                   std::pair<double, double> band) {
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("DeltaBox: delta must lie in (0,1)");
    if (band.first == 0.0 && band.second == 0.0)
        band = {r.c + (r.d - r.c) / 3.0, r.c + 2.0 * (r.d - r.c) / 3.0};
    if (!(r.c < band.first && band.first < band.second && band.second < r.d))
        throw std::invalid_argument("DeltaBox: s_band not inside (c, d)");

    this->delta = delta;
    this->s_band = band;
    const SectionCache sec(phi);
    // t^m peaks at t = 1 on Q, so the sup reduces to the unit section.
    M = refined_sup(sec.p1, sec.p2, band.first, band.second);

    const double dm = std::pow(delta, w.m);
    half = {2.0 * std::pow(delta, w.alpha1), 2.0 * std::pow(delta, w.alpha2),
            (2.0 * M + 1.0) * dm, (2.0 * M + 1.0) * dm};
    z_thick = dm;
}

double patch_measure(const Weights& w, const DeltaBox& box) {
    const double asum = w.alpha_sum();
    return (box.s_band.second - box.s_band.first) * (w.alpha1 / asum) *
           (1.0 - std::pow(2.0, -asum));
}

double a_delta_measure(const Weights& w, const DeltaBox& box) {
    const double ed =
        std::pow(box.delta, w.alpha_sum()) * patch_measure(w, box);
    return ed * 4.0 * box.z_thick * box.z_thick;
}

double box_f_norm(const DeltaBox& box, double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("box_f_norm: p >= 1");
    const double vol = 16.0 * box.half[0] * box.half[1] * box.half[2] *
                       box.half[3];
    return std::pow(vol, 1.0 / p);
}

Point4 a_delta_sample(const SurfaceMap& phi, const Weights& w,
                      const DeltaBox& box, double tau, double s, double z1,
                      double z2) {
    const double t = box.delta * tau;
    const Point2 y{std::pow(t, w.alpha1), std::pow(t, w.alpha2) * s};
    const Point2 ph = phi.eval(y[0], y[1]);
    return {y[0], y[1], ph[0] + box.z_thick * z1, ph[1] + box.z_thick * z2};
}

double convolve_mu(const SurfaceMap& phi, const Weights& w,
                   const SectorRegion& r, const TestFunction& f,
                   const Point4& x, const ConvolveSettings& st) {
    const SectionCache sec(phi);
    const double asum = w.alpha_sum();
    const double sig = asum / w.alpha1;
    const GaussRule rule = gauss_legendre(st.gl);

    std::vector<double> U, UW, S, SW;
    uniform_panels(0.0, std::pow(r.t_max, w.alpha1), st.t_panels)
        .expand(rule, U, UW);
    uniform_panels(r.c, r.d, st.s_panels).expand(rule, S, SW);

    double acc = 0.0;
    for (std::size_t i = 0; i < U.size(); ++i) {
        const double u = U[i];
        const double jw = std::pow(u, sig - 1.0) * UW[i];
        const double ua2 = std::pow(u, w.alpha2 / w.alpha1);
        const double um = std::pow(u, w.m / w.alpha1);
        for (std::size_t k = 0; k < S.size(); ++k) {
            const double s = S[k];
            const Point4 arg{x[0] - u, x[1] - ua2 * s,
                             x[2] - um * sec.p1.eval(s),
                             x[3] - um * sec.p2.eval(s)};
            acc += jw * SW[k] * f(arg);
        }
    }
    return acc;
}

double convolve_mu_box(const SurfaceMap& phi, const Weights& w,
                       const SectorRegion& r, const DeltaBox& box,
                       const Point4& x, const ConvolveSettings& st) {
    const SectionCache sec(phi);
    const ScanCache cache(sec, r, st.box_scan_n);
    return box_convolve_core(w, r, box, x, cache.S, cache.P1, cache.P2);
}

BoxFit box_lower_bound_fit(const SurfaceMap& phi, const Weights& w,
                           const SectorRegion& r, double q,
                           const std::vector<double>& delta_list,
                           const ConvolveSettings& st, int jobs) {
    if (!(q >= 1.0))
        throw std::invalid_argument("box_lower_bound_fit: q >= 1");
    if (delta_list.size() < 6)
        throw std::invalid_argument("box_lower_bound_fit: need >= 6 deltas");
    const auto [lo, hi] =
        std::minmax_element(delta_list.begin(), delta_list.end());
    if (!(*lo > 0.0 && *hi < 1.0))
        throw std::invalid_argument("box_lower_bound_fit: deltas in (0,1)");
    if (*hi / *lo < 100.0 * (1.0 - 1e-9))
        throw std::invalid_argument(
            "box_lower_bound_fit: deltas must span >= 2 decades");

    BoxFit out;
    out.q = q;
    out.delta_list = delta_list;
    out.norms.resize(delta_list.size());
    out.f_norms.resize(delta_list.size());
    out.a_measures.resize(delta_list.size());

    parallel_for(
        delta_list.size(),
        [&](std::size_t i) {
            const DeltaBox box(phi, w, r, delta_list[i]);
            out.norms[i] = box_norm_q(phi, w, r, box, q, st);
            out.f_norms[i] = box_f_norm(box, q);
            out.a_measures[i] = a_delta_measure(w, box);
        },
        jobs);

    {
        const DeltaBox probe(phi, w, r, delta_list.front());
        out.M = probe.M;
        out.s_band = probe.s_band;
    }
    out.fit = fit_power_law(delta_list, out.norms);
    out.predicted_slope = w.alpha_sum() + (w.alpha_sum() + 2.0 * w.m) / q;
    if (std::abs(out.fit.slope - out.predicted_slope) > 0.1)
        throw DegenerateFitError("box_lower_bound_fit: slope misses prediction",
                                 out.fit);
    return out;
}

TypeSetVertex typeset_vertex(const Weights& w) {
    TypeSetVertex v;
    const double asum = w.alpha_sum();
    v.inv_p = (asum + w.m) / (asum + 2.0 * w.m);
    v.inv_q = 1.0 - v.inv_p;
    return v;
}

ProbeResult operator_norm_probe(const SurfaceMap& phi, const Weights& w,
                                const SectorRegion& r, double p, double q,
                                TestFamily family, int n_tests,
                                const ConvolveSettings& st, int jobs) {
    if (n_tests < 1)
        throw std::invalid_argument("operator_norm_probe: n_tests >= 1");
    if (!(p >= 1.0 && q >= 1.0))
        throw std::invalid_argument("operator_norm_probe: p, q >= 1");

    ProbeResult out;
    out.p = p;
    out.q = q;
    out.family = family;

    const int n_eff =
        family == TestFamily::gaussian ? std::min(n_tests, 4) : n_tests;
    out.samples.resize(n_eff);

    if (family == TestFamily::box) {
        parallel_for(
            static_cast<std::size_t>(n_eff),
            [&](std::size_t j) {
                const double delta = std::pow(2.0, -(static_cast<double>(j) + 1.0));
                const DeltaBox box(phi, w, r, delta);
                ProbeSample smp;
                smp.param = delta;
                smp.norm_q = box_norm_q(phi, w, r, box, q, st);
                smp.norm_p = box_f_norm(box, p);
                smp.ratio = smp.norm_p > 0.0 ? smp.norm_q / smp.norm_p : 0.0;
                out.samples[j] = smp;
            },
            jobs);
    } else {
        const GaussRule rule = gauss_legendre(st.gl);
        const SectionCache sec(phi);
        parallel_for(
            static_cast<std::size_t>(n_eff),
            [&](std::size_t j) {
                const double width = std::pow(2.0, -static_cast<double>(j));
                const double inv2w2 = 1.0 / (2.0 * width * width);
                TestFunction f = [&](const Point4& u) {
                    return std::exp(-(u[0] * u[0] + u[1] * u[1] + u[2] * u[2] +
                                      u[3] * u[3]) *
                                    inv2w2);
                };
                ConvolveSettings inner = st;
                inner.t_panels = 24;
                inner.s_panels = 24;

                // q-norm over the anchored patch x = (y, phi(y) + z),
                // |z_i| <= 2 * width.
                std::vector<double> T, TW, S, SW, Z, ZW;
                uniform_panels(0.0, 1.0, 8).expand(rule, T, TW);
                uniform_panels(r.c, r.d, 8).expand(rule, S, SW);
                uniform_panels(-2.0 * width, 2.0 * width, 1).expand(rule, Z, ZW);
                const double sig = w.alpha_sum() / w.alpha1;
                double acc = 0.0;
                for (std::size_t it = 0; it < T.size(); ++it) {
                    const double u = T[it];
                    const double jw = std::pow(u, sig - 1.0) * TW[it];
                    const double ua2 = std::pow(u, w.alpha2 / w.alpha1);
                    const double um = std::pow(u, w.m / w.alpha1);
                    for (std::size_t is = 0; is < S.size(); ++is) {
                        const double s = S[is];
                        const double f1 = um * sec.p1.eval(s);
                        const double f2 = um * sec.p2.eval(s);
                        for (std::size_t i1 = 0; i1 < Z.size(); ++i1)
                            for (std::size_t i2 = 0; i2 < Z.size(); ++i2) {
                                const Point4 x{u, ua2 * s, f1 + Z[i1],
                                               f2 + Z[i2]};
                                const double v =
                                    convolve_mu(phi, w, r, f, x, inner);
                                acc += jw * SW[is] * ZW[i1] * ZW[i2] *
                                       std::pow(std::abs(v), q);
                            }
                    }
                }
                ProbeSample smp;
                smp.param = width;
                smp.norm_q = std::pow(acc, 1.0 / q);
                smp.norm_p = std::pow(width * std::sqrt(2.0 * M_PI / p), 4.0 / p);
                smp.ratio = smp.norm_p > 0.0 ? smp.norm_q / smp.norm_p : 0.0;
                out.samples[j] = smp;
            },
            jobs);
    }

    bool monotone = out.samples.size() >= 2;
    for (std::size_t j = 0; j < out.samples.size(); ++j) {
        const ProbeSample& smp = out.samples[j];
        if (smp.ratio > out.sup_ratio) {
            out.sup_ratio = smp.ratio;
            out.arg_param = smp.param;
        }
        if (j > 0 &&
            smp.ratio < out.samples[j - 1].ratio * (1.0 - 1e-12))
            monotone = false;
    }
    if (monotone && !out.samples.empty() && out.samples.front().ratio > 0.0 &&
        out.samples.back().ratio > 2.0 * out.samples.front().ratio)
        out.growth_suspected = true;
    return out;
}

} // namespace oscdecay::convolution
