#include "oscdecay/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "oscdecay/parallel.hpp"
#include "oscdecay/quadrature.hpp"
#include "phase_panels.hpp"

namespace oscdecay::fourier {

namespace {

struct MuHatPass {
    std::complex<double> value;
    long long node_pairs;
};

// Single-resolution evaluation of the reduced double integral. The shared
// u-grid is sized against envelope amplitudes, so precomputed power tables
// serve every s-node; per node the phase is two fmas plus sin/cos.
MuHatPass mu_hat_pass(const SectionCache& sec, const Weights& w,
                      const SectorRegion& r, const Frequency4& xi,
                      const MuHatSettings& st, double ppp_u, double ppp_s) {
    const double asum = w.alpha_sum();
    const double g1 = w.alpha1 / asum, g2 = w.alpha2 / asum, g3 = w.gamma;
    const double xi1 = xi.xi_prime[0], xi2 = xi.xi_prime[1];
    const double R = std::hypot(xi.xi_dprime[0], xi.xi_dprime[1]);
    const double z1 = R > 0.0 ? xi.xi_dprime[0] / R : 1.0;
    const double z2 = R > 0.0 ? xi.xi_dprime[1] / R : 0.0;

    // Envelope amplitudes over the region (with slack for grid maxima).
    double Gmax = 0.0, Gsmax = 0.0;
    const int ne = 256;
    for (int i = 0; i <= ne; ++i) {
        const double s = r.c + (r.d - r.c) * i / ne;
        Gmax = std::max(Gmax, std::abs(sec.G(z1, z2, s)));
        Gsmax = std::max(Gsmax, std::abs(sec.G_s(z1, z2, s)));
    }
    Gmax *= 1.05;
    Gsmax *= 1.05;
    const double smax = std::max(std::abs(r.c), std::abs(r.d));

    std::vector<double> edges;
    detail::build_phase_panels(std::abs(xi1), std::abs(xi2) * smax, R * Gmax, g1,
                               g2, g3, ppp_u, st.h_max_u,
                               st.max_node_pairs, edges);
    PanelGrid ugrid;
    ugrid.edges = std::move(edges);
    std::vector<double> U, W;
    ugrid.expand(gauss_legendre(st.gl_u), U, W);

    const std::size_t nu = U.size();
    std::vector<double> U1(nu), U2(nu), U3(nu);
    for (std::size_t i = 0; i < nu; ++i) {
        U1[i] = std::pow(U[i], g1);
        U2[i] = std::pow(U[i], g2);
        U3[i] = std::pow(U[i], g3);
    }

    const double h_max_s = st.h_max_s > 0.0 ? st.h_max_s : (r.d - r.c) / 8.0;
    const double rate_s = std::abs(xi2) + R * Gsmax;
    double hs = h_max_s;
    if (rate_s > 0.0) hs = std::min(hs, detail::two_pi / (ppp_s * rate_s));
    const auto ns = static_cast<std::size_t>(
        std::max(1.0, std::ceil((r.d - r.c) / hs)));
    std::vector<double> S, SW;
    uniform_panels(r.c, r.d, ns).expand(gauss_legendre(st.gl_s), S, SW);

    double tre = 0.0, tim = 0.0;
    for (std::size_t k = 0; k < S.size(); ++k) {
        const double s = S[k];
        const double a2s = xi2 * s;
        const double a3 = R * sec.G(z1, z2, s);
        double re = 0.0, im = 0.0;
        for (std::size_t i = 0; i < nu; ++i) {
            const double ph = xi1 * U1[i] + a2s * U2[i] + a3 * U3[i];
            re += W[i] * std::cos(ph);
            im -= W[i] * std::sin(ph);
        }
        tre += SW[k] * re;
        tim += SW[k] * im;
    }
    const double scale = w.alpha1 / asum;
    return {std::complex<double>(scale * tre, scale * tim),
            static_cast<long long>(nu * S.size())};
}

} // namespace

OscResult mu_hat(const SurfaceMap& phi, const Weights& w, const SectorRegion& r,
                 const Frequency4& xi, const MuHatSettings& st) {
    const SectionCache sec(phi);

    double ppp_u = st.ppp_u, ppp_s = st.ppp_s;
    bool degraded = false;

    // Probe the base grid size; if the two-level evaluation would blow the
    // node budget, coarsen both panel densities once, deterministically.
    MuHatPass base = mu_hat_pass(sec, w, r, xi, st, ppp_u, ppp_s);
    if (5 * base.node_pairs > st.max_node_pairs) {
        const double f = std::sqrt(
            static_cast<double>(st.max_node_pairs) /
            (5.0 * static_cast<double>(base.node_pairs)));
        ppp_u = std::max(1.0, ppp_u * f);
        ppp_s = std::max(1.0, ppp_s * f);
        degraded = true;
        base = mu_hat_pass(sec, w, r, xi, st, ppp_u, ppp_s);
    }
    const MuHatPass fine = mu_hat_pass(sec, w, r, xi, st, 2.0 * ppp_u, 2.0 * ppp_s);

    OscResult res;
    res.value = fine.value;
    res.abs_error_estimate = std::abs(fine.value - base.value);
    res.panels_used = base.node_pairs + fine.node_pairs;
    res.status = degraded ? QuadStatus::budget_exceeded : QuadStatus::ok;
    return res;
}

std::vector<Point2> default_directions(int n) {
    if (n < 1) throw std::invalid_argument("default_directions: n >= 1");
    std::vector<Point2> dirs(n);
    for (int k = 0; k < n; ++k) {
        const double th = (2.0 * k + 1.0) * M_PI / n;
        dirs[k] = {std::cos(th), std::sin(th)};
    }
    return dirs;
}

DecayReport decay_fit(const SurfaceMap& phi, const Weights& w,
                      const SectorRegion& r,
                      const std::vector<Point2>& directions,
                      const std::vector<Point2>& xi_primes,
                      const std::vector<double>& radii,
                      const MuHatSettings& st, int jobs) {
    if (radii.size() < 8)
        throw std::invalid_argument("decay_fit: need at least 8 radii");
    const auto [rmin, rmax] = std::minmax_element(radii.begin(), radii.end());
    if (!(*rmin > 0.0) || *rmax / *rmin < 1e3 * (1.0 - 1e-9))
        throw std::invalid_argument("decay_fit: radii must span >= 3 decades");
    if (directions.empty() || xi_primes.empty())
        throw std::invalid_argument("decay_fit: empty sample set");

    std::vector<Point2> dirs = directions;
    for (auto& d : dirs) {
        const double n = std::hypot(d[0], d[1]);
        if (!(n > 0.0)) throw std::invalid_argument("decay_fit: zero direction");
        d = {d[0] / n, d[1] / n};
    }

    DecayReport rep;
    rep.target_slope = -1.0 / w.gamma;
    const std::size_t n_entries = dirs.size() * xi_primes.size();
    const std::size_t n_tasks = n_entries * radii.size();
    std::vector<OscResult> results(n_tasks);
    parallel_for(
        n_tasks,
        [&](std::size_t idx) {
            const std::size_t e = idx / radii.size();
            const double R = radii[idx % radii.size()];
            const Point2& dir = dirs[e / xi_primes.size()];
            const Point2& xp = xi_primes[e % xi_primes.size()];
            Frequency4 xi;
            xi.xi_prime = xp;
            xi.xi_dprime = {R * dir[0], R * dir[1]};
            results[idx] = mu_hat(phi, w, r, xi, st);
        },
        jobs);

    rep.worst_slope = -std::numeric_limits<double>::infinity();
    for (std::size_t e = 0; e < n_entries; ++e) {
        DecayFitEntry entry;
        entry.direction = dirs[e / xi_primes.size()];
        entry.xi_prime = xi_primes[e % xi_primes.size()];
        std::vector<std::pair<double, double>> pts;
        for (std::size_t j = 0; j < radii.size(); ++j) {
            const OscResult& res = results[e * radii.size() + j];
            DecaySample smp;
            smp.R = radii[j];
            smp.value = res.value;
            smp.err = res.abs_error_estimate;
            // The exclusion rule: values indistinguishable from quadrature
            // noise must not steer the regression.
            smp.excluded = std::abs(res.value) < 10.0 * res.abs_error_estimate;
            if (res.status == QuadStatus::budget_exceeded)
                rep.status = QuadStatus::budget_exceeded;
            if (!smp.excluded) {
                pts.emplace_back(std::log(smp.R), std::log(std::abs(smp.value)));
                rep.c_emp = std::max(rep.c_emp, std::abs(smp.value) *
                                                    std::pow(smp.R, 1.0 / w.gamma));
            } else {
                ++entry.excluded_count;
            }
            entry.samples.push_back(smp);
        }
        if (pts.size() >= 2) entry.fit = fit_loglog(pts);
        rep.worst_slope = std::max(rep.worst_slope, entry.fit.slope);
        rep.min_r_squared = std::min(rep.min_r_squared, entry.fit.r_squared);
        rep.entries.push_back(std::move(entry));
    }
    return rep;
}

namespace {

// Integral of |G|^{-p} over [lo, hi] by composite Gauss panels of width
// <= base_h, assuming G has no zero strictly inside.
double regular_part(const SectionCache& sec, double z1, double z2, double p,
                    double lo, double hi, double base_h, const GaussRule& rule) {
    if (!(hi > lo)) return 0.0;
    const auto n = static_cast<std::size_t>(
        std::max(1.0, std::ceil((hi - lo) / base_h)));
    double acc = 0.0;
    const double h = (hi - lo) / static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double a = lo + h * static_cast<double>(k);
        const double mid = a + 0.5 * h, half = 0.5 * h;
        for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
            const double s = mid + half * rule.nodes[j];
            acc += half * rule.weights[j] *
                   std::pow(std::abs(sec.G(z1, z2, s)), -p);
        }
    }
    return acc;
}

// Dyadic tail of |G|^{-p} on (z, z + w] (or [z - w, z) when dir < 0)
// refining geometrically toward the zero at z.
double dyadic_tail(const SectionCache& sec, double z1, double z2, double p,
                   double z, double w, double dir, const GaussRule& rule,
                   double scale_hint) {
    double acc = 0.0;
    double width = w;
    for (int k = 0; k < 64 && width > 1e-16 * scale_hint; ++k) {
        const double outer = width, inner = 0.5 * width;
        const double lo = dir > 0 ? z + inner : z - outer;
        const double hi = dir > 0 ? z + outer : z - inner;
        const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
        double piece = 0.0;
        for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
            const double s = mid + half * rule.nodes[j];
            piece += half * rule.weights[j] *
                     std::pow(std::abs(sec.G(z1, z2, s)), -p);
        }
        acc += piece;
        if (piece < 1e-16 * acc) break;
        width = inner;
    }
    return acc;
}

} // namespace

SingularZetaResult singular_integral_zeta(const SurfaceMap& phi, const Weights& w,
                                          const SectorRegion& r, const Point2& zeta,
                                          int grid_n) {
    if (std::abs(std::hypot(zeta[0], zeta[1]) - 1.0) > 1e-12)
        throw std::invalid_argument("singular_integral_zeta: zeta must be unit");
    const SectionCache sec(phi);
    const double z1 = zeta[0], z2 = zeta[1];
    const double p = 1.0 / w.gamma;
    const double len = r.d - r.c;
    const double base_h = len / grid_n;

    SingularZetaResult out;

    // Zero detection on the scan grid: sign changes and near-exact hits.
    std::vector<double> gv(grid_n + 1);
    double gscale = 0.0;
    for (int i = 0; i <= grid_n; ++i) {
        gv[i] = sec.G(z1, z2, r.c + len * i / grid_n);
        gscale = std::max(gscale, std::abs(gv[i]));
    }
    if (gscale == 0.0) {
        out.divergence_suspected = true;  // G identically zero on the grid
        return out;
    }
    for (int i = 0; i <= grid_n; ++i) {
        const double s = r.c + len * i / grid_n;
        if (std::abs(gv[i]) <= 1e-14 * gscale) {
            out.zeros.push_back(s);
        } else if (i > 0 && gv[i - 1] * gv[i] < 0.0 &&
                   std::abs(gv[i - 1]) > 1e-14 * gscale) {
            double a = s - base_h, b = s;
            double fa = gv[i - 1];
            for (int it = 0; it < 80 && b - a > 1e-16; ++it) {
                const double mid = 0.5 * (a + b);
                const double fm = sec.G(z1, z2, mid);
                if (fa * fm <= 0.0) {
                    b = mid;
                } else {
                    a = mid;
                    fa = fm;
                }
            }
            out.zeros.push_back(0.5 * (a + b));
        }
    }
    std::sort(out.zeros.begin(), out.zeros.end());
    out.zeros.erase(std::unique(out.zeros.begin(), out.zeros.end(),
                                [&](double a, double b) {
                                    return std::abs(a - b) < 1e-12 * len;
                                }),
                    out.zeros.end());

    const GaussRule rule = gauss_legendre(6);
    // Split [c, d] at the zeros; each piece gets dyadic tails toward any
    // zero endpoint and a composite regular middle.
    std::vector<double> cuts{r.c};
    for (double z : out.zeros)
        if (z > r.c + 1e-15 && z < r.d - 1e-15) cuts.push_back(z);
    cuts.push_back(r.d);

    auto is_zero_point = [&](double s) {
        for (double z : out.zeros)
            if (std::abs(s - z) <= 1e-12 * len) return true;
        return false;
    };

    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double a = cuts[i], b = cuts[i + 1];
        const double piece_len = b - a;
        if (!(piece_len > 0.0)) continue;
        const bool za = is_zero_point(a), zb = is_zero_point(b);
        double lo = a, hi = b;
        if (za) {
            const double wdt = std::min(0.5 * piece_len, 8.0 * base_h);
            total += dyadic_tail(sec, z1, z2, p, a, wdt, +1.0, rule, len);
            lo = a + wdt;
        }
        if (zb) {
            const double wdt = std::min(0.5 * piece_len, 8.0 * base_h);
            total += dyadic_tail(sec, z1, z2, p, b, wdt, -1.0, rule, len);
            hi = b - wdt;
        }
        total += regular_part(sec, z1, z2, p, lo, hi, base_h, rule);
        if (total > 1e6) {
            out.divergence_suspected = true;
            break;
        }
    }
    out.value = total;
    return out;
}

SingularResult singular_integral_sup(const SurfaceMap& phi, const Weights& w,
                                     const SectorRegion& r, int zeta_angles,
                                     int grid_n, int jobs) {
    if (zeta_angles < 360)
        throw std::invalid_argument("singular_integral_sup: zeta_angles >= 360");

    SingularResult res;
    res.zeta_angles = zeta_angles;
    res.grid_n = grid_n;

    auto sweep = [&](int gn, double& sup, double& arg, bool& diverged) {
        std::vector<SingularZetaResult> vals(zeta_angles);
        parallel_for(
            static_cast<std::size_t>(zeta_angles),
            [&](std::size_t j) {
                const double th = detail::two_pi * static_cast<double>(j) /
                                  zeta_angles;
                vals[j] = singular_integral_zeta(phi, w, r,
                                                 {std::cos(th), std::sin(th)}, gn);
            },
            jobs);
        sup = 0.0;
        arg = 0.0;
        diverged = false;
        for (int j = 0; j < zeta_angles; ++j) {
            if (vals[j].divergence_suspected) diverged = true;
            if (vals[j].value > sup) {
                sup = vals[j].value;
                arg = detail::two_pi * static_cast<double>(j) / zeta_angles;
            }
        }
    };

    double sup1, arg1, sup2, arg2;
    bool div1, div2;
    sweep(grid_n, sup1, arg1, div1);
    sweep(2 * grid_n, sup2, arg2, div2);
    res.sup_value = sup1;
    res.argmax_angle = arg1;
    res.refinement_ratio = sup2 > 0.0 ? sup1 / sup2 : 0.0;
    res.divergence_suspected = div1 || div2;
    return res;
}

} // namespace oscdecay::fourier
