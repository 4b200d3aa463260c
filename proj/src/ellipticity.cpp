#include "oscdecay/ellipticity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace oscdecay::ellipticity {

namespace {

// Hessian entry polynomials of both components, built once per operation.
struct HessCache {
    BivariatePolynomial p1xx, p1xy, p1yy, p2xx, p2xy, p2yy;

    explicit HessCache(const SurfaceMap& phi)
        : p1xx(phi.phi1.partial(1).partial(1)),
          p1xy(phi.phi1.partial(1).partial(2)),
          p1yy(phi.phi1.partial(2).partial(2)),
          p2xx(phi.phi2.partial(1).partial(1)),
          p2xy(phi.phi2.partial(1).partial(2)),
          p2yy(phi.phi2.partial(2).partial(2)) {}

    SymmetricMatrix2 k_at(double x, double y) const {
        const double a1 = p1xx.eval(x, y), b1 = p1xy.eval(x, y), c1 = p1yy.eval(x, y);
        const double a2 = p2xx.eval(x, y), b2 = p2xy.eval(x, y), c2 = p2yy.eval(x, y);
        SymmetricMatrix2 K;
        K.k11 = a1 * c1 - b1 * b1;
        K.k22 = a2 * c2 - b2 * b2;
        K.k12 = 0.5 * (a1 * c2 + c1 * a2 - 2.0 * b1 * b2);
        return K;
    }
};

double min_abs_eigen(const EigenPair& e) {
    return std::min(std::abs(e.lambda1), std::abs(e.lambda2));
}

double max_abs_eigen(const EigenPair& e) {
    return std::max(std::abs(e.lambda1), std::abs(e.lambda2));
}

void require_unit(const Point2& zeta, const char* who) {
    if (std::abs(std::hypot(zeta[0], zeta[1]) - 1.0) > 1e-12)
        throw std::invalid_argument(std::string(who) + ": zeta must be a unit vector");
}

// Golden-section minimization of f on [lo, hi] to |hi - lo| <= tol.
template <class F>
double golden_min(F&& f, double lo, double hi, double tol) {
    constexpr double inv_phi = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > tol) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    return f1 < f2 ? x1 : x2;
}

} // namespace

SymmetricMatrix2 k_matrix(const SurfaceMap& phi, const Point2& x) {
    return HessCache(phi).k_at(x[0], x[1]);
}

EigenPair eigenvalues(const SymmetricMatrix2& K) {
    const double h = 0.5 * (K.k11 + K.k22);
    const double off = 0.5 * (K.k11 - K.k22);
    const double disc = std::hypot(off, K.k12);
    return {h - disc, h + disc};
}

Classification classify_point(const SurfaceMap& phi, const Weights& /*w*/,
                              const Point2& x, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("classify_point: tol must be positive");
    const EigenPair e = eigenvalues(k_matrix(phi, x));
    const double scale = std::max(max_abs_eigen(e), 1e-300);
    Classification c;
    c.eigen = e;
    const bool same_sign = e.lambda1 * e.lambda2 > 0.0;
    c.min_abs_q = same_sign ? min_abs_eigen(e) : 0.0;
    c.cls = (min_abs_eigen(e) <= tol * scale || !same_sign) ? PointClass::nonelliptic
                                                            : PointClass::elliptic;
    return c;
}

double verify_euler_identity(const SurfaceMap& phi, const Weights& w,
                             const std::vector<std::pair<Point2, double>>& samples) {
    if (!check_quasi_homogeneous(phi, w).pass())
        throw std::invalid_argument(
            "verify_euler_identity: phi is not quasi-homogeneous for these weights");

    // Sections of the Hessian entries at x = 1.
    const Poly1 a1 = section_poly(phi.phi1.partial(1).partial(1));
    const Poly1 b1 = section_poly(phi.phi1.partial(1).partial(2));
    const Poly1 c1 = section_poly(phi.phi1.partial(2).partial(2));
    const Poly1 a2 = section_poly(phi.phi2.partial(1).partial(1));
    const Poly1 b2 = section_poly(phi.phi2.partial(1).partial(2));
    const Poly1 c2 = section_poly(phi.phi2.partial(2).partial(2));
    const SectionCache sec(phi);

    double worst = 0.0;
    for (const auto& [zeta, s] : samples) {
        require_unit(zeta, "verify_euler_identity");
        const double z1 = zeta[0], z2 = zeta[1];
        const double A = z1 * a1.eval(s) + z2 * a2.eval(s);
        const double B = z1 * b1.eval(s) + z2 * b2.eval(s);
        const double C = z1 * c1.eval(s) + z2 * c2.eval(s);
        const double lhs = w.alpha1 * w.alpha1 * (A * C - B * B);

        const double G = sec.G(z1, z2, s);
        const double Gs = sec.G_s(z1, z2, s);
        const double Gss = sec.G_ss(z1, z2, s);
        const double rhs = w.m * (w.m - w.alpha1) * G * Gss +
                           w.alpha2 * (w.alpha1 - w.alpha2) * s * Gs * Gss -
                           (w.m - w.alpha2) * (w.m - w.alpha2) * Gs * Gs;

        const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
        worst = std::max(worst, std::abs(lhs - rhs) / scale);
    }
    return worst;
}

SigmaScan find_sigma(const SurfaceMap& phi, [[maybe_unused]] const Weights& w,
                     const SectorRegion& r, int grid_n) {
    if (grid_n < 64) throw std::invalid_argument("find_sigma: grid_n must be >= 64");
    const HessCache hess(phi);
    auto min_lambda = [&](double s) {
        return min_abs_eigen(eigenvalues(hess.k_at(1.0, s)));
    };
    auto scale_at = [&](double s) {
        return std::max(max_abs_eigen(eigenvalues(hess.k_at(1.0, s))), 1e-300);
    };

    std::vector<double> sv(grid_n), vv(grid_n);
    for (int i = 0; i < grid_n; ++i) {
        sv[i] = r.c + (r.d - r.c) * static_cast<double>(i) / (grid_n - 1);
        vv[i] = min_lambda(sv[i]);
    }

    SigmaScan scan;
    const double trigger = 1e-3;
    for (int i = 0; i < grid_n; ++i) {
        const bool local_min = (i == 0 || vv[i] <= vv[i - 1]) &&
                               (i == grid_n - 1 || vv[i] <= vv[i + 1]);
        if (!local_min || vv[i] > trigger * scale_at(sv[i])) continue;
        const double lo = sv[std::max(0, i - 1)];
        const double hi = sv[std::min(grid_n - 1, i + 1)];
        const double s_star = golden_min(min_lambda, lo, hi, 1e-10);
        // Accept only genuine degeneracies, not shallow dips.
        if (min_lambda(s_star) <= 1e-8 * scale_at(s_star)) {
            bool dup = false;
            for (double cnd : scan.candidates)
                if (std::abs(cnd - s_star) < 1e-6) dup = true;
            if (!dup) scan.candidates.push_back(s_star);
        }
    }
    return scan;
}

DegeneracyResult degeneracy_orders(const SurfaceMap& phi, const Weights& w,
                                   const SectorRegion& r, double sigma,
                                   Side side, int depths) {
    if (depths < 8) throw std::invalid_argument("degeneracy_orders: depths must be >= 8");
    const double sgn = side == Side::left ? -1.0 : 1.0;
    const double room = side == Side::left ? sigma - r.c : r.d - sigma;

    // Rooms below the sigma refinement resolution cannot be probed: the
    // dyadic offsets would be of the same size as the error in sigma itself.
    DegeneracyResult res;
    if (!(room > 1e-7)) {
        res.absent = true;
        res.note = room > 0.0
                       ? "one-sided neighborhood narrower than the sigma resolution"
                       : "no one-sided neighborhood inside the region";
        return res;
    }

    // Smallest k whose dyadic offset fits into half the available room;
    // offsets outside the region would probe unrelated structure.
    int k0 = 3;
    while (std::ldexp(1.0, -k0) > 0.5 * room) ++k0;

    const HessCache hess(phi);
    auto min_lambda = [&](double s) {
        return min_abs_eigen(eigenvalues(hess.k_at(1.0, s)));
    };

    std::vector<std::pair<double, double>> pts;
    double D = std::numeric_limits<double>::infinity();
    std::vector<double> offsets;
    for (int k = k0; k <= k0 + depths; ++k) {
        const double off = std::ldexp(1.0, -k);
        const double v = min_lambda(sigma + sgn * off);
        if (!(v > 0.0)) continue;  // exact zero cannot enter the log fit
        pts.emplace_back(-static_cast<double>(k), std::log2(v));
        offsets.push_back(off);
    }
    if (pts.size() < 6) throw DegenerateFitError("too few usable dyadic samples", {});

    const ScalingFit fit = fit_loglog(pts);
    const int n = static_cast<int>(std::lround(fit.slope));
    if (n < 1 || std::abs(fit.slope - n) > 0.1 || fit.r_squared < 0.99)
        throw DegenerateFitError("degenerate fit: slope " + std::to_string(fit.slope) +
                                     ", R^2 " + std::to_string(fit.r_squared),
                                 fit);

    for (std::size_t i = 0; i < offsets.size(); ++i) {
        const double v = std::exp2(pts[i].second);
        D = std::min(D, v / std::pow(offsets[i], n));
    }

    // t-scaling check: min |Lambda(t.(1,s))| = t^beta min |Lambda(1,s)|.
    double worst_scaling = 0.0;
    for (double t : {0.5, 0.25}) {
        const double tb = std::pow(t, w.beta);
        for (double off : {offsets.front(), offsets.back()}) {
            const double s = sigma + sgn * off;
            const Point2 tx = dilate(w, t, {1.0, s});
            const double lhs = min_abs_eigen(eigenvalues(hess.k_at(tx[0], tx[1])));
            const double rhs = tb * min_lambda(s);
            worst_scaling = std::max(
                worst_scaling, std::abs(lhs - rhs) / std::max(std::abs(rhs), 1e-300));
        }
    }

    res.n = n;
    res.D = D;
    res.fit = fit;
    res.t_scaling_max_rel_err = worst_scaling;
    return res;
}

H4Result check_H4(std::optional<int> n1, std::optional<int> n2, const Weights& w) {
    if (!n1 && !n2)
        throw std::invalid_argument("check_H4: at least one of n1, n2 required");
    const int worst = std::max(n1.value_or(0), n2.value_or(0));
    const double bound = 2.0 * w.m / (w.alpha1 + w.alpha2) - 3.0;
    return {static_cast<double>(worst) < bound, bound - worst, bound};
}

HParts H_eval(const SurfaceMap& phi, const Weights& w, const Point2& zeta,
              double s) {
    require_unit(zeta, "H_eval");
    const SectionCache sec(phi);
    const double G = sec.G(zeta[0], zeta[1], s);
    const double Gs = sec.G_s(zeta[0], zeta[1], s);
    const double Gss = sec.G_ss(zeta[0], zeta[1], s);
    HParts h;
    h.f1 = w.m * (w.m - w.alpha1) * G * Gss;
    h.f2 = (w.m - w.alpha2) * (w.m - w.alpha2) * Gs * Gs;
    h.f3 = w.alpha2 * (w.alpha1 - w.alpha2) * s * Gs * Gss;
    h.H = h.f1 - h.f2 + h.f3;
    return h;
}

std::vector<ThresholdSetCount> threshold_components(
    const SurfaceMap& phi, const Weights& w, const SectorRegion& r,
    const Point2& zeta, const ThresholdQuery& q, int grid_n) {
    require_unit(zeta, "threshold_components");
    if (!(q.delta > 0.0) || !(q.C > 0.0))
        throw std::invalid_argument("threshold_components: delta and C must be positive");
    if (grid_n < 4096)
        throw std::invalid_argument("threshold_components: need a grid of >= 4096 points");

    double lo, hi;
    char prefix;
    if (q.tau) {
        lo = std::max(*q.tau - q.delta, r.c);
        hi = std::min(*q.tau + q.delta, r.d);
        prefix = 'K';
    } else if (q.side == Side::left) {
        lo = q.sigma - q.delta;
        hi = q.sigma;
        prefix = 'I';
    } else {
        lo = q.sigma;
        hi = q.sigma + q.delta;
        prefix = 'J';
    }
    const double zeta_angle = std::atan2(zeta[1], zeta[0]);

    std::vector<ThresholdSetCount> out;
    if (!(hi > lo)) {
        for (int set = 1; set <= 5; ++set)
            out.push_back({std::string(1, prefix) + std::to_string(set), zeta_angle, 0,
                           grid_n});
        return out;
    }

    const SectionCache sec(phi);
    std::vector<double> f1v(grid_n), f2v(grid_n), f3v(grid_n), thr(grid_n);
    for (int i = 0; i < grid_n; ++i) {
        // Midpoint grid keeps endpoints (where the threshold vanishes) out.
        const double s = lo + (hi - lo) * (i + 0.5) / grid_n;
        const double G = sec.G(zeta[0], zeta[1], s);
        const double Gs = sec.G_s(zeta[0], zeta[1], s);
        const double Gss = sec.G_ss(zeta[0], zeta[1], s);
        f1v[i] = w.m * (w.m - w.alpha1) * G * Gss;
        f2v[i] = (w.m - w.alpha2) * (w.m - w.alpha2) * Gs * Gs;
        f3v[i] = w.alpha2 * (w.alpha1 - w.alpha2) * s * Gs * Gss;
        thr[i] = q.tau ? q.C / 4.0
                       : q.C / 4.0 * std::pow(std::abs(s - q.sigma), q.n);
    }

    auto count_runs = [&](auto&& pred) {
        int count = 0;
        bool inside = false;
        for (int i = 0; i < grid_n; ++i) {
            const bool in = pred(i);
            if (in && !inside) ++count;
            inside = in;
        }
        return count;
    };

    const int counts[5] = {
        count_runs([&](int i) { return f1v[i] > thr[i]; }),
        count_runs([&](int i) { return f1v[i] < -thr[i]; }),
        count_runs([&](int i) { return f2v[i] > thr[i]; }),
        count_runs([&](int i) { return f3v[i] > thr[i]; }),
        count_runs([&](int i) { return f3v[i] < -thr[i]; }),
    };
    for (int set = 1; set <= 5; ++set)
        out.push_back({std::string(1, prefix) + std::to_string(set), zeta_angle,
                       counts[set - 1], grid_n});
    return out;
}

EllipticityReport run_hypothesis_suite(const SurfaceMap& phi, const Weights& w,
                                       const SectorRegion& r) {
    EllipticityReport rep;
    rep.h2 = check_quasi_homogeneous(phi, w);
    rep.sigma_scan = find_sigma(phi, w, r);
    bool fits_ok = true;
    if (rep.sigma_scan.h3_holds()) {
        rep.sigma = rep.sigma_scan.candidates.front();
        for (Side side : {Side::left, Side::right}) {
            try {
                const DegeneracyResult d = degeneracy_orders(phi, w, r, rep.sigma, side);
                if (d.absent) continue;
                (side == Side::left ? rep.n1 : rep.n2) = d.n;
                rep.D_estimate = rep.D_estimate == 0.0 ? d.D : std::min(rep.D_estimate, d.D);
                rep.fits.push_back(d.fit);
            } catch (const DegenerateFitError&) {
                fits_ok = false;
            }
        }
        // Empirical lower bound for the non-vanishing eigenvalue near sigma.
        const HessCache hess(phi);
        double dtilde = std::numeric_limits<double>::infinity();
        for (int k = 3; k <= 16; ++k) {
            for (double sgn : {-1.0, 1.0}) {
                const double s = rep.sigma + sgn * std::ldexp(1.0, -k);
                if (s < r.c || s > r.d) continue;
                const EigenPair e = eigenvalues(hess.k_at(1.0, s));
                dtilde = std::min(dtilde, max_abs_eigen(e));
            }
        }
        if (std::isfinite(dtilde)) rep.D_tilde_estimate = dtilde;
        if (rep.n1 || rep.n2) rep.h4 = check_H4(rep.n1, rep.n2, w);
    }
    rep.all_pass = rep.h2.pass() && rep.h2.weight_inequality_ok &&
                   rep.sigma_scan.h3_holds() && fits_ok && (rep.n1 || rep.n2) &&
                   rep.h4 && rep.h4->pass;
    return rep;
}

} // namespace oscdecay::ellipticity
