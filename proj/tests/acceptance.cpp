// Acceptance gate: one line per criterion, PASS/FAIL, exit 0 only if every
// requested criterion passes. With no arguments all eleven run (the decay
// criterion alone takes several minutes); a list of criterion numbers
// restricts the run, e.g. `acceptance 1 2 9`.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstring>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "oscdecay/convolution.hpp"
#include "oscdecay/ellipticity.hpp"
#include "oscdecay/fourier.hpp"
#include "oscdecay/io.hpp"
#include "oscdecay/parallel.hpp"
#include "oscdecay/restriction.hpp"
#include "oscdecay/rng.hpp"

using namespace oscdecay;
using Clock = std::chrono::steady_clock;

namespace {

const io::SurfaceSpec& spec() {
    static const io::SurfaceSpec s = io::example5();
    return s;
}

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// --- 1. hypothesis suite -------------------------------------------------

bool criterion1(std::string& note) {
    const auto t0 = Clock::now();
    const auto rep = ellipticity::run_hypothesis_suite(spec().phi, spec().w, spec().r);
    const double dt = seconds_since(t0);

    const bool ok = rep.h2.pass() && rep.sigma_scan.h3_holds() &&
                    std::abs(rep.sigma - 1.0) <= 1e-8 && rep.n1 && *rep.n1 == 1 &&
                    !rep.fits.empty() && rep.fits[0].r_squared >= 0.99 &&
                    rep.h4 && rep.h4->margin == 4.0 && rep.all_pass && dt < 10.0;
    std::ostringstream ss;
    ss << "sigma=" << rep.sigma << " n1=" << (rep.n1 ? *rep.n1 : -1)
       << " R2=" << (rep.fits.empty() ? 0.0 : rep.fits[0].r_squared)
       << " margin=" << (rep.h4 ? rep.h4->margin : -1.0) << " t=" << dt << "s";
    note = ss.str();
    return ok;
}

// --- 2. Euler identity ---------------------------------------------------

bool criterion2(std::string& note) {
    const auto t0 = Clock::now();
    std::vector<std::pair<Point2, double>> samples;
    for (int j = 0; j < 16; ++j) {
        const double th = 2.0 * M_PI * j / 16;
        for (int i = 0; i < 64; ++i) {
            const double s = spec().r.c + (spec().r.d - spec().r.c) * (i + 0.5) / 64;
            samples.push_back({{std::cos(th), std::sin(th)}, s});
        }
    }
    const double res = ellipticity::verify_euler_identity(spec().phi, spec().w, samples);
    const double dt = seconds_since(t0);
    std::ostringstream ss;
    ss << "max_rel_residual=" << res << " t=" << dt << "s";
    note = ss.str();
    return res <= 1e-9 && dt < 5.0;
}

// --- 3. section determinant consistency ----------------------------------

bool criterion3(std::string& note) {
    auto detK = [&](double y) {
        return ellipticity::k_matrix(spec().phi, {1.0, y}).det();
    };
    const double at1 = detK(1.0);
    bool positive = true;
    for (int i = 0; i < 64; ++i) {
        const double y = 0.97 + (1.0 - 0.97) * i / 64.0;
        positive = positive && detK(y) > 0.0;
    }
    const double h = 1e-6;
    const double deriv = (detK(1.0 + h) - detK(1.0 - h)) / (2 * h);

    std::ostringstream ss;
    ss << "detK(1,1)=" << at1 << " positive_band=" << (positive ? "yes" : "no")
       << " d/dy=" << deriv;
    note = ss.str();
    return std::abs(at1) <= 1e-10 && positive && std::abs(deriv) > 1e-3;
}

// --- 4. Fourier mass and uniform bound -----------------------------------

bool criterion4(std::string& note) {
    const auto zero = fourier::mu_hat(spec().phi, spec().w, spec().r, {});
    const double mass = zero.value.real();
    bool ok = std::abs(mass - 2.0 / 297.0) <= 1e-8;

    Rng rng(mix_seed(12345, 4));
    double worst_excess = 0.0, worst_conj = 0.0;
    for (int k = 0; k < 100 && ok; ++k) {
        const fourier::Frequency4 xi{
            {rng.uniform(-5.0, 5.0), rng.uniform(-5.0, 5.0)},
            {rng.uniform(-300.0, 300.0), rng.uniform(-300.0, 300.0)}};
        const fourier::Frequency4 neg{{-xi.xi_prime[0], -xi.xi_prime[1]},
                                      {-xi.xi_dprime[0], -xi.xi_dprime[1]}};
        const auto v = fourier::mu_hat(spec().phi, spec().w, spec().r, xi);
        const auto c = fourier::mu_hat(spec().phi, spec().w, spec().r, neg);

        const double excess =
            std::abs(v.value) - (mass + v.abs_error_estimate + zero.abs_error_estimate);
        worst_excess = std::max(worst_excess, excess);
        const double conj = std::abs(std::conj(v.value) - c.value) -
                            (v.abs_error_estimate + c.abs_error_estimate);
        worst_conj = std::max(worst_conj, conj);
    }
    ok = ok && worst_excess <= 0.0 && worst_conj <= 1e-12;

    std::ostringstream ss;
    ss << "mass=" << mass << " bound_excess=" << worst_excess
       << " conj_defect=" << worst_conj;
    note = ss.str();
    return ok;
}

// --- 5. decay fits -------------------------------------------------------

bool criterion5(std::string& note) {
    const auto t0 = Clock::now();
    std::vector<double> radii;
    for (int k = 0; k < 8; ++k) radii.push_back(std::pow(10.0, 2.0 + 3.0 * k / 7.0));
    const std::vector<Point2> xips{{0.0, 0.0}, {2.0, 0.0}, {0.0, 2.0}, {1.5, -1.5}};
    const auto rep = fourier::decay_fit(spec().phi, spec().w, spec().r,
                                        fourier::default_directions(8), xips, radii);
    const double dt = seconds_since(t0);

    const bool ok = rep.status == fourier::QuadStatus::ok &&
                    rep.worst_slope <= -0.25 + 0.05 && rep.min_r_squared >= 0.98 &&
                    dt < 1800.0;
    std::ostringstream ss;
    ss << "entries=" << rep.entries.size() << " worst_slope=" << rep.worst_slope
       << " min_R2=" << rep.min_r_squared << " C_emp=" << rep.c_emp
       << " t=" << dt << "s";
    note = ss.str();
    return ok;
}

// --- 6. van der Corput scan ----------------------------------------------

bool criterion6(std::string& note) {
    std::vector<double> a3;
    for (int k = 0; k < 13; ++k) a3.push_back(std::pow(10.0, 2.0 + 0.25 * k));

    const auto scan = fourier::vdc_constant_scan(spec().w, a3);
    double lo = scan.decade_sups.front().sup, hi = lo;
    for (const auto& d : scan.decade_sups) {
        lo = std::min(lo, d.sup);
        hi = std::max(hi, d.sup);
    }
    const auto fake = fourier::vdc_constant_scan(spec().w, a3, 3.0, 7, 0.5);

    std::ostringstream ss;
    ss << "decade_spread=" << hi / lo << " control_flagged="
       << (fake.growth_flagged ? "yes" : "no");
    note = ss.str();
    return hi < 2.0 * lo && !scan.growth_flagged && fake.growth_flagged;
}

// --- 7. singular integral ------------------------------------------------

bool criterion7(std::string& note) {
    const auto sup =
        fourier::singular_integral_sup(spec().phi, spec().w, spec().r, 360, 2048);
    const bool sup_ok = !sup.divergence_suspected && std::isfinite(sup.sup_value) &&
                        sup.refinement_ratio >= 0.95 && sup.refinement_ratio <= 1.05;

    // Synthetic: phi1(1, s) = s - 1, so along (1, 0) the integral has the
    // closed form (4/3)[(d-1)^{3/4} + (1-c)^{3/4}] on [0.9, 1.05].
    SurfaceMap lin;
    lin.phi1 = BivariatePolynomial({{12, 0, -1.0}, {10, 1, 1.0}});
    lin.phi2 = BivariatePolynomial({{12, 0, 1.0}});
    const SectorRegion wide(0.9, 1.05);
    const auto syn = fourier::singular_integral_zeta(lin, spec().w, wide, {1.0, 0.0}, 2048);
    const double exact = (4.0 / 3.0) * (std::pow(0.05, 0.75) + std::pow(0.1, 0.75));
    const bool syn_ok = std::abs(syn.value - exact) <= 1e-6;

    std::ostringstream ss;
    ss << "sup=" << sup.sup_value << " ratio=" << sup.refinement_ratio
       << " synthetic_err=" << std::abs(syn.value - exact);
    note = ss.str();
    return sup_ok && syn_ok;
}

// --- 8. Knapp scaling ----------------------------------------------------

bool criterion8(std::string& note) {
    std::vector<double> eps;
    for (int k = 3; k <= 10; ++k) eps.push_back(std::ldexp(1.0, -k));

    double slope1 = 0.0, slope2 = 0.0;
    bool fits_ok = true;
    try {
        slope1 = restriction::knapp_exponent_fit(spec().phi, spec().w, spec().r,
                                                 1.0, eps).fit.slope;
        slope2 = restriction::knapp_exponent_fit(spec().phi, spec().w, spec().r,
                                                 2.0, eps).fit.slope;
    } catch (const DegenerateFitError&) {
        fits_ok = false;
    }
    fits_ok = fits_ok && std::abs(slope1 + 12.0) <= 0.05 &&
              std::abs(slope2 + 12.75) <= 0.05;

    // Pointwise factor bound on every sampled patch point, all eps.
    bool factors_ok = true;
    double min_factor = 2.0;
    for (double e : eps) {
        const restriction::KnappBox box(spec().phi, spec().w, spec().r, e);
        const double L1 = std::pow(e, -0.5), L2 = 1.0 / e, L3 = std::pow(e, -6.0);
        for (int it = 0; it <= 8; ++it) {
            const double tau = e * box.eta * 0.5 * (1.0 + it / 8.0);
            for (int is = 0; is <= 8; ++is) {
                const double s = box.s_band.first +
                                 (box.s_band.second - box.s_band.first) * is / 8.0;
                const auto ph = spec().phi.eval(1.0, s);
                const double theta[4] = {std::sqrt(tau) * L1, tau * s * L2,
                                         std::pow(tau, 6.0) * ph[0] * L3,
                                         std::pow(tau, 6.0) * ph[1] * L3};
                for (double th : theta) {
                    const double half = 0.5 * std::abs(th);
                    const double f = half == 0.0 ? 1.0 : std::sin(half) / half;
                    min_factor = std::min(min_factor, f);
                    factors_ok = factors_ok && f >= std::sin(1.0);
                }
            }
        }
    }

    std::ostringstream ss;
    ss << "slope_q1=" << slope1 << " slope_q2=" << slope2
       << " min_factor=" << min_factor << " (sin(1)=" << std::sin(1.0) << ")";
    note = ss.str();
    return fits_ok && factors_ok;
}

// --- 9. exact exponent arithmetic ----------------------------------------

bool criterion9(std::string& note) {
    const auto t = restriction::critical_exponents(spec().w);
    const auto v = convolution::typeset_vertex(spec().w);
    const bool ok = t.restriction_threshold == 17.0 / 18.0 &&
                    t.knapp_slope_factor == 9.0 &&
                    t.quadrilateral[0] == std::array<double, 2>{1.0, 0.0} &&
                    t.quadrilateral[1] == std::array<double, 2>{1.0, 1.0} &&
                    t.quadrilateral[2] == std::array<double, 2>{17.0 / 18.0, 1.0} &&
                    t.quadrilateral[3] == std::array<double, 2>{17.0 / 18.0, 0.5} &&
                    v.inv_p == 5.0 / 9.0 && v.inv_q == 4.0 / 9.0;
    note = ok ? "threshold=17/18 factor=9 vertex=(5/9,4/9), all bitwise"
              : "an exact comparison failed";
    return ok;
}

// --- 10. delta-box lower bounds ------------------------------------------

bool criterion10(std::string& note) {
    std::vector<double> deltas;
    for (int k = 1; k <= 8; ++k) deltas.push_back(std::ldexp(1.0, -k));

    int violations = 0;
    for (std::size_t di = 0; di < deltas.size(); ++di) {
        const convolution::DeltaBox box(spec().phi, spec().w, spec().r, deltas[di]);
        const double bound = std::pow(deltas[di], 1.5) *
                             convolution::patch_measure(spec().w, box);
        Rng rng(mix_seed(12345, di));
        for (int k = 0; k < 100; ++k) {
            const double tau = rng.uniform(0.5, 1.0);
            const double s = rng.uniform(box.s_band.first, box.s_band.second);
            const auto x = convolution::a_delta_sample(
                spec().phi, spec().w, box, tau, s, rng.uniform(-1.0, 1.0),
                rng.uniform(-1.0, 1.0));
            if (convolution::convolve_mu_box(spec().phi, spec().w, spec().r, box, x) <
                bound)
                ++violations;
        }
    }

    double slope1 = 0.0, slope2 = 0.0;
    bool fits_ok = true;
    try {
        slope1 = convolution::box_lower_bound_fit(spec().phi, spec().w, spec().r,
                                                  1.0, deltas).fit.slope;
        slope2 = convolution::box_lower_bound_fit(spec().phi, spec().w, spec().r,
                                                  2.0, deltas).fit.slope;
    } catch (const DegenerateFitError&) {
        fits_ok = false;
    }
    fits_ok = fits_ok && std::abs(slope1 - 15.0) <= 0.1 &&
              std::abs(slope2 - 8.25) <= 0.1;

    std::ostringstream ss;
    ss << "pointwise_violations=" << violations << "/800 slope_q1=" << slope1
       << " slope_q2=" << slope2;
    note = ss.str();
    return violations == 0 && fits_ok;
}

// --- 11. determinism -----------------------------------------------------

// Serialize a mixed workload (parallel zeta sweep + a decay entry + seeded
// samples) to a report string under a given worker count.
std::string determinism_report(int jobs) {
    set_default_jobs(jobs);
    nlohmann::ordered_json j;

    const auto sup =
        fourier::singular_integral_sup(spec().phi, spec().w, spec().r, 360, 2048, jobs);
    j["singular"] = {{"sup", sup.sup_value}, {"argmax", sup.argmax_angle}};

    std::vector<double> radii;
    for (int k = 0; k < 8; ++k) radii.push_back(std::pow(10.0, 2.0 + 3.0 * k / 7.0));
    const auto rep = fourier::decay_fit(
        spec().phi, spec().w, spec().r,
        {{std::cos(M_PI / 8), std::sin(M_PI / 8)}}, {{0.0, 0.0}}, radii, {}, jobs);
    j["decay"] = {{"slope", rep.entries[0].fit.slope},
                  {"r2", rep.entries[0].fit.r_squared},
                  {"c_emp", rep.c_emp}};

    Rng rng(mix_seed(12345, 11));
    std::vector<double> draws(8);
    for (double& d : draws) d = rng.uniform();
    j["draws"] = draws;
    return j.dump();
}

bool criterion11(std::string& note) {
    const std::string a = determinism_report(1);
    const std::string b = determinism_report(4);
    const std::string c = determinism_report(1);
    set_default_jobs(0);
    note = (a == b && a == c) ? "identical across jobs{1,4} and reruns"
                              : "reports differ";
    return a == b && a == c;
}

} // namespace

int main(int argc, char** argv) {
    struct Entry {
        int id;
        const char* title;
        bool (*fn)(std::string&);
    };
    const Entry entries[] = {
        {1, "hypothesis suite (H1-H4, sigma, n1, margin)", criterion1},
        {2, "Euler identity residual", criterion2},
        {3, "section determinant consistency", criterion3},
        {4, "Fourier mass, symmetry, uniform bound", criterion4},
        {5, "decay fits over 8 directions x 4 xi'", criterion5},
        {6, "van der Corput normalized sups", criterion6},
        {7, "singular integral sup and closed form", criterion7},
        {8, "Knapp scaling and factor bounds", criterion8},
        {9, "exact exponent arithmetic", criterion9},
        {10, "delta-box pointwise and norm scaling", criterion10},
        {11, "byte-identical reports across workers", criterion11},
    };

    std::set<int> wanted;
    for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));

    int failures = 0;
    for (const auto& e : entries) {
        if (!wanted.empty() && !wanted.count(e.id)) continue;
        std::string note;
        bool ok = false;
        try {
            ok = e.fn(note);
        } catch (const std::exception& ex) {
            note = std::string("exception: ") + ex.what();
        }
        std::printf("%s  criterion %2d: %s  [%s]\n", ok ? "PASS" : "FAIL", e.id,
                    e.title, note.c_str());
        std::fflush(stdout);
        if (!ok) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
