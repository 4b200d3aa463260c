#include "oscdecay/oscillatory.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "oscdecay/parallel.hpp"
#include "oscdecay/quadrature.hpp"
#include "phase_panels.hpp"

namespace oscdecay::fourier {

namespace {

struct SinglePass {
    std::complex<double> value;
    long long panels;
    bool degraded;
};

SinglePass evaluate_pass(const Weights& w, double A1, double A2, double A3,
                         double ppp, const OscSettings& st) {
    const double asum = w.alpha_sum();
    const double g1 = w.alpha1 / asum, g2 = w.alpha2 / asum, g3 = w.gamma;

    std::vector<double> edges;
    bool degraded = false;
    double p = ppp;
    while (!detail::build_phase_panels(A1, A2, A3, g1, g2, g3, p, st.h_max,
                                       st.max_panels, edges)) {
        degraded = true;
        p *= 0.5;
        if (p < 0.25) {
            // Give up on the panel rule: deterministic uniform fallback.
            PanelGrid g = uniform_panels(0.0, 1.0,
                                         static_cast<std::size_t>(st.max_panels));
            edges = std::move(g.edges);
            break;
        }
    }

    PanelGrid grid;
    grid.edges = std::move(edges);
    std::vector<double> U, W;
    grid.expand(gauss_legendre(st.gauss_order), U, W);

    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < U.size(); ++i) {
        const double u = U[i];
        const double ph = A1 * std::pow(u, g1) + A2 * std::pow(u, g2) +
                          A3 * std::pow(u, g3);
        re += W[i] * std::cos(ph);
        im -= W[i] * std::sin(ph);
    }
    return {std::complex<double>(re / asum, im / asum),
            static_cast<long long>(grid.panel_count()), degraded};
}

} // namespace

OscResult oscillatory_integral_1d(const Weights& w, double A1, double A2,
                                  double A3, const OscSettings& st) {
    const SinglePass base = evaluate_pass(w, A1, A2, A3, st.panels_per_period, st);
    const SinglePass fine =
        evaluate_pass(w, A1, A2, A3, 2.0 * st.panels_per_period, st);
    OscResult res;
    res.value = fine.value;
    res.abs_error_estimate = std::abs(fine.value - base.value);
    res.panels_used = base.panels + fine.panels;
    res.status = (base.degraded || fine.degraded) ? QuadStatus::budget_exceeded
                                                  : QuadStatus::ok;
    return res;
}

VdcScan vdc_constant_scan(const Weights& w, const std::vector<double>& A3_list,
                          double grid_half_width, int grid_n,
                          double fake_exponent, const OscSettings& st,
                          int jobs) {
    if (A3_list.empty())
        throw std::invalid_argument("vdc_constant_scan: empty A3 list");
    for (double a3 : A3_list)
        if (std::abs(a3) < 1.0)
            throw std::invalid_argument("vdc_constant_scan: requires |A3| >= 1");
    if (grid_n < 1) throw std::invalid_argument("vdc_constant_scan: grid_n >= 1");

    VdcScan scan;
    scan.exponent =
        fake_exponent >= 0.0 ? fake_exponent : w.alpha_sum() / w.m;

    std::vector<double> ab(grid_n);
    if (grid_n == 1) {
        ab[0] = 0.0;
    } else {
        for (int i = 0; i < grid_n; ++i)
            ab[i] = -grid_half_width +
                    2.0 * grid_half_width * static_cast<double>(i) / (grid_n - 1);
    }

    scan.samples.resize(A3_list.size() * ab.size() * ab.size());
    parallel_for(
        scan.samples.size(),
        [&](std::size_t idx) {
            const std::size_t per_a3 = ab.size() * ab.size();
            const double A3 = A3_list[idx / per_a3];
            const double a = ab[(idx % per_a3) / ab.size()];
            const double b = ab[idx % ab.size()];
            // Co-scaled amplitudes: the normalized oscillator depends on
            // (a, b) only, so the scan probes the constant uniformly.
            const double A1 = a * std::pow(std::abs(A3), w.alpha1 / w.m);
            const double A2 = b * std::pow(std::abs(A3), w.alpha2 / w.m);
            const OscResult r = oscillatory_integral_1d(w, A1, A2, A3, st);
            scan.samples[idx] = {A3, a, b,
                                 std::abs(r.value) *
                                     std::pow(std::abs(A3), scan.exponent)};
        },
        jobs);

    // Serial reduction in index order.
    for (const auto& smp : scan.samples) {
        const int dec = static_cast<int>(std::floor(std::log10(std::abs(smp.A3))));
        auto it = std::find_if(scan.decade_sups.begin(), scan.decade_sups.end(),
                               [&](const VdcScan::DecadeSup& d) { return d.decade == dec; });
        if (it == scan.decade_sups.end())
            scan.decade_sups.push_back({dec, smp.normalized});
        else
            it->sup = std::max(it->sup, smp.normalized);
        scan.overall_sup = std::max(scan.overall_sup, smp.normalized);
    }
    std::sort(scan.decade_sups.begin(), scan.decade_sups.end(),
              [](const auto& a, const auto& b) { return a.decade < b.decade; });

    if (scan.decade_sups.size() >= 2) {
        bool monotone = true;
        for (std::size_t i = 1; i < scan.decade_sups.size(); ++i)
            if (scan.decade_sups[i].sup < scan.decade_sups[i - 1].sup * (1.0 - 1e-12))
                monotone = false;
        const double growth =
            scan.decade_sups.back().sup / scan.decade_sups.front().sup;
        scan.growth_flagged = monotone && growth > 2.0;
    }
    return scan;
}

} // namespace oscdecay::fourier
