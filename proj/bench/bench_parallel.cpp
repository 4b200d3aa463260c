// Compares the serial reference path (jobs = 1) against the OpenMP path
// (jobs = 0, i.e. all workers) on the two data-parallel workloads: the
// zeta sweep behind the singular-integral sup and a decay frequency
// sweep. Also asserts that both paths produce identical values, which is
// what makes the serial path a usable reference implementation.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <vector>

#include "oscdecay/fourier.hpp"
#include "oscdecay/io.hpp"
#include "oscdecay/parallel.hpp"

using namespace oscdecay;
using Clock = std::chrono::steady_clock;

namespace {

double time_of(const std::function<void()>& fn) {
    const auto t0 = Clock::now();
    fn();
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

void report(const char* name, double serial, double parallel, bool identical) {
    std::printf("%-24s serial %7.3fs   parallel %7.3fs   speedup %.2fx   %s\n",
                name, serial, parallel, serial / parallel,
                identical ? "identical" : "RESULTS DIFFER");
}

} // namespace

int main() {
    const auto spec = io::example5();
    std::printf("workers available: %d\n\n", default_jobs());

    // Zeta sweep: 720 angles, two grid resolutions each.
    fourier::SingularResult s1, sn;
    const double t_s1 = time_of([&] {
        s1 = fourier::singular_integral_sup(spec.phi, spec.w, spec.r, 720, 4096, 1);
    });
    const double t_sn = time_of([&] {
        sn = fourier::singular_integral_sup(spec.phi, spec.w, spec.r, 720, 4096, 0);
    });
    report("singular zeta sweep", t_s1, t_sn,
           s1.sup_value == sn.sup_value && s1.argmax_angle == sn.argmax_angle);

    // Frequency sweep: one direction, 8 radii, 2 xi' samples.
    std::vector<double> radii;
    for (int k = 0; k < 8; ++k)
        radii.push_back(std::pow(10.0, 2.0 + 3.0 * k / 7.0));
    const std::vector<Point2> dirs{{std::cos(M_PI / 8), std::sin(M_PI / 8)}};
    const std::vector<Point2> xips{{0.0, 0.0}, {1.5, -1.5}};

    fourier::DecayReport d1, dn;
    const double t_d1 = time_of([&] {
        d1 = fourier::decay_fit(spec.phi, spec.w, spec.r, dirs, xips, radii, {}, 1);
    });
    const double t_dn = time_of([&] {
        dn = fourier::decay_fit(spec.phi, spec.w, spec.r, dirs, xips, radii, {}, 0);
    });
    bool same = d1.entries.size() == dn.entries.size() && d1.c_emp == dn.c_emp;
    for (std::size_t i = 0; same && i < d1.entries.size(); ++i)
        same = d1.entries[i].fit.slope == dn.entries[i].fit.slope;
    report("decay frequency sweep", t_d1, t_dn, same);

    return 0;
}
