#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oscdecay/convolution.hpp"
#include "oscdecay/io.hpp"
#include "oscdecay/rng.hpp"

using namespace oscdecay;
using namespace oscdecay::convolution;

namespace {
const io::SurfaceSpec& spec() {
    static const io::SurfaceSpec s = io::example5();
    return s;
}
} // namespace

TEST_CASE("convolving with 1 returns the total mass") {
    const auto one = [](const Point4&) { return 1.0; };
    const double v =
        convolve_mu(spec().phi, spec().w, spec().r, one, {0.3, -0.2, 1.0, 0.5});
    // The (u, s) quadrature is exact for the polynomial Jacobian.
    CHECK(v == doctest::Approx(2.0 / 297.0).epsilon(1e-13));
}

TEST_CASE("convolution is translation covariant") {
    const Point4 shift{0.15, -0.4, 0.02, -0.07};
    const auto g = [](const Point4& u) {
        const double r2 =
            u[0] * u[0] + 2 * u[1] * u[1] + 0.5 * u[2] * u[2] + u[3] * u[3];
        return std::exp(-3.0 * r2);
    };
    const auto g_shifted = [&](const Point4& u) {
        return g({u[0] - shift[0], u[1] - shift[1], u[2] - shift[2],
                  u[3] - shift[3]});
    };
    const Point4 x{0.4, 0.3, 0.01, 0.02};
    const Point4 xs{x[0] + shift[0], x[1] + shift[1], x[2] + shift[2],
                    x[3] + shift[3]};
    const double a = convolve_mu(spec().phi, spec().w, spec().r, g, x);
    const double b = convolve_mu(spec().phi, spec().w, spec().r, g_shifted, xs);
    CHECK(a == doctest::Approx(b).epsilon(1e-9));
}

TEST_CASE("Young-type sup bound") {
    // ||mu * f||_inf <= mu(R^4) ||f||_inf = (2/297) sup |f|.
    const auto bump = [](const Point4& u) {
        return 5.0 / (1.0 + u[0] * u[0] + u[1] * u[1] + u[2] * u[2] + u[3] * u[3]);
    };
    Rng rng(mix_seed(99, 0));
    for (int k = 0; k < 5; ++k) {
        const Point4 x{rng.uniform(-1, 1), rng.uniform(-1, 1),
                       rng.uniform(-1, 1), rng.uniform(-1, 1)};
        const double v = convolve_mu(spec().phi, spec().w, spec().r, bump, x);
        CHECK(v <= (2.0 / 297.0) * 5.0 * (1 + 1e-12));
        CHECK(v >= 0.0);
    }
}

TEST_CASE("delta box construction and closed-form measures") {
    const DeltaBox box(spec().phi, spec().w, spec().r, 0.25);
    CHECK(box.delta == 0.25);
    CHECK(box.M > 0.0);
    CHECK(box.z_thick == std::pow(0.25, 6.0));
    CHECK(box.half[0] == doctest::Approx(2.0 * std::pow(0.25, 0.5)).epsilon(1e-14));
    CHECK(box.half[1] == doctest::Approx(2.0 * 0.25).epsilon(1e-14));
    CHECK(box.half[2] ==
          doctest::Approx((2.0 * box.M + 1.0) * std::pow(0.25, 6.0)).epsilon(1e-14));
    CHECK(box.half[3] == box.half[2]);

    // |Q| closed form: (s2-s1) a1/(a1+a2) (1 - 2^{-(a1+a2)}).
    const double width = box.s_band.second - box.s_band.first;
    const double q_ref =
        width * (0.5 / 1.5) * (1.0 - std::pow(2.0, -1.5));
    CHECK(patch_measure(spec().w, box) == doctest::Approx(q_ref).epsilon(1e-14));

    // |A_delta| = delta^{a1+a2} |Q| (2 delta^m)^2.
    const double a_ref = std::pow(0.25, 1.5) * q_ref *
                         4.0 * std::pow(0.25, 12.0);
    CHECK(a_delta_measure(spec().w, box) == doctest::Approx(a_ref).epsilon(1e-14));

    // |R_delta|^{1/p} for the box indicator.
    const double vol = 16.0 * box.half[0] * box.half[1] * box.half[2] * box.half[3];
    CHECK(box_f_norm(box, 1.0) == doctest::Approx(vol).epsilon(1e-14));
    CHECK(box_f_norm(box, 2.0) == doctest::Approx(std::sqrt(vol)).epsilon(1e-14));

    CHECK_THROWS_AS(DeltaBox(spec().phi, spec().w, spec().r, 0.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(DeltaBox(spec().phi, spec().w, spec().r, 1.5),
                    std::invalid_argument);
    CHECK_THROWS_AS(DeltaBox(spec().phi, spec().w, spec().r, 0.5, {0.2, 0.3}),
                    std::invalid_argument);
}

TEST_CASE("measure scaling across delta is exactly a1+a2+2m") {
    std::vector<double> logs_d, logs_m;
    for (int k = 1; k <= 8; ++k) {
        const double d = std::ldexp(1.0, -k);
        const DeltaBox box(spec().phi, spec().w, spec().r, d);
        logs_d.push_back(std::log(d));
        logs_m.push_back(std::log(a_delta_measure(spec().w, box)));
    }
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < logs_d.size(); ++i)
        pts.push_back({logs_d[i], logs_m[i]});
    const auto fit = fit_loglog(pts);
    CHECK(fit.slope == doctest::Approx(13.5).epsilon(1e-12));
}

TEST_CASE("pointwise lower bound on the delta box") {
    // mu * f_delta >= delta^{a1+a2} |Q| at every point of A_delta.
    for (double delta : {0.5, 0.125, 0.03125}) {
        const DeltaBox box(spec().phi, spec().w, spec().r, delta);
        const double bound =
            std::pow(delta, 1.5) * patch_measure(spec().w, box);
        Rng rng(mix_seed(4242, static_cast<std::uint64_t>(1.0 / delta)));
        for (int k = 0; k < 25; ++k) {
            const double tau = rng.uniform(0.5, 1.0);
            const double s = rng.uniform(box.s_band.first, box.s_band.second);
            const double z1 = rng.uniform(-1.0, 1.0);
            const double z2 = rng.uniform(-1.0, 1.0);
            const Point4 x =
                a_delta_sample(spec().phi, spec().w, box, tau, s, z1, z2);
            const double v =
                convolve_mu_box(spec().phi, spec().w, spec().r, box, x);
            REQUIRE(v >= bound);
        }
    }
}

TEST_CASE("box and generic convolution agree on the indicator") {
    const DeltaBox box(spec().phi, spec().w, spec().r, 0.5);
    const auto indicator = [&](const Point4& u) {
        return (std::abs(u[0]) <= box.half[0] && std::abs(u[1]) <= box.half[1] &&
                std::abs(u[2]) <= box.half[2] && std::abs(u[3]) <= box.half[3])
                   ? 1.0
                   : 0.0;
    };
    const Point4 x = a_delta_sample(spec().phi, spec().w, box, 0.8, 0.99, 0.2, -0.3);
    const double exact =
        convolve_mu_box(spec().phi, spec().w, spec().r, box, x);
    // The generic quadrature sees a discontinuous integrand, so agreement
    // is at grid resolution only; refine the generic grid for the check.
    ConvolveSettings st;
    st.t_panels = 256;
    st.s_panels = 256;
    const double generic =
        convolve_mu(spec().phi, spec().w, spec().r, indicator, x, st);
    CHECK(generic == doctest::Approx(exact).epsilon(0.02));
}

TEST_CASE("box lower-bound fits land on the predicted slopes") {
    std::vector<double> deltas;
    for (int k = 1; k <= 8; ++k) deltas.push_back(std::ldexp(1.0, -k));

    const auto q1 =
        box_lower_bound_fit(spec().phi, spec().w, spec().r, 1.0, deltas);
    CHECK(q1.predicted_slope == 15.0);
    CHECK(q1.fit.slope == doctest::Approx(15.0).epsilon(0.1 / 15.0));
    CHECK(q1.fit.r_squared > 0.999);
    REQUIRE(q1.norms.size() == 8);
    REQUIRE(q1.f_norms.size() == 8);
    REQUIRE(q1.a_measures.size() == 8);

    const auto q2 =
        box_lower_bound_fit(spec().phi, spec().w, spec().r, 2.0, deltas);
    CHECK(q2.predicted_slope == 8.25);
    CHECK(q2.fit.slope == doctest::Approx(8.25).epsilon(0.1 / 8.25));
}

TEST_CASE("box fit preconditions") {
    CHECK_THROWS_AS(box_lower_bound_fit(spec().phi, spec().w, spec().r, 1.0,
                                        {0.5, 0.25, 0.125}),
                    std::invalid_argument);
    CHECK_THROWS_AS(box_lower_bound_fit(spec().phi, spec().w, spec().r, 1.0,
                                        {0.5, 0.45, 0.4, 0.35, 0.3, 0.25}),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        box_lower_bound_fit(spec().phi, spec().w, spec().r, 1.0,
                            {1.5, 0.25, 0.125, 0.06, 0.03, 0.008}),
        std::invalid_argument);
}

TEST_CASE("type-set vertex and the necessary line") {
    const auto v = typeset_vertex(spec().w);
    CHECK(v.inv_p == 5.0 / 9.0);
    CHECK(v.inv_q == 4.0 / 9.0);
    // The vertex sits on 1/q = 1/p - (a1+a2)/(a1+a2+2m).
    CHECK(v.inv_q == doctest::Approx(v.inv_p - 1.5 / 13.5).epsilon(1e-15));
}

TEST_CASE("operator norm probe: stable at the vertex, grows off it") {
    const auto vx = typeset_vertex(spec().w);
    const auto at_vertex = operator_norm_probe(
        spec().phi, spec().w, spec().r, 1.0 / vx.inv_p, 1.0 / vx.inv_q,
        TestFamily::box, 6);
    CHECK_FALSE(at_vertex.growth_suspected);
    CHECK(at_vertex.sup_ratio > 0.0);
    REQUIRE(at_vertex.samples.size() == 6);

    // (1/p, 1/q) = (1, 1/2) violates the necessary condition: the same
    // family then certifies unboundedness by monotone ratio growth.
    const auto off = operator_norm_probe(spec().phi, spec().w, spec().r, 1.0,
                                         2.0, TestFamily::box, 6);
    CHECK(off.growth_suspected);
    CHECK(off.sup_ratio > 2.0 * off.samples.front().ratio);
}

TEST_CASE("gaussian probe family runs and stays finite") {
    const auto res = operator_norm_probe(spec().phi, spec().w, spec().r, 1.8,
                                         2.25, TestFamily::gaussian, 3);
    CHECK(res.family == TestFamily::gaussian);
    CHECK(res.samples.size() >= 3);
    for (const auto& s : res.samples) {
        CHECK(std::isfinite(s.ratio));
        CHECK(s.norm_p > 0.0);
        CHECK(s.norm_q >= 0.0);
    }
}
