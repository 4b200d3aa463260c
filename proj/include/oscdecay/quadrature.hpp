#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace oscdecay {

// Gauss-Legendre rule on [-1, 1]. Fixed tables cover every order used by
// the quadrature kernels; higher orders are never needed because panels
// are kept short relative to the local oscillation wavelength.
struct GaussRule {
    std::span<const double> nodes;
    std::span<const double> weights;
};

namespace detail {

inline constexpr double gl2_x[] = {-5.77350269189625731e-01, 5.77350269189625731e-01};
inline constexpr double gl2_w[] = {1.0, 1.0};
inline constexpr double gl3_x[] = {-7.74596669241483404e-01, 0.0, 7.74596669241483404e-01};
inline constexpr double gl3_w[] = {5.55555555555555691e-01, 8.88888888888888840e-01, 5.55555555555555691e-01};
inline constexpr double gl4_x[] = {-8.61136311594052573e-01, -3.39981043584856257e-01,
                                   3.39981043584856257e-01, 8.61136311594052573e-01};
inline constexpr double gl4_w[] = {3.47854845137453683e-01, 6.52145154862546206e-01,
                                   6.52145154862546206e-01, 3.47854845137453683e-01};
inline constexpr double gl5_x[] = {-9.06179845938663964e-01, -5.38469310105683108e-01, 0.0,
                                   5.38469310105683108e-01, 9.06179845938663964e-01};
inline constexpr double gl5_w[] = {2.36926885056189418e-01, 4.78628670499366193e-01,
                                   5.68888888888888999e-01, 4.78628670499366193e-01,
                                   2.36926885056189418e-01};
inline constexpr double gl6_x[] = {-9.32469514203152050e-01, -6.61209386466264482e-01,
                                   -2.38619186083196932e-01, 2.38619186083196932e-01,
                                   6.61209386466264482e-01, 9.32469514203152050e-01};
inline constexpr double gl6_w[] = {1.71324492379169746e-01, 3.60761573048138939e-01,
                                   4.67913934572691370e-01, 4.67913934572691370e-01,
                                   3.60761573048138939e-01, 1.71324492379169746e-01};
inline constexpr double gl8_x[] = {-9.60289856497536176e-01, -7.96666477413626728e-01,
                                   -5.25532409916328991e-01, -1.83434642495649780e-01,
                                   1.83434642495649780e-01, 5.25532409916328991e-01,
                                   7.96666477413626728e-01, 9.60289856497536176e-01};
inline constexpr double gl8_w[] = {1.01228536290376689e-01, 2.22381034453374343e-01,
                                   3.13706645877887047e-01, 3.62683783378361768e-01,
                                   3.62683783378361768e-01, 3.13706645877887047e-01,
                                   2.22381034453374343e-01, 1.01228536290376689e-01};
inline constexpr double gl16_x[] = {
    -9.89400934991649939e-01, -9.44575023073232600e-01, -8.65631202387831755e-01,
    -7.55404408355002999e-01, -6.17876244402643771e-01, -4.58016777657227370e-01,
    -2.81603550779258915e-01, -9.50125098376374544e-02, 9.50125098376374544e-02,
    2.81603550779258915e-01, 4.58016777657227370e-01, 6.17876244402643771e-01,
    7.55404408355002999e-01, 8.65631202387831755e-01, 9.44575023073232600e-01,
    9.89400934991649939e-01};
inline constexpr double gl16_w[] = {
    2.71524594117540374e-02, 6.22535239386477063e-02, 9.51585116824925914e-02,
    1.24628971255534030e-01, 1.49595988816576764e-01, 1.69156519395002619e-01,
    1.82603415044923612e-01, 1.89450610455068585e-01, 1.89450610455068585e-01,
    1.82603415044923612e-01, 1.69156519395002619e-01, 1.49595988816576764e-01,
    1.24628971255534030e-01, 9.51585116824925914e-02, 6.22535239386477063e-02,
    2.71524594117540374e-02};

} // namespace detail

inline GaussRule gauss_legendre(int n) {
    using namespace detail;
    switch (n) {
        case 2: return {gl2_x, gl2_w};
        case 3: return {gl3_x, gl3_w};
        case 4: return {gl4_x, gl4_w};
        case 5: return {gl5_x, gl5_w};
        case 6: return {gl6_x, gl6_w};
        case 8: return {gl8_x, gl8_w};
        case 16: return {gl16_x, gl16_w};
        default: throw std::invalid_argument("gauss_legendre: untabulated order");
    }
}

/// Composite panel description: edges[0] < edges[1] < ... < edges[n].
struct PanelGrid {
    std::vector<double> edges;

    std::size_t panel_count() const {
        return edges.empty() ? 0 : edges.size() - 1;
    }

    // Expands the panel edges into Gauss nodes/weights on each panel.
    void expand(const GaussRule& rule, std::vector<double>& nodes,
                std::vector<double>& weights) const {
        const std::size_t np = panel_count();
        nodes.resize(np * rule.nodes.size());
        weights.resize(np * rule.nodes.size());
        std::size_t k = 0;
        for (std::size_t p = 0; p < np; ++p) {
            const double mid = 0.5 * (edges[p] + edges[p + 1]);
            const double half = 0.5 * (edges[p + 1] - edges[p]);
            for (std::size_t j = 0; j < rule.nodes.size(); ++j, ++k) {
                nodes[k] = mid + half * rule.nodes[j];
                weights[k] = half * rule.weights[j];
            }
        }
    }
};

// Uniform panels over [a, b].
inline PanelGrid uniform_panels(double a, double b, std::size_t n) {
    if (!(b > a) || n == 0)
        throw std::invalid_argument("uniform_panels: bad interval");
    PanelGrid g;
    g.edges.resize(n + 1);
    for (std::size_t i = 0; i <= n; ++i)
        g.edges[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n);
    g.edges.front() = a;
    g.edges.back() = b;
    return g;
}

} // namespace oscdecay
