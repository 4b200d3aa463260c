#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

namespace oscdecay::fourier::detail {

inline constexpr double two_pi = 6.283185307179586476925286766559;

// Panel edges on [0, 1] for the phase A1 u^{g1} + A2 u^{g2} + A3 u^{g3}
// (amplitudes taken by absolute value; g1, g2 < 1 <= g3). Panel length
// obeys min(h_max, 2*pi / (ppp * rate)) with the local rate checked at
// both panel ends; the first panel is sized directly from the phase
// increments because the rate of the sublinear terms diverges at u = 0.
// Returns false if the edge count would exceed max_panels; edges then
// hold the partial construction.
inline bool build_phase_panels(double A1, double A2, double A3, double g1,
                               double g2, double g3, double ppp, double h_max,
                               long long max_panels,
                               std::vector<double>& edges) {
    A1 = std::abs(A1);
    A2 = std::abs(A2);
    A3 = std::abs(A3);
    auto rate = [&](double u) {
        double r = 0.0;
        if (A1 > 0.0) r += A1 * g1 * std::pow(u, g1 - 1.0);
        if (A2 > 0.0) r += A2 * g2 * std::pow(u, g2 - 1.0);
        if (A3 > 0.0) r += A3 * g3 * std::pow(u, g3 - 1.0);
        return r;
    };

    edges.clear();
    edges.push_back(0.0);
    const double term_budget = two_pi / (3.0 * ppp);
    double first = h_max;
    if (A1 > 0.0) first = std::min(first, std::pow(term_budget / A1, 1.0 / g1));
    if (A2 > 0.0) first = std::min(first, std::pow(term_budget / A2, 1.0 / g2));
    if (A3 > 0.0) first = std::min(first, std::pow(term_budget / A3, 1.0 / g3));
    edges.push_back(std::min(first, 1.0));

    while (edges.back() < 1.0) {
        if (static_cast<long long>(edges.size()) > max_panels) return false;
        const double u = edges.back();
        double h = std::min(h_max, two_pi / (ppp * rate(u)));
        h = std::min(h, two_pi / (ppp * rate(std::min(1.0, u + h))));
        h = std::max(h, 1e-12);
        edges.push_back(std::min(1.0, u + h));
    }
    return true;
}

} // namespace oscdecay::fourier::detail
