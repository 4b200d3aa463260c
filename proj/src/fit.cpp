#include "oscdecay/fit.hpp"

#include <cmath>
#include <stdexcept>

namespace oscdecay {

ScalingFit fit_loglog(const std::vector<std::pair<double, double>>& log_points) {
    const std::size_t n = log_points.size();
    if (n < 2) throw std::invalid_argument("fit_loglog: need at least 2 points");

    double sx = 0, sy = 0;
    for (const auto& [x, y] : log_points) {
        sx += x;
        sy += y;
    }
    const double mx = sx / static_cast<double>(n);
    const double my = sy / static_cast<double>(n);

    double sxx = 0, sxy = 0, syy = 0;
    for (const auto& [x, y] : log_points) {
        const double dx = x - mx, dy = y - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0.0) throw std::invalid_argument("fit_loglog: degenerate abscissae");

    ScalingFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    // R^2 = 1 - SS_res/SS_tot; a perfectly flat y-series counts as exact.
    if (syy == 0.0) {
        fit.r_squared = 1.0;
    } else {
        double ss_res = 0;
        for (const auto& [x, y] : log_points) {
            const double r = y - (fit.intercept + fit.slope * x);
            ss_res += r * r;
        }
        fit.r_squared = 1.0 - ss_res / syy;
    }
    fit.points = log_points;
    return fit;
}

ScalingFit fit_power_law(const std::vector<double>& x,
                         const std::vector<double>& y) {
    if (x.size() != y.size())
        throw std::invalid_argument("fit_power_law: size mismatch");
    std::vector<std::pair<double, double>> pts;
    pts.reserve(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0))
            throw std::invalid_argument("fit_power_law: nonpositive sample");
        pts.emplace_back(std::log(x[i]), std::log(y[i]));
    }
    return fit_loglog(pts);
}

} // namespace oscdecay
