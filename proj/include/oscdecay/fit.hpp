#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace oscdecay {

// Log-log least-squares result; the workhorse behind every empirical
// exponent check (decay, Knapp, delta-box, degeneracy orders).
struct ScalingFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    // (log abscissa, log value) pairs actually used by the regression.
    std::vector<std::pair<double, double>> points;
};

// Ordinary least squares on already-logged samples. Throws
// std::invalid_argument with fewer than two points.
ScalingFit fit_loglog(const std::vector<std::pair<double, double>>& log_points);

// Convenience: takes positive (x, y) samples and logs them.
ScalingFit fit_power_law(const std::vector<double>& x,
                         const std::vector<double>& y);

// Raised when an empirical scaling fit misses its prediction; carries the
// raw fit so callers can report the samples.
class DegenerateFitError : public std::runtime_error {
public:
    DegenerateFitError(const std::string& what, ScalingFit fit)
        : std::runtime_error(what), fit(std::move(fit)) {}
    ScalingFit fit;
};

} // namespace oscdecay
