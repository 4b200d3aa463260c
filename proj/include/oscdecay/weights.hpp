#pragma once

#include <stdexcept>

namespace oscdecay {

// Anisotropy data (alpha1, alpha2, m) for the dilation
// t . x = (t^alpha1 x1, t^alpha2 x2) together with the derived exponents
//   beta  = 2(m - alpha1 - alpha2)   (homogeneity degree of the Hessian form)
//   gamma = m / (alpha1 + alpha2)    (decay exponent is -1/gamma).
// alpha1 = alpha2 is structurally excluded; the weight inequality
// m >= 3(alpha1 + alpha2) is a reportable hypothesis, not a constructor
// error, so degenerate configurations can be fed to the checkers.
struct Weights {
    double alpha1;
    double alpha2;
    double m;
    double beta;
    double gamma;

    Weights(double a1, double a2, double m_) : alpha1(a1), alpha2(a2), m(m_) {
        if (!(alpha1 > 0.0) || !(alpha2 > 0.0) || !(m > 0.0))
            throw std::invalid_argument("Weights: alpha1, alpha2, m must be positive");
        if (alpha1 == alpha2)
            throw std::invalid_argument("Weights: alpha1 == alpha2 is not admissible");
        beta = 2.0 * (m - alpha1 - alpha2);
        gamma = m / (alpha1 + alpha2);
    }

    double alpha_sum() const { return alpha1 + alpha2; }

    // The weight part of H2: m >= 3(alpha1 + alpha2), i.e. gamma >= 3.
    bool weight_inequality_ok() const { return m >= 3.0 * (alpha1 + alpha2); }
};

} // namespace oscdecay
