#pragma once

#include <cstddef>
#include <vector>

namespace oscdecay {

// One monomial coeff * x^i * y^j.
struct Monomial {
    int i = 0;
    int j = 0;
    double coeff = 0.0;
};

// Sparse bivariate polynomial with exact symbolic differentiation.
// Terms are kept sorted by (i, j) with duplicates merged and zero
// coefficients dropped, so equal polynomials compare equal termwise.
class BivariatePolynomial {
public:
    BivariatePolynomial() = default;
    explicit BivariatePolynomial(std::vector<Monomial> terms);

    const std::vector<Monomial>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    int max_degree_x() const;
    int max_degree_y() const;

    double eval(double x, double y) const;

    // axis: 1 = d/dx, 2 = d/dy.
    BivariatePolynomial partial(int axis) const;

private:
    std::vector<Monomial> terms_;
};

// Dense univariate polynomial (coefficients by ascending degree) used for
// the s-sections phi_k(1, s) and their derivatives.
struct Poly1 {
    std::vector<double> coeffs;

    double eval(double s) const {
        double acc = 0.0;
        for (std::size_t k = coeffs.size(); k-- > 0;) acc = acc * s + coeffs[k];
        return acc;
    }

    Poly1 derivative() const {
        Poly1 d;
        if (coeffs.size() > 1) {
            d.coeffs.resize(coeffs.size() - 1);
            for (std::size_t k = 1; k < coeffs.size(); ++k)
                d.coeffs[k - 1] = static_cast<double>(k) * coeffs[k];
        }
        return d;
    }
};

// Restriction of p to the section x = 1, as a polynomial in y.
Poly1 section_poly(const BivariatePolynomial& p);

} // namespace oscdecay
