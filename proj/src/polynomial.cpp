#include "oscdecay/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace oscdecay {

BivariatePolynomial::BivariatePolynomial(std::vector<Monomial> terms)
    : terms_(std::move(terms)) {
    for (const auto& t : terms_) {
        if (t.i < 0 || t.j < 0)
            throw std::invalid_argument("BivariatePolynomial: negative exponent");
    }
    std::sort(terms_.begin(), terms_.end(), [](const Monomial& a, const Monomial& b) {
        return a.i != b.i ? a.i < b.i : a.j < b.j;
    });
    std::vector<Monomial> merged;
    for (const auto& t : terms_) {
        if (!merged.empty() && merged.back().i == t.i && merged.back().j == t.j)
            merged.back().coeff += t.coeff;
        else
            merged.push_back(t);
    }
    std::erase_if(merged, [](const Monomial& t) { return t.coeff == 0.0; });
    terms_ = std::move(merged);
}

int BivariatePolynomial::max_degree_x() const {
    int d = 0;
    for (const auto& t : terms_) d = std::max(d, t.i);
    return d;
}

int BivariatePolynomial::max_degree_y() const {
    int d = 0;
    for (const auto& t : terms_) d = std::max(d, t.j);
    return d;
}

double BivariatePolynomial::eval(double x, double y) const {
    if (terms_.empty()) return 0.0;
    const int dx = max_degree_x(), dy = max_degree_y();
    if (dx < 32 && dy < 32) {
        // Power tables up to the max degree; typical degrees are small.
        double px[32], py[32];
        px[0] = 1.0;
        for (int k = 1; k <= dx; ++k) px[k] = px[k - 1] * x;
        py[0] = 1.0;
        for (int k = 1; k <= dy; ++k) py[k] = py[k - 1] * y;
        double acc = 0.0;
        for (const auto& t : terms_) acc += t.coeff * px[t.i] * py[t.j];
        return acc;
    }
    double acc = 0.0;
    for (const auto& t : terms_)
        acc += t.coeff * std::pow(x, t.i) * std::pow(y, t.j);
    return acc;
}

BivariatePolynomial BivariatePolynomial::partial(int axis) const {
    if (axis != 1 && axis != 2)
        throw std::invalid_argument("partial: axis must be 1 or 2");
    std::vector<Monomial> out;
    out.reserve(terms_.size());
    for (const auto& t : terms_) {
        if (axis == 1) {
            if (t.i > 0) out.push_back({t.i - 1, t.j, t.coeff * t.i});
        } else {
            if (t.j > 0) out.push_back({t.i, t.j - 1, t.coeff * t.j});
        }
    }
    return BivariatePolynomial(std::move(out));
}

Poly1 section_poly(const BivariatePolynomial& p) {
    Poly1 q;
    q.coeffs.assign(static_cast<std::size_t>(p.max_degree_y()) + 1, 0.0);
    for (const auto& t : p.terms()) q.coeffs[t.j] += t.coeff;
    while (q.coeffs.size() > 1 && q.coeffs.back() == 0.0) q.coeffs.pop_back();
    if (q.coeffs.size() == 1 && q.coeffs[0] == 0.0) q.coeffs.clear();
    return q;
}

} // namespace oscdecay
