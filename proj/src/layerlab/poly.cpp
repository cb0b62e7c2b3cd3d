#include "layerlab/poly.hpp"

#include <algorithm>
#include <cmath>

namespace layerlab {

Poly Poly::monomial(std::size_t k, double coeff) {
    std::vector<double> c(k + 1, 0.0);
    c[k] = coeff;
    return Poly(std::move(c));
}

double Poly::eval(double x) const {
    double r = 0.0;
    for (std::size_t i = c_.size(); i-- > 0;) r = r * x + c_[i];
    return r;
}

Poly Poly::deriv() const {
    if (c_.size() <= 1) return Poly();
    std::vector<double> d(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * static_cast<double>(i);
    return Poly(std::move(d));
}

Poly Poly::deriv(unsigned order) const {
    Poly p = *this;
    for (unsigned k = 0; k < order; ++k) p = p.deriv();
    return p;
}

Poly Poly::reflect() const {
    // p(1 - y) via the factored form of each monomial: (1-y)^k expanded by
    // the binomial recurrence.
    Poly r;
    Poly one_minus_y = Poly({1.0, -1.0});
    Poly power = Poly::constant(1.0);
    for (std::size_t k = 0; k < c_.size(); ++k) {
        r = r + power * c_[k];
        power = power * one_minus_y;
    }
    return r;
}

Poly Poly::operator+(const Poly& o) const {
    std::vector<double> r(std::max(c_.size(), o.c_.size()), 0.0);
    for (std::size_t i = 0; i < c_.size(); ++i) r[i] += c_[i];
    for (std::size_t i = 0; i < o.c_.size(); ++i) r[i] += o.c_[i];
    return Poly(std::move(r));
}

Poly Poly::operator-(const Poly& o) const {
    std::vector<double> r(std::max(c_.size(), o.c_.size()), 0.0);
    for (std::size_t i = 0; i < c_.size(); ++i) r[i] += c_[i];
    for (std::size_t i = 0; i < o.c_.size(); ++i) r[i] -= o.c_[i];
    return Poly(std::move(r));
}

Poly Poly::operator*(const Poly& o) const {
    if (c_.empty() || o.c_.empty()) return Poly();
    std::vector<double> r(c_.size() + o.c_.size() - 1, 0.0);
    for (std::size_t i = 0; i < c_.size(); ++i)
        for (std::size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
    return Poly(std::move(r));
}

Poly Poly::operator*(double s) const {
    std::vector<double> r = c_;
    for (double& v : r) v *= s;
    return Poly(std::move(r));
}

void Poly::trim() {
    while (!c_.empty() && c_.back() == 0.0) c_.pop_back();
}

}  // namespace layerlab
