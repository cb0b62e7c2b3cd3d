#pragma once

#include <cstddef>
#include <vector>

namespace layerlab {

/// Dense univariate polynomial, ascending coefficients. Used to evaluate the
/// preset initial data and their nested endpoint derivatives exactly, so the
/// compatibility residuals carry no stencil noise.
class Poly {
public:
    Poly() = default;
    explicit Poly(std::vector<double> coeffs) : c_(std::move(coeffs)) { trim(); }
    static Poly constant(double v) { return Poly({v}); }
    /// x^k
    static Poly monomial(std::size_t k, double coeff = 1.0);

    const std::vector<double>& coeffs() const { return c_; }
    std::size_t degree() const { return c_.empty() ? 0 : c_.size() - 1; }
    bool zero() const { return c_.empty(); }

    double eval(double x) const;
    Poly deriv() const;
    Poly deriv(unsigned order) const;
    /// p(1 - y) as a polynomial in y.
    Poly reflect() const;

    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator*(const Poly& o) const;
    Poly operator*(double s) const;

private:
    void trim();
    std::vector<double> c_;
};

}  // namespace layerlab
