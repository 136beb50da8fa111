#pragma once

#include <vector>

#include "tmcompose/mat2.hpp"

namespace tmc {

// Truncated jet of a scalar function at a point: the list of derivative
// values [g, g', g'', ...] (not Taylor coefficients, i.e. not divided by n!).
// Binary operations truncate to the smaller order.
class Jet {
public:
    Jet() : d_(1, Complex{0.0}) {}
    explicit Jet(std::vector<Complex> derivative_values);
    static Jet zeros(int order);
    static Jet constant(Complex value, int order);

    int order() const { return static_cast<int>(d_.size()) - 1; }
    Complex operator[](int j) const;
    const std::vector<Complex>& derivatives() const { return d_; }

    Jet operator+(const Jet& o) const;
    Jet operator-(const Jet& o) const;
    Jet operator*(const Jet& o) const;  // Leibniz product
    Jet scaled(Complex s) const;

    // Drops to the jet of g'; throws JetOrderError on an order-0 jet.
    Jet differentiated() const;

    // Jet of the same function re-expanded at x0 + h. Exact when the jet's
    // Taylor polynomial represents the function; otherwise entry j carries a
    // truncation error of order h^{order-j+1}.
    Jet shifted(double h) const;

    Jet truncated(int order) const;
    Jet padded(int order) const;  // zero-extends to the requested order

private:
    std::vector<Complex> d_;
};

}  // namespace tmc
