#include "tmcompose/jet.hpp"

#include <algorithm>

#include "tmcompose/errors.hpp"

namespace tmc {

namespace {

double binomial(int n, int j) {
    double b = 1.0;
    for (int i = 0; i < j; ++i) b = b * static_cast<double>(n - i) / static_cast<double>(i + 1);
    return b;
}

}  // namespace

Jet::Jet(std::vector<Complex> derivative_values) : d_(std::move(derivative_values)) {
    if (d_.empty()) throw JetOrderError("Jet: needs at least the value entry");
}

Jet Jet::zeros(int order) {
    if (order < 0) throw JetOrderError("Jet::zeros: negative order");
    return Jet(std::vector<Complex>(static_cast<size_t>(order) + 1, Complex{0.0}));
}

Jet Jet::constant(Complex value, int order) {
    Jet j = zeros(order);
    j.d_[0] = value;
    return j;
}

Complex Jet::operator[](int j) const {
    if (j < 0 || j > order()) throw JetOrderError("Jet: derivative index out of range");
    return d_[static_cast<size_t>(j)];
}

Jet Jet::operator+(const Jet& o) const {
    const int n = std::min(order(), o.order());
    std::vector<Complex> r(static_cast<size_t>(n) + 1);
    for (int j = 0; j <= n; ++j) r[j] = d_[j] + o.d_[j];
    return Jet(std::move(r));
}

Jet Jet::operator-(const Jet& o) const {
    const int n = std::min(order(), o.order());
    std::vector<Complex> r(static_cast<size_t>(n) + 1);
    for (int j = 0; j <= n; ++j) r[j] = d_[j] - o.d_[j];
    return Jet(std::move(r));
}

Jet Jet::operator*(const Jet& o) const {
    const int n = std::min(order(), o.order());
    std::vector<Complex> r(static_cast<size_t>(n) + 1, Complex{0.0});
    for (int j = 0; j <= n; ++j)
        for (int m = 0; m <= j; ++m) r[j] += binomial(j, m) * d_[m] * o.d_[j - m];
    return Jet(std::move(r));
}

Jet Jet::scaled(Complex s) const {
    std::vector<Complex> r = d_;
    for (auto& v : r) v *= s;
    return Jet(std::move(r));
}

Jet Jet::differentiated() const {
    if (order() == 0) throw JetOrderError("Jet::differentiated: order underflow");
    return Jet(std::vector<Complex>(d_.begin() + 1, d_.end()));
}

Jet Jet::shifted(double h) const {
    const int n = order();
    std::vector<Complex> r(static_cast<size_t>(n) + 1, Complex{0.0});
    for (int j = 0; j <= n; ++j) {
        Complex acc{0.0};
        double hm_over_m = 1.0;  // h^m / m!
        for (int m = 0; j + m <= n; ++m) {
            acc += d_[j + m] * hm_over_m;
            hm_over_m *= h / static_cast<double>(m + 1);
        }
        r[j] = acc;
    }
    return Jet(std::move(r));
}

Jet Jet::truncated(int order) const {
    if (order < 0 || order > this->order())
        throw JetOrderError("Jet::truncated: order out of range");
    return Jet(std::vector<Complex>(d_.begin(), d_.begin() + order + 1));
}

Jet Jet::padded(int order) const {
    if (order < this->order()) return truncated(order);
    std::vector<Complex> r = d_;
    r.resize(static_cast<size_t>(order) + 1, Complex{0.0});
    return Jet(std::move(r));
}

}  // namespace tmc
