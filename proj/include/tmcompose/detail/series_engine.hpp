#pragma once

#include <cassert>
#include <vector>

#include "tmcompose/mat2.hpp"

namespace tmc::detail {

// The power-series machinery below is generic over the coefficient ring R.
// Two instantiations are used: R = Complex for plain series in the expansion
// parameter, and R = TruncPoly for the endpoint form, where every series
// coefficient is itself a truncated polynomial in the expansion parameter
// (the re-expansion of the left factor's jet introduces that dependence).

// Truncated polynomial in the expansion parameter, fixed degree cap.
class TruncPoly {
public:
    explicit TruncPoly(int cap) : c_(static_cast<size_t>(cap) + 1, Complex{0.0}) {}
    static TruncPoly constant(Complex v, int cap) {
        TruncPoly p(cap);
        p.c_[0] = v;
        return p;
    }
    static TruncPoly monomial(Complex v, int power, int cap) {
        TruncPoly p(cap);
        if (power <= cap) p.c_[static_cast<size_t>(power)] = v;
        return p;
    }

    int cap() const { return static_cast<int>(c_.size()) - 1; }
    Complex coeff(int i) const {
        return (i >= 0 && i <= cap()) ? c_[static_cast<size_t>(i)] : Complex{0.0};
    }

    friend TruncPoly operator+(const TruncPoly& a, const TruncPoly& b) {
        assert(a.cap() == b.cap());
        TruncPoly r = a;
        for (size_t i = 0; i < r.c_.size(); ++i) r.c_[i] += b.c_[i];
        return r;
    }
    friend TruncPoly operator-(const TruncPoly& a, const TruncPoly& b) {
        assert(a.cap() == b.cap());
        TruncPoly r = a;
        for (size_t i = 0; i < r.c_.size(); ++i) r.c_[i] -= b.c_[i];
        return r;
    }
    TruncPoly operator-() const {
        TruncPoly r = *this;
        for (auto& v : r.c_) v = -v;
        return r;
    }
    friend TruncPoly operator*(const TruncPoly& a, const TruncPoly& b) {
        assert(a.cap() == b.cap());
        TruncPoly r(a.cap());
        const int n = a.cap();
        for (int i = 0; i <= n; ++i) {
            if (a.c_[i] == Complex{0.0}) continue;
            for (int j = 0; i + j <= n; ++j) r.c_[i + j] += a.c_[i] * b.c_[j];
        }
        return r;
    }
    friend TruncPoly operator*(const Complex& s, const TruncPoly& a) {
        TruncPoly r = a;
        for (auto& v : r.c_) v *= s;
        return r;
    }
    friend TruncPoly operator*(double s, const TruncPoly& a) { return Complex{s} * a; }

private:
    std::vector<Complex> c_;
};

// --- exact polynomial helpers over R (coefficient lists, constant first) ---

template <class R>
std::vector<R> poly_derivative(const std::vector<R>& p) {
    std::vector<R> r;
    r.reserve(p.size() > 0 ? p.size() - 1 : 0);
    for (size_t j = 1; j < p.size(); ++j) r.push_back(static_cast<double>(j) * p[j]);
    return r;
}

template <class R>
std::vector<R> poly_add(const std::vector<R>& a, const std::vector<R>& b) {
    const std::vector<R>& big = a.size() >= b.size() ? a : b;
    const std::vector<R>& small = a.size() >= b.size() ? b : a;
    std::vector<R> r = big;
    for (size_t j = 0; j < small.size(); ++j) r[j] = r[j] + small[j];
    return r;
}

template <class R>
std::vector<R> poly_mul(const std::vector<R>& a, const std::vector<R>& b, const R& zero) {
    if (a.empty() || b.empty()) return {};
    std::vector<R> r(a.size() + b.size() - 1, zero);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] = r[i + j] + a[i] * b[j];
    return r;
}

inline double binomial_d(int n, int j) {
    double b = 1.0;
    for (int i = 0; i < j; ++i) b = b * static_cast<double>(n - i) / static_cast<double>(i + 1);
    return b;
}

// --- the derivative recursion for the auxiliary pair (p_n, q_n) ---
//
// With D = [[d/dtau, f], [1, d/dtau]] acting on (p, q) from (0, 1), the
// scalar coefficients are d_n^{+/-} = p_{n+1}(0) +/- i q_{n+1}(0). The
// recursion runs on exact polynomials built from the jet of f at 0, so the
// results are the exact derivative-polynomial expressions in f's entries.
template <class R>
void d_recursion_core(const std::vector<R>& f_derivs, int n_max, const R& zero,
                      const R& one, std::vector<R>& d_plus, std::vector<R>& d_minus) {
    // Taylor coefficients of f from derivative values.
    std::vector<R> f;
    f.reserve(f_derivs.size());
    double fact = 1.0;
    for (size_t j = 0; j < f_derivs.size(); ++j) {
        f.push_back((1.0 / fact) * f_derivs[j]);
        fact *= static_cast<double>(j + 1);
    }

    d_plus.clear();
    d_minus.clear();
    std::vector<R> p;           // p_1 = 0
    std::vector<R> q{one};      // q_1 = 1
    for (int n = 0; n <= n_max; ++n) {
        const R p0 = p.empty() ? zero : p[0];
        const R q0 = q.empty() ? zero : q[0];
        d_plus.push_back(p0 + kI * q0);
        d_minus.push_back(p0 + (-kI) * q0);
        if (n == n_max) break;
        std::vector<R> pn = poly_add(poly_derivative(p), poly_mul(f, q, zero));
        std::vector<R> qn = poly_add(p, poly_derivative(q));
        p = std::move(pn);
        q = std::move(qn);
    }
}

// Series coefficients C_0..C_{n_max} of U in the eps^n/n! convention:
// C_0 = 1, C_{n+1} = 1/2 [[d+_n - i d+_{n+1}, d-_n - i d-_{n+1}],
//                         [d+_n + i d+_{n+1}, d-_n + i d-_{n+1}]].
template <class R>
std::vector<BasicMat2<R>> c_matrices_core(const std::vector<R>& f_derivs, int n_max,
                                          const R& zero, const R& one) {
    std::vector<R> dp, dm;
    d_recursion_core(f_derivs, n_max, zero, one, dp, dm);
    std::vector<BasicMat2<R>> c;
    c.reserve(static_cast<size_t>(n_max) + 1);
    c.push_back(BasicMat2<R>{one, zero, zero, one});
    for (int n = 0; n + 1 <= n_max; ++n) {
        const R ap = dp[n] + (-kI) * dp[n + 1];
        const R am = dm[n] + (-kI) * dm[n + 1];
        const R bp = dp[n] + kI * dp[n + 1];
        const R bm = dm[n] + kI * dm[n + 1];
        c.push_back(BasicMat2<R>{0.5 * ap, 0.5 * am, 0.5 * bp, 0.5 * bm});
    }
    return c;
}

// Adjugate per coefficient. For the unimodular U series this is the inverse
// series: sigma2 C_n^T sigma2 = adj(C_n).
template <class R>
std::vector<BasicMat2<R>> series_adjugate(const std::vector<BasicMat2<R>>& u) {
    std::vector<BasicMat2<R>> r;
    r.reserve(u.size());
    for (const auto& m : u) r.push_back(BasicMat2<R>{m.a22, -m.a12, -m.a21, m.a11});
    return r;
}

// Product of two series in the eps^n/n! convention (binomial convolution),
// truncated to the shorter length.
template <class R>
std::vector<BasicMat2<R>> multiply_series_core(const std::vector<BasicMat2<R>>& a,
                                               const std::vector<BasicMat2<R>>& b) {
    const size_t n = std::min(a.size(), b.size());
    std::vector<BasicMat2<R>> r;
    r.reserve(n);
    for (size_t m = 0; m < n; ++m) {
        BasicMat2<R> acc = binomial_d(static_cast<int>(m), 0) * (a[0] * b[m]);
        for (size_t j = 1; j <= m; ++j)
            acc = acc + binomial_d(static_cast<int>(m), static_cast<int>(j)) * (a[j] * b[m - j]);
        r.push_back(acc);
    }
    return r;
}

// Series of e^{i eps sigma3}: coefficient n is (i sigma3)^n.
template <class R>
std::vector<BasicMat2<R>> exp_i_sigma3_series_core(int n_max, const R& zero, const R& one) {
    std::vector<BasicMat2<R>> r;
    r.reserve(static_cast<size_t>(n_max) + 1);
    Complex up{1.0}, dn{1.0};
    for (int n = 0; n <= n_max; ++n) {
        r.push_back(BasicMat2<R>{up * one, zero, zero, dn * one});
        up *= kI;
        dn *= -kI;
    }
    return r;
}

// Coefficients S0^(n) of the overlap correction S = U2^{-1} U U1^{-1}
// e^{i eps sigma3}, where U is built from f = f1 + f2 + 1 and U_j from f_j,
// all series in the eps^n/n! convention. f1, f2 are derivative values of
// 2 w_j - 1 at tau = 0.
template <class R>
std::vector<BasicMat2<R>> s_series_core(const std::vector<R>& f1, const std::vector<R>& f2,
                                        int n_max, const R& zero, const R& one) {
    std::vector<R> f;
    f.reserve(f1.size());
    for (size_t j = 0; j < std::min(f1.size(), f2.size()); ++j) f.push_back(f1[j] + f2[j]);
    f[0] = f[0] + one;

    const auto u = c_matrices_core(f, n_max, zero, one);
    const auto u1_inv = series_adjugate(c_matrices_core(f1, n_max, zero, one));
    const auto u2_inv = series_adjugate(c_matrices_core(f2, n_max, zero, one));
    const auto expo = exp_i_sigma3_series_core(n_max, zero, one);

    auto s = multiply_series_core(u2_inv, u);
    s = multiply_series_core(s, u1_inv);
    s = multiply_series_core(s, expo);
    return s;
}

// Taylor shift of derivative values by a ring element h:
// out[j] = sum_m in[j+m] h^m / m!.
template <class R>
std::vector<R> taylor_shift(const std::vector<R>& derivs, const R& h, const R& one) {
    const int n = static_cast<int>(derivs.size()) - 1;
    std::vector<R> out;
    out.reserve(derivs.size());
    for (int j = 0; j <= n; ++j) {
        R acc = derivs[j] * one;
        R hp = one;
        double fact = 1.0;
        for (int m = 1; j + m <= n; ++m) {
            hp = hp * h;
            fact *= static_cast<double>(m);
            acc = acc + (1.0 / fact) * (derivs[j + m] * hp);
        }
        out.push_back(acc);
    }
    return out;
}

}  // namespace tmc::detail
