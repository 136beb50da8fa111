#pragma once

#include <vector>

#include "tmcompose/jet.hpp"
#include "tmcompose/mat2.hpp"

namespace tmc {

// Power-series route to the overlap correction S, built from truncated jets
// rather than from the closed-form endpoint expressions in composition.hpp.
// The two routes are independent implementations of the same coefficients;
// their agreement is asserted by the test suite.
//
// Conventions: series are lists of matrix coefficients A_n with
// F(eps) = sum_n A_n eps^n / n!. Jets carry derivative values of
// f(tau) = 2 w(tau) - 1 at tau = 0, where w(tau) = v(tau/k) / (2 k^2).

struct DCoefficients {
    std::vector<Complex> plus;
    std::vector<Complex> minus;
};

// Scalar coefficients d_n^{+/-} of the series solutions u_{+/-} of
// u'' - f u = 0 with u(0) = 1, u'(0) = +/- i:
// u(eps) = 1 + sum_{n>=0} eps^{n+1} d_n / (n+1)!.
// Requires f.order() >= n_max - 1.
DCoefficients d_recursion(const Jet& f, int n_max);

// Coefficients C_0..C_{n_max} of U(eps), the transfer-matrix factor in the
// rotating frame, assembled from the d coefficients.
std::vector<Mat2C> c_matrices(const Jet& f, int n_max);

// Same list, packaged under the role it plays downstream.
std::vector<Mat2C> u_series(const Jet& f, int n_max);

// Inverse series: coefficient-wise sigma2 C_n^T sigma2 (the adjugate).
std::vector<Mat2C> u_inverse_series(const std::vector<Mat2C>& u);

// Product of two series in the eps^n/n! convention.
std::vector<Mat2C> multiply_series(const std::vector<Mat2C>& a, const std::vector<Mat2C>& b);

std::vector<Mat2C> exp_i_sigma3_series(int n_max);

// S0^(n) for n = 0..n_max from the jets of f_j = 2 w_j - 1 at tau = 0
// (the combined potential uses f = f1 + f2 + 1). Requires jet orders
// >= n_max - 1.
std::vector<Mat2C> s_series_from_jets(const Jet& f1, const Jet& f2, int n_max = 8);

// Endpoint form: coefficients B_n of S = sum_n B_n ell^n in terms of the
// one-sided jets of v_1 at the right end of the overlap (x = ell) and of
// v_2 at its left end (x = 0), for wavenumber k. Internally converts the
// v-jets to f-jets, re-expands the v_1 jet across the overlap, and collects
// powers of the expansion parameter exactly (the re-expansion is carried by
// polynomial-valued series coefficients). Coefficients are exact through
// order v_jet.order() + 3; jets must have order >= n_max - 3.
std::vector<Mat2C> s_series_endpoint_form(const Jet& v1_jet_at_ell, const Jet& v2_jet_at_0,
                                          double k, int n_max = 8);

}  // namespace tmc
