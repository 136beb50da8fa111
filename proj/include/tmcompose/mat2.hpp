#pragma once

#include <complex>

#include "tmcompose/errors.hpp"

namespace tmc {

using Complex = std::complex<double>;

inline constexpr Complex kI{0.0, 1.0};

// 2x2 matrix over an arbitrary coefficient ring T. The scattering code uses
// T = Complex; the series machinery instantiates it over truncated
// polynomials as well, so only +, -, * of T are assumed here.
template <class T>
struct BasicMat2 {
    T a11{}, a12{}, a21{}, a22{};

    friend BasicMat2 operator+(const BasicMat2& a, const BasicMat2& b) {
        return {a.a11 + b.a11, a.a12 + b.a12, a.a21 + b.a21, a.a22 + b.a22};
    }
    friend BasicMat2 operator-(const BasicMat2& a, const BasicMat2& b) {
        return {a.a11 - b.a11, a.a12 - b.a12, a.a21 - b.a21, a.a22 - b.a22};
    }
    friend BasicMat2 operator*(const BasicMat2& a, const BasicMat2& b) {
        return {a.a11 * b.a11 + a.a12 * b.a21, a.a11 * b.a12 + a.a12 * b.a22,
                a.a21 * b.a11 + a.a22 * b.a21, a.a21 * b.a12 + a.a22 * b.a22};
    }
    BasicMat2 operator-() const { return {-a11, -a12, -a21, -a22}; }

    template <class S>
    friend BasicMat2 operator*(const S& s, const BasicMat2& m) {
        return {s * m.a11, s * m.a12, s * m.a21, s * m.a22};
    }

    BasicMat2 transpose() const { return {a11, a21, a12, a22}; }
};

using Mat2C = BasicMat2<Complex>;

Mat2C mat2_identity();
Mat2C mat2_zero();

Complex det(const Mat2C& m);
Complex trace(const Mat2C& m);
Mat2C conjugate_transpose(const Mat2C& m);
Mat2C commutator(const Mat2C& a, const Mat2C& b);

// Error norm used throughout: max absolute value over the four entries.
double max_abs_norm(const Mat2C& m);
double max_abs_diff(const Mat2C& a, const Mat2C& b);

// Adjugate inverse, exact for det = 1. Throws UnimodularityError (carrying
// the offending determinant) when |det - 1| exceeds the tolerance.
Mat2C inverse_unimodular(const Mat2C& m, double tol = 1e-8);

// K(tau) = [[1, e^{-2i tau}], [-e^{2i tau}, -1]], the nilpotent generator of
// the transfer-matrix evolution in the clock variable tau = k x, together
// with its first two tau-derivatives in closed form.
Mat2C k_matrix(double tau);
Mat2C k_matrix_dot(double tau);
Mat2C k_matrix_ddot(double tau);

// Pauli matrix sigma_i, i in {1, 2, 3}.
Mat2C pauli(int i);

// diag(e^{i phi}, e^{-i phi}) = e^{i phi sigma_3}.
Mat2C exp_i_sigma3(double phi);

}  // namespace tmc
