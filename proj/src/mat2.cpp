#include "tmcompose/mat2.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace tmc {

Mat2C mat2_identity() { return {1.0, 0.0, 0.0, 1.0}; }

Mat2C mat2_zero() { return {0.0, 0.0, 0.0, 0.0}; }

Complex det(const Mat2C& m) { return m.a11 * m.a22 - m.a12 * m.a21; }

Complex trace(const Mat2C& m) { return m.a11 + m.a22; }

Mat2C conjugate_transpose(const Mat2C& m) {
    using std::conj;
    return {conj(m.a11), conj(m.a21), conj(m.a12), conj(m.a22)};
}

Mat2C commutator(const Mat2C& a, const Mat2C& b) { return a * b - b * a; }

double max_abs_norm(const Mat2C& m) {
    return std::max(std::max(std::abs(m.a11), std::abs(m.a12)),
                    std::max(std::abs(m.a21), std::abs(m.a22)));
}

double max_abs_diff(const Mat2C& a, const Mat2C& b) { return max_abs_norm(a - b); }

Mat2C inverse_unimodular(const Mat2C& m, double tol) {
    const Complex d = det(m);
    if (std::abs(d - 1.0) > tol) {
        std::ostringstream os;
        os << "inverse_unimodular: |det - 1| = " << std::abs(d - 1.0)
           << " exceeds tolerance " << tol << " (det = " << d << ")";
        throw UnimodularityError(os.str(), d);
    }
    return {m.a22, -m.a12, -m.a21, m.a11};
}

Mat2C k_matrix(double tau) {
    const Complex em = std::exp(Complex{0.0, -2.0 * tau});
    const Complex ep = std::exp(Complex{0.0, 2.0 * tau});
    return {1.0, em, -ep, -1.0};
}

Mat2C k_matrix_dot(double tau) {
    const Complex em = std::exp(Complex{0.0, -2.0 * tau});
    const Complex ep = std::exp(Complex{0.0, 2.0 * tau});
    return {0.0, -2.0 * kI * em, -2.0 * kI * ep, 0.0};
}

Mat2C k_matrix_ddot(double tau) {
    const Complex em = std::exp(Complex{0.0, -2.0 * tau});
    const Complex ep = std::exp(Complex{0.0, 2.0 * tau});
    return {0.0, -4.0 * em, 4.0 * ep, 0.0};
}

Mat2C pauli(int i) {
    switch (i) {
        case 1:
            return {0.0, 1.0, 1.0, 0.0};
        case 2:
            return {0.0, -kI, kI, 0.0};
        case 3:
            return {1.0, 0.0, 0.0, -1.0};
        default:
            throw DomainError("pauli: index must be 1, 2 or 3");
    }
}

Mat2C exp_i_sigma3(double phi) {
    return {std::exp(Complex{0.0, phi}), 0.0, 0.0, std::exp(Complex{0.0, -phi})};
}

}  // namespace tmc
