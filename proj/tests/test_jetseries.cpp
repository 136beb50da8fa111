#include <doctest.h>

#include <cmath>
#include <random>

#include "tmcompose/composition.hpp"
#include "tmcompose/errors.hpp"
#include "tmcompose/jetseries.hpp"
#include "tmcompose/potential.hpp"
#include "tmcompose/propagator.hpp"

using namespace tmc;

namespace {

std::mt19937_64 make_rng(uint64_t seed) { return std::mt19937_64{seed}; }

Complex random_complex(std::mt19937_64& rng, double scale = 1.0) {
    std::uniform_real_distribution<double> u(-scale, scale);
    return {u(rng), u(rng)};
}

Jet random_jet(std::mt19937_64& rng, int order, double scale = 1.0) {
    std::vector<Complex> d(static_cast<size_t>(order) + 1);
    for (auto& v : d) v = random_complex(rng, scale);
    return Jet(std::move(d));
}

Mat2C eval_series(const std::vector<Mat2C>& coeffs, double eps) {
    Mat2C acc = mat2_zero();
    double p = 1.0, fact = 1.0;
    for (size_t n = 0; n < coeffs.size(); ++n) {
        acc = acc + (p / fact) * coeffs[n];
        p *= eps;
        fact *= static_cast<double>(n + 1);
    }
    return acc;
}

}  // namespace

TEST_CASE("d coefficients reproduce the derivative-polynomial table") {
    auto rng = make_rng(101);
    for (int trial = 0; trial < 20; ++trial) {
        const Jet fj = random_jet(rng, 5);
        const auto d = d_recursion(fj, 6);
        const Complex f = fj[0], f1 = fj[1], f2 = fj[2], f3 = fj[3], f4 = fj[4], f5 = fj[5];

        for (int sign : {+1, -1}) {
            const auto& dd = sign > 0 ? d.plus : d.minus;
            const Complex si = static_cast<double>(sign) * kI;
            CHECK(std::abs(dd[0] - si) < 1e-12);
            CHECK(std::abs(dd[1] - f) < 1e-12);
            CHECK(std::abs(dd[2] - (f1 + si * f)) < 1e-12);
            CHECK(std::abs(dd[3] - (f2 + f * f + 2.0 * si * f1)) < 1e-12);
            CHECK(std::abs(dd[4] - (f3 + 4.0 * f * f1 + si * (3.0 * f2 + f * f))) < 1e-12);
            CHECK(std::abs(dd[5] - (f4 + 4.0 * f1 * f1 + 7.0 * f * f2 + f * f * f +
                                    si * (4.0 * f3 + 6.0 * f * f1))) < 1e-12);
            CHECK(std::abs(dd[6] - (f5 + 15.0 * f1 * f2 + 11.0 * f * f3 + 9.0 * f * f * f1 +
                                    si * (5.0 * f4 + 10.0 * f1 * f1 + 13.0 * f * f2 +
                                          f * f * f))) < 1e-12);
        }
    }
    CHECK_THROWS_AS(d_recursion(Jet({1.0, 2.0}), 6), JetOrderError);
}

TEST_CASE("leading C matrices match their closed forms") {
    auto rng = make_rng(103);
    const Mat2C k0 = k_matrix(0.0);
    for (int trial = 0; trial < 10; ++trial) {
        const Jet fj = random_jet(rng, 5);
        const auto c = c_matrices(fj, 6);
        const Complex f = fj[0], f1 = fj[1];

        CHECK(max_abs_diff(c[0], mat2_identity()) < 1e-14);
        const Mat2C c1_ref = kI * (pauli(3) - (0.5 * (f + 1.0)) * k0);
        CHECK(max_abs_diff(c[1], c1_ref) < 1e-12);
        const Mat2C c2_ref = f * mat2_identity() - (0.5 * kI * f1) * k0;
        CHECK(max_abs_diff(c[2], c2_ref) < 1e-12);
    }
}

TEST_CASE("free case: U collapses to the rotation series") {
    // w = 0 means f = -1 and U(eps) = e^{i eps sigma3}
    const Jet f = Jet::constant(-1.0, 7);
    const auto u = u_series(f, 8);
    const auto expo = exp_i_sigma3_series(8);
    for (size_t n = 0; n < u.size(); ++n) CHECK(max_abs_diff(u[n], expo[n]) < 1e-12);
}

TEST_CASE("U series matches the integrated rotating-frame matrix") {
    // v = z e^{iKx}: the f-jet at 0 is available to any order in closed form
    const Complex z{0.35, -0.2};
    const double K = 1.4, k = 0.9;
    const int n_max = 8;
    std::vector<Complex> fd(n_max);
    double kp = k * k;
    for (int j = 0; j < n_max; ++j) {
        fd[j] = z * std::pow(kI * K / k, j) / kp;  // d^j/dtau^j of v(tau/k)/k^2
    }
    fd[0] -= 1.0;
    const Jet fjet{fd};
    const auto u = u_series(fjet, n_max);

    const Potential v{{PotentialPiece::complex_exponential({0.0, 3.0}, z, K)}};
    for (double eps : {0.02, 0.05, 0.1}) {
        const Mat2C m = transfer_matrix(v, k, 0.0, eps / k, {1e-13, 1e-15}).matrix;
        const Mat2C u_ref = exp_i_sigma3(eps) * m;
        const Mat2C u_val = eval_series(u, eps);
        CHECK(max_abs_diff(u_val, u_ref) < 5e-12 + std::pow(eps, n_max + 1));
    }
}

TEST_CASE("inverse series really inverts") {
    auto rng = make_rng(107);
    const Jet f = random_jet(rng, 7);
    const auto u = u_series(f, 8);
    const auto uinv = u_inverse_series(u);
    const auto prod = multiply_series(u, uinv);
    CHECK(max_abs_diff(prod[0], mat2_identity()) < 1e-12);
    for (size_t n = 1; n < prod.size(); ++n)
        CHECK(max_abs_norm(prod[n]) < 1e-10);

    // series of the identity is its own inverse
    std::vector<Mat2C> id{mat2_identity()};
    CHECK(max_abs_diff(u_inverse_series(id)[0], mat2_identity()) < 1e-15);

    // free case: inverse of e^{i eps sigma3} is the oppositely rotating series
    const auto expo = exp_i_sigma3_series(6);
    const auto expo_inv = u_inverse_series(expo);
    for (size_t n = 0; n < expo.size(); ++n) {
        Mat2C flipped = expo[n];
        std::swap(flipped.a11, flipped.a22);
        CHECK(max_abs_diff(expo_inv[n], flipped) < 1e-14);
    }
}

TEST_CASE("u rows solve u'' = f u term by term") {
    auto rng = make_rng(109);
    const int n_max = 8;
    const Jet f = random_jet(rng, n_max - 1);
    const auto d = d_recursion(f, n_max);
    for (int sign : {+1, -1}) {
        const auto& dd = sign > 0 ? d.plus : d.minus;
        std::vector<Complex> uvals(dd.size() + 1);
        uvals[0] = 1.0;
        for (size_t j = 0; j < dd.size(); ++j) uvals[j + 1] = dd[j];
        const Jet u{uvals};
        CHECK(std::abs(u[0] - 1.0) < 1e-15);
        CHECK(std::abs(u[1] - static_cast<double>(sign) * kI) < 1e-15);
        const Jet residual = u.differentiated().differentiated() - f * u;
        for (int j = 0; j <= residual.order(); ++j) CHECK(std::abs(residual[j]) < 1e-10);
    }
}

TEST_CASE("projection split reassembles every series coefficient") {
    const Mat2C delta{1.0, 1.0, 0.0, 0.0};
    const Mat2C gamma{1.0, -1.0, 0.0, 0.0};
    auto rng = make_rng(113);
    const auto u = u_series(random_jet(rng, 7), 8);
    for (const Mat2C& c : u) {
        const Mat2C da = delta * c, ga = gamma * c;
        const Mat2C rebuilt = 0.5 * ((da + ga) + pauli(1) * (da - ga));
        CHECK(max_abs_diff(rebuilt, c) < 1e-13);
    }
}

TEST_CASE("H-transpose symmetry") {
    auto rng = make_rng(127);
    for (int trial = 0; trial < 10; ++trial) {
        const Complex w = random_complex(rng, 2.0);
        const Mat2C h = w * k_matrix(0.0) - pauli(3);
        CHECK(max_abs_diff(h.transpose(), pauli(3) * h * pauli(3)) < 1e-14);
    }
}

TEST_CASE("overlap-correction coefficients from jets match the printed forms") {
    auto rng = make_rng(131);
    const Mat2C k0 = k_matrix(0.0);
    const Mat2C s1 = pauli(1);
    const Mat2C s2 = pauli(2);
    for (int trial = 0; trial < 30; ++trial) {
        const Jet w1j = random_jet(rng, 7, 0.8);
        const Jet w2j = random_jet(rng, 7, 0.8);
        // f = 2w - 1
        Jet f1 = w1j.scaled(2.0);
        Jet f2 = w2j.scaled(2.0);
        f1 = f1 - Jet::constant(1.0, f1.order());
        f2 = f2 - Jet::constant(1.0, f2.order());

        const auto s = s_series_from_jets(f1, f2, 6);
        const Complex w1 = w1j[0], w1d = w1j[1], w1dd = w1j[2], w1d3 = w1j[3];
        const Complex w2 = w2j[0], w2d = w2j[1], w2dd = w2j[2], w2d3 = w2j[3];
        (void)w1d3;

        CHECK(max_abs_diff(s[0], mat2_identity()) < 1e-12);
        CHECK(max_abs_norm(s[1]) < 1e-12);
        CHECK(max_abs_norm(s[2]) < 1e-12);
        CHECK(max_abs_diff(s[3], (-4.0 * kI * w1 * w2) * k0) < 1e-12);

        const Mat2C s4 = (-16.0 * w1 * w2) * s1 +
                         (-4.0 * kI * (w1 * w2d + 3.0 * w1d * w2)) * k0;
        CHECK(max_abs_diff(s[4], s4) < 1e-12);

        const Mat2C s5 =
            (-4.0 * (16.0 * w1d * w2 + 6.0 * w1 * w2d)) * s1 + (-32.0 * w1 * w2) * s2 +
            (-4.0 * kI *
             (4.0 * w1 * w2 * (2.0 * w1 + 2.0 * w2 - 1.0) + w1 * w2dd + 6.0 * w1dd * w2 +
              4.0 * w1d * w2d)) *
                k0;
        CHECK(max_abs_diff(s[5], s5) < 1e-11);

        const Mat2C s6 =
            (-8.0 * (16.0 * w1 * w2 * (2.0 * w1 + w2 - 1.0) + 15.0 * w1d * w2d +
                     4.0 * w1 * w2dd + 20.0 * w1dd * w2)) *
                s1 +
            (-80.0 * (w1 * w2d + 2.0 * w1d * w2)) * s2 +
            (-4.0 * kI *
             (4.0 * w1 * w2 * (17.0 * w1d + 7.0 * w2d) + 4.0 * w1 * w2d * (2.0 * w1 - 1.0) +
              20.0 * w1d * w2 * (2.0 * w2 - 1.0) + 5.0 * w1d * w2dd +
              10.0 * (w1dd * w2d + w1d3 * w2) + w1 * w2d3)) *
                k0;
        CHECK(max_abs_diff(s[6], s6) < 1e-10);
    }
    CHECK_THROWS_AS(s_series_from_jets(Jet({1.0}), Jet({1.0}), 6), JetOrderError);
}

TEST_CASE("endpoint form reproduces the hard-coded expansion coefficients") {
    auto rng = make_rng(137);
    std::uniform_real_distribution<double> uk(0.5, 2.0);
    for (int trial = 0; trial < 50; ++trial) {
        const Jet v1 = random_jet(rng, 3, 1.5);
        const Jet v2 = random_jet(rng, 3, 1.5);
        const double k = uk(rng);
        const auto generated = s_series_endpoint_form(v1, v2, k, 6);
        const auto closed = overlap_series_coefficients(v1, v2, k, 6);
        CHECK(max_abs_diff(generated[0], mat2_identity()) < 1e-13);
        CHECK(max_abs_norm(generated[1]) < 1e-13);
        CHECK(max_abs_norm(generated[2]) < 1e-13);
        for (int n = 3; n <= 6; ++n)
            CHECK(max_abs_diff(generated[static_cast<size_t>(n)],
                               closed[static_cast<size_t>(n)]) < 1e-12);
    }
    CHECK_THROWS_AS(s_series_endpoint_form(Jet({1.0}), Jet({1.0}), 1.0, 6), JetOrderError);
}

TEST_CASE("endpoint form handles the overlap re-expansion of the left jet") {
    // zero jets give the identity series at every order
    const auto b = s_series_endpoint_form(Jet::zeros(3), Jet::zeros(3), 1.0, 6);
    CHECK(max_abs_diff(b[0], mat2_identity()) < 1e-14);
    for (size_t n = 1; n < b.size(); ++n) CHECK(max_abs_norm(b[n]) < 1e-13);
}
