#include "tmcompose/propagator.hpp"

#include <algorithm>
#include <cmath>

#include "tmcompose/detail/rk45.hpp"
#include "tmcompose/errors.hpp"

namespace tmc {

namespace {

// tau stops: segment ends plus every piece boundary strictly inside.
std::vector<double> tau_stops(const std::vector<const Potential*>& vs, double k, double x1,
                              double x2) {
    std::vector<double> stops{k * x1};
    for (const Potential* v : vs)
        for (double b : v->breakpoints())
            if (b > x1 && b < x2) stops.push_back(k * b);
    stops.push_back(k * x2);
    std::sort(stops.begin(), stops.end());
    stops.erase(std::unique(stops.begin(), stops.end()), stops.end());
    return stops;
}

double initial_step(const std::vector<const Potential*>& vs, double k,
                    const PropagatorConfig& cfg) {
    double vmax = 0.0;
    for (const Potential* v : vs) vmax = std::max(vmax, v->sup_abs());
    const double wmax = vmax / (2.0 * k * k);
    return cfg.initial_step_fraction / std::max(1.0, wmax);
}

Complex sum_w(const std::vector<const Potential*>& vs, double k, double tau) {
    Complex v{0.0};
    for (const Potential* p : vs) v += p->evaluate(tau / k);
    return v / (2.0 * k * k);
}

void check_args(double k, double x1, double x2) {
    if (!(k > 0.0)) throw DomainError("transfer_matrix: k must be positive");
    if (!(x1 <= x2)) throw DomainError("transfer_matrix: needs x1 <= x2");
}

}  // namespace

TransferResult transfer_matrix_sum(const std::vector<const Potential*>& vs, double k,
                                   double x1, double x2, const PropagatorConfig& cfg) {
    check_args(k, x1, x2);
    TransferResult res;
    res.k = k;
    res.matrix = mat2_identity();
    if (x1 < x2) {
        auto rhs = [&](double tau, const Mat2C& m) {
            return (-kI * sum_w(vs, k, tau)) * (k_matrix(tau) * m);
        };
        detail::integrate_rk45(rhs, tau_stops(vs, k, x1, x2), res.matrix,
                               initial_step(vs, k, cfg), cfg, res.steps_taken);
    }
    res.det_drift = std::abs(det(res.matrix) - 1.0);
    return res;
}

TransferResult transfer_matrix(const Potential& v, double k, double x1, double x2,
                               const PropagatorConfig& cfg) {
    return transfer_matrix_sum({&v}, k, x1, x2, cfg);
}

TransferResult transfer_matrix(const Potential& v, double k, const PropagatorConfig& cfg) {
    const auto s = v.support();
    if (!s) {
        TransferResult res;
        res.k = k;
        res.matrix = mat2_identity();
        return res;
    }
    return transfer_matrix(v, k, s->lo, s->hi, cfg);
}

Mat2C inverse_transpose_evolution(const Potential& v, double k, double x1, double x2,
                                  const PropagatorConfig& cfg) {
    check_args(k, x1, x2);
    Mat2C n = mat2_identity();
    if (x1 < x2) {
        std::vector<const Potential*> vs{&v};
        auto rhs = [&](double tau, const Mat2C& m) {
            // i dN/dtau = -H^T N with H = w K
            return (kI * sum_w(vs, k, tau)) * (k_matrix(tau).transpose() * m);
        };
        long steps = 0;
        detail::integrate_rk45(rhs, tau_stops(vs, k, x1, x2), n, initial_step(vs, k, cfg),
                               cfg, steps);
    }
    return n;
}

namespace {

Complex sinc_c(Complex z) {
    if (std::abs(z) < 1e-4) {
        const Complex z2 = z * z;
        return 1.0 - z2 / 6.0 + z2 * z2 / 120.0;
    }
    return std::sin(z) / z;
}

}  // namespace

Mat2C rectangular_barrier_oracle(Complex v0, double a, double k) {
    if (!(a > 0.0)) throw DomainError("rectangular_barrier_oracle: a must be positive");
    if (!(k > 0.0)) throw DomainError("rectangular_barrier_oracle: k must be positive");
    const Complex kappa2 = Complex{k * k} - v0;
    const Complex kappa = std::sqrt(kappa2);
    const Complex z = kappa * a;

    // Fundamental matrix of psi'' = -kappa^2 psi acting on (psi, psi'):
    // entries are even functions of kappa, written to stay finite at kappa=0.
    const Complex p11 = std::cos(z);
    const Complex p12 = a * sinc_c(z);
    const Complex p21 = -kappa2 * p12;
    const Complex p22 = p11;

    // Change of basis between (psi, psi') and plane-wave coefficients at the
    // two edges: Wk(x) = [[e^{ikx}, e^{-ikx}], [ik e^{ikx}, -ik e^{-ikx}]].
    const Complex ik{0.0, k};
    const Complex epa = std::exp(Complex{0.0, k * a});
    const Complex ema = 1.0 / epa;
    // Wk(0)
    const Mat2C w0{1.0, 1.0, ik, -ik};
    // Wk(a)^{-1}
    const Mat2C wa_inv{0.5 * ema, ema / (2.0 * ik), 0.5 * epa, -epa / (2.0 * ik)};
    const Mat2C prop{p11, p12, p21, p22};
    return wa_inv * (prop * w0);
}

Mat2C transfer_matrix_fixed_rk4(const Potential& v, double k, double x1, double x2,
                                int steps) {
    check_args(k, x1, x2);
    if (steps < 1) throw DomainError("transfer_matrix_fixed_rk4: steps must be >= 1");
    std::vector<const Potential*> vs{&v};
    auto rhs = [&](double tau, const Mat2C& m) {
        return (-kI * sum_w(vs, k, tau)) * (k_matrix(tau) * m);
    };
    Mat2C y = mat2_identity();
    const double t0 = k * x1;
    const double h = (k * x2 - t0) / steps;
    for (int i = 0; i < steps; ++i) {
        const double t = t0 + i * h;
        const Mat2C k1 = rhs(t, y);
        const Mat2C k2 = rhs(t + 0.5 * h, y + (0.5 * h) * k1);
        const Mat2C k3 = rhs(t + 0.5 * h, y + (0.5 * h) * k2);
        const Mat2C k4 = rhs(t + h, y + h * k3);
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return y;
}

}  // namespace tmc
