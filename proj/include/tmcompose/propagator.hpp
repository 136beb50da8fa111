#pragma once

#include <vector>

#include "tmcompose/mat2.hpp"
#include "tmcompose/potential.hpp"

namespace tmc {

// Transfer-matrix convention: M relates the plane-wave coefficients of
// psi(x) -> A e^{ikx} + B e^{-ikx} on the two sides of the potential by
// [A+, B+]^T = M [A-, B-]^T. M solves, in the clock variable tau = k x,
//     i dM/dtau = w(tau) K(tau) M,   M(tau1, tau1) = 1,
// with w(tau) = v(tau/k) / (2 k^2) and K(tau) from mat2.hpp. Integration is
// done by an adaptive embedded Runge-Kutta 5(4) pair, restarted at every
// piece boundary so that discontinuities of v never fall inside a step.

struct PropagatorConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    long max_steps = 2'000'000;
    // First trial step is initial_step_fraction / max(1, sup|w|); the error
    // controller takes over afterwards.
    double initial_step_fraction = 0.1;
};

struct TransferResult {
    Mat2C matrix;
    double k = 0.0;
    double det_drift = 0.0;  // |det M - 1|, reported and never renormalized
    long steps_taken = 0;
};

TransferResult transfer_matrix(const Potential& v, double k, double x1, double x2,
                               const PropagatorConfig& cfg = {});

// Over the closed support hull of v (identity for the zero potential).
TransferResult transfer_matrix(const Potential& v, double k,
                               const PropagatorConfig& cfg = {});

// Transfer matrix of a pointwise sum of potentials. This is how overlapping
// pairs are integrated without merging their piece lists.
TransferResult transfer_matrix_sum(const std::vector<const Potential*>& vs, double k,
                                   double x1, double x2, const PropagatorConfig& cfg = {});

// Integrates i dN/dtau = -H(tau)^T N, N(tau1) = 1; the result equals
// (M(tau2, tau1)^{-1})^T.
Mat2C inverse_transpose_evolution(const Potential& v, double k, double x1, double x2,
                                  const PropagatorConfig& cfg = {});

// Closed-form transfer matrix of the constant potential v0 on [0, a], from
// plane-wave matching with interior wavenumber kappa = sqrt(k^2 - v0). The
// entries are even in kappa, so the branch of the square root is immaterial,
// and the kappa -> 0 limit is taken analytically. Serves as an independent
// oracle for the ODE path.
Mat2C rectangular_barrier_oracle(Complex v0, double a, double k);

// Fixed-step classical RK4 over the same equation; debug path.
Mat2C transfer_matrix_fixed_rk4(const Potential& v, double k, double x1, double x2,
                                int steps);

}  // namespace tmc
