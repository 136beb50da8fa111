#pragma once

#include <algorithm>
#include <cmath>

#include "tmcompose/errors.hpp"
#include "tmcompose/propagator.hpp"

namespace tmc::detail {

// Dormand-Prince 5(4) with FSAL and a standard proportional step controller,
// specialized to 2x2 complex states.

inline double error_ratio(const Mat2C& err, const Mat2C& y0, const Mat2C& y1, double atol,
                          double rtol) {
    auto comp = [&](Complex e, Complex a, Complex b) {
        const double scale = atol + rtol * std::max(std::abs(a), std::abs(b));
        return std::abs(e) / scale;
    };
    double r = comp(err.a11, y0.a11, y1.a11);
    r = std::max(r, comp(err.a12, y0.a12, y1.a12));
    r = std::max(r, comp(err.a21, y0.a21, y1.a21));
    r = std::max(r, comp(err.a22, y0.a22, y1.a22));
    return r;
}

// Integrates y' = rhs(tau, y) from stops.front() to stops.back(), stepping
// exactly onto each interior stop. `y` is updated in place.
template <class Rhs>
void integrate_rk45(Rhs&& rhs, const std::vector<double>& stops, Mat2C& y, double h_init,
                    const PropagatorConfig& cfg, long& steps_taken) {
    static constexpr double a21 = 1.0 / 5.0;
    static constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
    static constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
    static constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                            a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
    static constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0,
                            a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                            a65 = -5103.0 / 18656.0;
    static constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                            b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
    static constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                            e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
    static constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;

    for (size_t seg = 0; seg + 1 < stops.size(); ++seg) {
        const double t0 = stops[seg];
        const double t1 = stops[seg + 1];
        const double span = t1 - t0;
        if (span <= 0.0) continue;
        double t = t0;
        double h_ctrl = std::min(h_init, span);
        Mat2C k1 = rhs(t, y);  // FSAL slot
        while (t < t1) {
            // land exactly on the segment end instead of leaving a sliver
            double h = h_ctrl;
            bool last = false;
            if (h >= t1 - t) {
                h = t1 - t;
                last = true;
            } else if (h < 16.0 * std::numeric_limits<double>::epsilon() *
                               std::max(1.0, std::abs(t))) {
                throw IntegrationError("rk45: step size underflow", t, steps_taken);
            }

            const Mat2C k2 = rhs(t + c2 * h, y + (h * a21) * k1);
            const Mat2C k3 = rhs(t + c3 * h, y + (h * a31) * k1 + (h * a32) * k2);
            const Mat2C k4 =
                rhs(t + c4 * h, y + (h * a41) * k1 + (h * a42) * k2 + (h * a43) * k3);
            const Mat2C k5 = rhs(t + c5 * h, y + (h * a51) * k1 + (h * a52) * k2 +
                                                 (h * a53) * k3 + (h * a54) * k4);
            const Mat2C k6 = rhs(t + h, y + (h * a61) * k1 + (h * a62) * k2 + (h * a63) * k3 +
                                            (h * a64) * k4 + (h * a65) * k5);
            const Mat2C ynew = y + (h * b1) * k1 + (h * b3) * k3 + (h * b4) * k4 +
                               (h * b5) * k5 + (h * b6) * k6;
            const Mat2C k7 = rhs(t + h, ynew);
            const Mat2C err = (h * e1) * k1 + (h * e3) * k3 + (h * e4) * k4 + (h * e5) * k5 +
                              (h * e6) * k6 + (h * e7) * k7;

            const double ratio = error_ratio(err, y, ynew, cfg.abs_tol, cfg.rel_tol);
            if (++steps_taken > cfg.max_steps)
                throw IntegrationError("rk45: step budget exhausted", t, steps_taken);

            if (ratio <= 1.0) {
                t = last ? t1 : t + h;
                y = ynew;
                k1 = k7;
            }
            const double factor = ratio > 0.0 ? 0.9 * std::pow(ratio, -0.2) : 5.0;
            h_ctrl = h * std::clamp(factor, 0.2, 5.0);
        }
    }
}

}  // namespace tmc::detail
