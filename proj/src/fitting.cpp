#include "tmcompose/fitting.hpp"

#include <cmath>

#include "tmcompose/errors.hpp"

namespace tmc {

LogLogFit fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y,
                           double y_floor) {
    if (x.size() != y.size()) throw DomainError("fit_loglog_slope: size mismatch");
    std::vector<double> lx, ly;
    for (size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0)) throw DomainError("fit_loglog_slope: x must be positive");
        if (y[i] <= y_floor) continue;
        lx.push_back(std::log(x[i]));
        ly.push_back(std::log(y[i]));
    }
    if (lx.size() < 2)
        throw DomainError("fit_loglog_slope: fewer than two points above the floor");
    const double n = static_cast<double>(lx.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (size_t i = 0; i < lx.size(); ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    LogLogFit fit;
    fit.points_used = static_cast<int>(lx.size());
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw DomainError("fit_loglog_slope: degenerate abscissae");
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    return fit;
}

}  // namespace tmc
