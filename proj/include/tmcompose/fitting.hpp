#pragma once

#include <vector>

namespace tmc {

struct LogLogFit {
    double slope = 0.0;
    double intercept = 0.0;
    int points_used = 0;
};

// Ordinary least squares of log(y) against log(x). Points with y at or
// below y_floor are discarded as numerically contaminated. Throws
// DomainError when fewer than two usable points remain.
LogLogFit fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y,
                           double y_floor = 2.220446049250313e-14);

}  // namespace tmc
