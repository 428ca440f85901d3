#pragma once

#include <span>

namespace imlab {

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;  ///< RMS of the fit residuals
};

/// Least-squares line through (x, y).
LineFit linear_fit(std::span<const double> x, std::span<const double> y);

/// Least-squares line through (log x, log y); all inputs must be positive.
LineFit loglog_fit(std::span<const double> x, std::span<const double> y);

}  // namespace imlab
