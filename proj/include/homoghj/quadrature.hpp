#pragma once

#include <functional>
#include <span>

namespace homoghj {

struct QuadratureConfig {
    double abs_tol = 1e-10;
    /// Integrand level below which an infinite domain is truncated.
    double truncation_threshold = 1e-16;
    int max_subdivisions = 2000;

    void validate() const;
};

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    int subdivisions = 0;
};

/// Globally adaptive 21-point Gauss-Kronrod quadrature on [a, b].
///
/// Intervals are bisected in order of decreasing error estimate until the
/// summed estimate drops below cfg.abs_tol. Interior breakpoints seed the
/// initial partition so kinks and narrow peaks are never straddled.
/// Throws QuadratureFailure when max_subdivisions is exhausted.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    const QuadratureConfig& cfg, std::span<const double> breakpoints = {});

}  // namespace homoghj
