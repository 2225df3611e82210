#pragma once

#include <functional>

namespace homoghj {

struct MinimumResult {
    double argmin = 0.0;
    double value = 0.0;
};

/// Golden-section search on [lo, hi] until the bracket is narrower than tol.
MinimumResult golden_section(const std::function<double(double)>& f, double lo, double hi, double tol);

struct ScanOptions {
    int points = 4001;
    /// How many of the best grid-local minima are refined.
    int candidates = 6;
    double tol = 1e-10;
    /// Throw MinimizationFailure if the best grid point sits on the window edge.
    bool require_interior = false;
};

/// Global minimum of f on [lo, hi]: uniform scan, then golden refinement of the
/// best local minima inside their grid brackets. Values that are +inf are
/// treated as excluded candidates.
MinimumResult scan_minimize(const std::function<double(double)>& f, double lo, double hi,
                            const ScanOptions& opts = {});

}  // namespace homoghj
