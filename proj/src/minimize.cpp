#include "homoghj/minimize.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "homoghj/errors.hpp"

namespace homoghj {

MinimumResult golden_section(const std::function<double(double)>& f, double lo, double hi, double tol) {
    constexpr double kInvPhi = 0.61803398874989484820;
    double a = lo;
    double b = hi;
    double c = b - kInvPhi * (b - a);
    double d = a + kInvPhi * (b - a);
    double fc = f(c);
    double fd = f(d);
    MinimumResult best{a, f(a)};
    const double fb = f(b);
    if (fb < best.value) best = {b, fb};
    while (b - a > tol) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - kInvPhi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kInvPhi * (b - a);
            fd = f(d);
        }
        if (!(c > a && c < b) || !(d > a && d < b)) break;
    }
    if (fc < best.value) best = {c, fc};
    if (fd < best.value) best = {d, fd};
    return best;
}

MinimumResult scan_minimize(const std::function<double(double)>& f, double lo, double hi, const ScanOptions& opts) {
    if (!(hi > lo)) {
        const double v = f(lo);
        return {lo, v};
    }
    const int n = std::max(opts.points, 3);
    const double step = (hi - lo) / (n - 1);
    std::vector<double> values(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double y = (i == n - 1) ? hi : lo + i * step;
        values[static_cast<std::size_t>(i)] = f(y);
    }

    const auto best_it = std::min_element(values.begin(), values.end());
    const auto best_idx = static_cast<int>(best_it - values.begin());
    if (!std::isfinite(*best_it)) throw MinimizationFailure("objective is +inf on the whole scan window");
    if (opts.require_interior && (best_idx == 0 || best_idx == n - 1)) {
        throw MinimizationFailure("minimum lies on the edge of the search window");
    }

    // grid-local minima, best first
    std::vector<int> local;
    for (int i = 0; i < n; ++i) {
        const double v = values[static_cast<std::size_t>(i)];
        if (!std::isfinite(v)) continue;
        const bool left_ok = (i == 0) || v <= values[static_cast<std::size_t>(i - 1)];
        const bool right_ok = (i == n - 1) || v <= values[static_cast<std::size_t>(i + 1)];
        if (left_ok && right_ok) local.push_back(i);
    }
    std::stable_sort(local.begin(), local.end(), [&](int l, int r) {
        return values[static_cast<std::size_t>(l)] < values[static_cast<std::size_t>(r)];
    });
    if (static_cast<int>(local.size()) > opts.candidates) local.resize(static_cast<std::size_t>(opts.candidates));

    MinimumResult best{lo + best_idx * step, *best_it};
    for (int i : local) {
        const double a = lo + std::max(i - 1, 0) * step;
        const double b = std::min(lo + std::min(i + 1, n - 1) * step, hi);
        const MinimumResult r = golden_section(f, a, b, opts.tol);
        if (r.value < best.value) best = r;
    }
    return best;
}

}  // namespace homoghj
