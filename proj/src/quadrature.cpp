#include "homoghj/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <vector>

#include "homoghj/errors.hpp"

namespace homoghj {

namespace {

// Kronrod abscissae (positive half, descending) and weights of the 21-point rule;
// odd-indexed nodes 1,3,...,9 are the 10-point Gauss nodes.
constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};

constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600584235984, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};

constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Segment {
    double a;
    double b;
    double value;
    double error;

    bool operator<(const Segment& other) const { return error < other.error; }
};

Segment gauss_kronrod21(const std::function<double(double)>& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double kronrod = fc * kWgk[10];
    double gauss = 0.0;
    for (int j = 0; j < 10; ++j) {
        const double dx = half * kXgk[j];
        const double s = f(center - dx) + f(center + dx);
        kronrod += kWgk[j] * s;
        if (j % 2 == 1) gauss += kWg[j / 2] * s;
    }
    const double value = kronrod * half;
    const double error = std::fabs((kronrod - gauss) * half);
    return {a, b, value, error};
}

}  // namespace

void QuadratureConfig::validate() const {
    if (!(abs_tol > 0.0)) throw ConfigError("QuadratureConfig: abs_tol must be positive");
    if (!(truncation_threshold > 0.0)) throw ConfigError("QuadratureConfig: truncation_threshold must be positive");
    if (max_subdivisions < 1) throw ConfigError("QuadratureConfig: max_subdivisions must be positive");
}

QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    const QuadratureConfig& cfg, std::span<const double> breakpoints) {
    cfg.validate();
    if (a == b) return {};
    double sign = 1.0;
    if (a > b) {
        std::swap(a, b);
        sign = -1.0;
    }

    std::vector<double> cuts{a};
    for (double p : breakpoints) {
        if (p > a && p < b) cuts.push_back(p);
    }
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::priority_queue<Segment> heap;
    double total_error = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        Segment s = gauss_kronrod21(f, cuts[i], cuts[i + 1]);
        total_error += s.error;
        heap.push(s);
    }

    int subdivisions = 0;
    while (total_error > cfg.abs_tol) {
        Segment worst = heap.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            // cannot bisect further in double precision
            break;
        }
        if (++subdivisions > cfg.max_subdivisions) {
            throw QuadratureFailure("subdivision budget of " + std::to_string(cfg.max_subdivisions) +
                                    " exhausted with error estimate " + std::to_string(total_error));
        }
        heap.pop();
        Segment left = gauss_kronrod21(f, worst.a, mid);
        Segment right = gauss_kronrod21(f, mid, worst.b);
        total_error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        if (subdivisions % 64 == 0) {
            // re-sum to keep drift in the running total out of the stopping test
            auto copy = heap;
            total_error = 0.0;
            while (!copy.empty()) {
                total_error += copy.top().error;
                copy.pop();
            }
        }
    }

    // Deterministic summation in left-to-right order.
    std::vector<Segment> segments;
    segments.reserve(heap.size());
    while (!heap.empty()) {
        segments.push_back(heap.top());
        heap.pop();
    }
    std::sort(segments.begin(), segments.end(), [](const Segment& l, const Segment& r) { return l.a < r.a; });
    QuadratureResult result;
    for (const Segment& s : segments) {
        result.value += s.value;
        result.error_estimate += s.error;
    }
    result.value *= sign;
    result.subdivisions = subdivisions;
    return result;
}

}  // namespace homoghj
