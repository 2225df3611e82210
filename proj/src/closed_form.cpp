#include "homoghj/closed_form.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "homoghj/errors.hpp"
#include "homoghj/minimize.hpp"
#include "homoghj/special.hpp"

namespace homoghj {

namespace {

void require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(std::string(what) + " must be positive and finite");
}

// log of the integral of exp(phi) over the real line, for phi with a single
// dominant peak region of natural width `width`, strictly decreasing to the
// right of `decreasing_right_from` and increasing to the left of `decreasing_left_from`.
struct PeakedIntegrand {
    std::function<double(double)> phi;
    double search_lo = -10.0;
    double search_hi = 10.0;
    int scan_points = 4001;
    bool require_interior = false;
    double width = 1.0;
    double decreasing_right_from = 0.0;
    double decreasing_left_from = 0.0;
    std::vector<double> kinks;
};

double log_integral_exp(const PeakedIntegrand& in, const QuadratureConfig& q) {
    q.validate();
    ScanOptions opts;
    opts.points = in.scan_points;
    opts.candidates = 6;
    opts.tol = std::min(1e-10, 1e-6 * in.width);
    opts.require_interior = in.require_interior;
    const MinimumResult peak =
        scan_minimize([&](double y) { return -in.phi(y); }, in.search_lo, in.search_hi, opts);
    const double ymax = peak.argmin;
    const double phimax = -peak.value;
    const double log_thr = std::log(q.truncation_threshold);

    auto scaled = [&](double y) { return std::exp(std::min(in.phi(y) - phimax, 0.0)); };

    // Walk outwards in doubling steps until the integrand is below threshold
    // and phi is known to be monotone from there on.
    auto find_edge = [&](double direction) {
        const double monotone_from = direction > 0 ? in.decreasing_right_from : in.decreasing_left_from;
        double y = ymax;
        double step = in.width;
        for (int guard = 0; guard < 200; ++guard) {
            y += direction * step;
            step *= 2.0;
            const bool past = direction > 0 ? y >= monotone_from : y <= monotone_from;
            if (past && in.phi(y) - phimax < log_thr) return y;
        }
        throw QuadratureFailure("could not locate truncation point of the peaked integrand");
    };
    double right = find_edge(+1.0);
    double left = find_edge(-1.0);

    // One more subdivision of the same length must contribute less than abs_tol.
    for (int guard = 0; guard < 60; ++guard) {
        const double ext = right - ymax;
        const QuadratureResult tail = integrate_adaptive(scaled, right, right + ext, q);
        if (std::fabs(tail.value) < q.abs_tol) break;
        right += ext;
    }
    for (int guard = 0; guard < 60; ++guard) {
        const double ext = ymax - left;
        const QuadratureResult tail = integrate_adaptive(scaled, left - ext, left, q);
        if (std::fabs(tail.value) < q.abs_tol) break;
        left -= ext;
    }

    std::vector<double> breaks = in.kinks;
    breaks.push_back(ymax);
    for (double off = in.width; ymax + off < right || ymax - off > left; off *= 2.0) {
        breaks.push_back(ymax + off);
        breaks.push_back(ymax - off);
    }
    const QuadratureResult body = integrate_adaptive(scaled, left, right, q, breaks);
    if (!(body.value > 0.0)) throw QuadratureFailure("peaked integral evaluated to a non-positive value");
    return phimax + std::log(body.value);
}

double local_lipschitz(const InitialDatum1D& g, double center, double radius) {
    return g.lipschitz_on(center - radius, center + radius);
}

}  // namespace

double linear_gap_constant() {
    const double e = std::exp(1.0);
    return (e - 1.0) / (std::sqrt(kPi) * e);
}

double heat_kernel_solution(const InitialDatum1D& g, double eps, double x, double t, const QuadratureConfig& q) {
    require_positive(eps, "eps");
    require_positive(t, "t");
    q.validate();
    // u = pi^{-1/2} int exp(-z^2) g(x - t + 2 sqrt(eps t) z) dz
    const double scale = 2.0 * std::sqrt(eps * t);
    const double shift = x - t;
    auto integrand = [&](double z) { return std::exp(-z * z) * g(shift + scale * z); };

    double zmax = std::sqrt(-std::log(q.truncation_threshold));
    for (int guard = 0; guard < 60; ++guard) {
        const QuadratureResult tail_r = integrate_adaptive(integrand, zmax, zmax + 1.0, q);
        const QuadratureResult tail_l = integrate_adaptive(integrand, -zmax - 1.0, -zmax, q);
        if (std::fabs(tail_r.value) + std::fabs(tail_l.value) < q.abs_tol) break;
        zmax += 1.0;
    }

    std::vector<double> breaks;
    for (double k : g.kinks()) breaks.push_back((k - shift) / scale);
    breaks.push_back(0.0);
    QuadratureConfig inner = q;
    inner.abs_tol = q.abs_tol * std::sqrt(kPi);
    const QuadratureResult r = integrate_adaptive(integrand, -zmax, zmax, inner, breaks);
    return r.value / std::sqrt(kPi);
}

double heat_kernel_hat_closed_form(double eps, double x, double t) {
    require_positive(eps, "eps");
    require_positive(t, "t");
    // hat(y) = (y+1)_+ - 2 y_+ + (y-1)_+ and E[(a + sZ)_+] = a Phi(a/s) + s phi(a/s)
    const double s = std::sqrt(2.0 * eps * t);
    const double m = x - t;
    auto ramp_mean = [s](double a) {
        const double z = a / s;
        return a * special::normal_cdf(z) + s * special::normal_pdf(z);
    };
    return ramp_mean(m + 1.0) - 2.0 * ramp_mean(m) + ramp_mean(m - 1.0);
}

double hopf_cole_quadratic(const InitialDatum1D& g, double eps, double x, double t, const QuadratureConfig& q) {
    require_positive(eps, "eps");
    require_positive(t, "t");
    const double lip = local_lipschitz(g, x, 20.0 + 4.0 * t);
    const double reach = 2.0 * lip * t + 1.0;
    PeakedIntegrand in;
    in.phi = [&](double y) {
        const double d = x - y;
        return -d * d / (4.0 * eps * t) - g(y) / (2.0 * eps);
    };
    in.search_lo = x - reach;
    in.search_hi = x + reach;
    in.width = std::sqrt(eps * t);
    in.scan_points = static_cast<int>(std::clamp((in.search_hi - in.search_lo) / (0.25 * in.width), 4001.0, 200001.0));
    in.decreasing_right_from = x + lip * t;
    in.decreasing_left_from = x - lip * t;
    in.kinks = g.kinks();
    const double log_integral = log_integral_exp(in, q);
    return -2.0 * eps * (log_integral - 0.5 * std::log(4.0 * kPi * eps * t));
}

double hopf_cole_neg_abs_closed_form(double eps, double t) {
    require_positive(eps, "eps");
    require_positive(t, "t");
    return -0.5 * t - 2.0 * eps * std::log1p(special::erf(std::sqrt(t) / (2.0 * std::sqrt(eps))));
}

Expansion neg_abs_small_time_expansion(double eps, double t) {
    const double coef = -2.0 / std::sqrt(kPi);
    return {-0.5 * t + coef * std::sqrt(t * eps), coef, Expansion::Scale::sqrt_t_eps};
}

double quad_log_error(const InitialDatum1D& g, double eps, const QuadratureConfig& q) {
    require_positive(eps, "eps");
    const double lip = local_lipschitz(g, 0.0, 10.0);
    PeakedIntegrand in;
    in.phi = [&](double y) { return -(g(y) + 0.5 * y * y) / (2.0 * eps); };
    in.search_lo = -10.0;
    in.search_hi = 10.0;
    in.scan_points = 100001;
    in.require_interior = true;
    in.width = std::sqrt(eps);
    // h'(y) = g'(y) + y has the sign of y once |y| > lip
    in.decreasing_right_from = lip;
    in.decreasing_left_from = -lip;
    in.kinks = g.kinks();
    const double log_integral = log_integral_exp(in, q);
    return -2.0 * eps * (log_integral - 0.5 * std::log(4.0 * kPi * eps));
}

Expansion capped_parabola_log_expansion(double eps) {
    return {eps * std::log(eps) + eps * std::log(kPi), 1.0, Expansion::Scale::eps_log_eps};
}

double hopf_lax(const Flux1D& flux, const InitialDatum1D& g, double x, double t) {
    if (!flux.is_convex()) throw NonConvexFlux("Hopf-Lax formula requires a convex flux, got " + flux.describe());
    require_positive(t, "t");

    ScanOptions opts;
    opts.points = 8001;
    opts.candidates = 8;
    opts.tol = 1e-10;

    switch (flux.kind) {
        case Flux1D::Kind::linear:
            return g(x - t);
        case Flux1D::Kind::abs:
        case Flux1D::Kind::abs_power: {
            const bool bounded_speed = flux.kind == Flux1D::Kind::abs || flux.m == 1.0;
            if (bounded_speed || flux.c == 0.0) {
                // L is 0 on |v| <= c and +inf outside: minimise g over [x - ct, x + ct]
                const double c = flux.kind == Flux1D::Kind::abs ? 1.0 : flux.c;
                if (c == 0.0) return g(x);
                return scan_minimize([&](double y) { return g(y); }, x - c * t, x + c * t, opts).value;
            }
            const double lip = g.lipschitz_on(-std::fabs(x) - 10.0, std::fabs(x) + 10.0);
            const double speed = lipschitz_bound_F(flux, std::max(lip, 1e-12));
            const double radius = std::max(10.0, std::fabs(x) + t * speed);
            auto objective = [&](double y) { return g(y) + t * legendre_conjugate(flux, (x - y) / t); };
            return scan_minimize(objective, -radius, radius, opts).value;
        }
        case Flux1D::Kind::odd_power:
            break;
    }
    throw NonConvexFlux("Hopf-Lax formula requires a convex flux");
}

double exact_limit_solution(std::string_view example_id, double x, double t) {
    if (example_id == "5.1" || example_id == "5.2") return -std::fabs(x) - t;
    if (example_id == "5.3") return std::max(1.0 - std::fabs(x) - t, 0.0);
    if (example_id == "5.4") {
        if (x > 0.0 || t < 0.0 || t > 1.0) {
            throw DomainError("example 5.4 closed form holds for x <= 0 and 0 <= t <= 1");
        }
        const double base = -2.0 * x / 3.0;
        return base * std::sqrt(base) / std::sqrt(3.0 - 2.0 * t);
    }
    throw ConfigError("no closed-form limit for example '" + std::string(example_id) +
                      "' (valid: 5.1, 5.2, 5.3, 5.4)");
}

double dirichlet_ode_solution(double eps, double x) {
    require_positive(eps, "eps");
    if (x < 0.0) throw DomainError("dirichlet_ode_solution is defined for x >= 0");
    const double r = std::sqrt(eps);
    return r / (x + r);
}

double dirichlet_ode_residual(double eps, double x, double spacing) {
    const double u = dirichlet_ode_solution(eps, x);
    const double up = dirichlet_ode_solution(eps, x + spacing);
    const double um = dirichlet_ode_solution(eps, x - spacing);
    const double uxx = (up - 2.0 * u + um) / (spacing * spacing);
    return std::fabs(2.0 * u * u * u - eps * uxx);
}

}  // namespace homoghj
