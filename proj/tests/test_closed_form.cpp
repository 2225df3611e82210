#include "doctest.h"

#include <cmath>
#include <vector>

#include "homoghj/closed_form.hpp"
#include "homoghj/errors.hpp"

using namespace homoghj;

namespace {

// Composite Simpson rule with n (even) panels.
template <class F>
double simpson(F f, double a, double b, int n) {
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return s * h / 3.0;
}

// u_t + u_x = eps u_xx with the hat datum, by Simpson on the two linear pieces.
double heat_hat_simpson(double eps, double x, double t) {
    const double var = 2.0 * eps * t;
    auto kern = [&](double y) {
        const double z = x - t - y;
        return std::exp(-z * z / (2.0 * var)) / std::sqrt(2.0 * M_PI * var);
    };
    auto left = [&](double y) { return (1.0 + y) * kern(y); };
    auto right = [&](double y) { return (1.0 - y) * kern(y); };
    return simpson(left, -1.0, 0.0, 200000) + simpson(right, 0.0, 1.0, 200000);
}

}  // namespace

TEST_CASE("heat-kernel solution matches an independent Simpson evaluation") {
    for (double eps : {0.0625, 0.01, std::ldexp(1.0, -8)}) {
        for (double x : {-0.5, 0.0, 0.3, 1.2}) {
            for (double t : {0.25, 1.0}) {
                INFO("eps=", eps, " x=", x, " t=", t);
                const double ref = heat_hat_simpson(eps, x, t);
                CHECK(std::fabs(heat_kernel_solution(InitialDatum1D::hat(), eps, x, t) - ref) < 1e-9);
                CHECK(std::fabs(heat_kernel_hat_closed_form(eps, x, t) - ref) < 1e-9);
            }
        }
    }
}

TEST_CASE("heat-kernel gap at the kink exceeds the linear constant") {
    const double C = linear_gap_constant();
    CHECK(C == doctest::Approx((M_E - 1.0) / (std::sqrt(M_PI) * M_E)).epsilon(1e-15));
    CHECK(C == doctest::Approx(0.3566358).epsilon(1e-6));
    const double eps = std::ldexp(1.0, -8);
    const double gap = heat_kernel_solution(InitialDatum1D::hat(), eps, 0.0, 1.0);
    CHECK(gap >= C * std::sqrt(eps));
    CHECK(gap >= 0.3566 * std::sqrt(eps));
}

TEST_CASE("Hopf-Cole quadrature for -|x| matches the erf formula") {
    for (double eps : {0.25, 0.01, 1e-3}) {
        for (double t : {1e-4, 0.1, 1.0}) {
            const double expected = -t / 2.0 - 2.0 * eps * std::log1p(std::erf(std::sqrt(t) / (2.0 * std::sqrt(eps))));
            INFO("eps=", eps, " t=", t);
            CHECK(std::fabs(hopf_cole_neg_abs_closed_form(eps, t) - expected) < 1e-14);
            CHECK(std::fabs(hopf_cole_quadratic(InitialDatum1D::neg_abs(), eps, 0.0, t) - expected) < 1e-8);
        }
    }
}

TEST_CASE("quadratic flux small-time ratio") {
    const double eps = std::ldexp(1.0, -6);
    const double t = 1e-6;
    const double ratio = (hopf_cole_neg_abs_closed_form(eps, t) + t / 2.0) / std::sqrt(t * eps);
    CHECK(std::fabs(ratio + 2.0 / std::sqrt(M_PI)) <= 0.05 * 2.0 / std::sqrt(M_PI));
    const Expansion ex = neg_abs_small_time_expansion(eps, t);
    CHECK(ex.scale == Expansion::Scale::sqrt_t_eps);
    CHECK(std::fabs(ex.value - hopf_cole_neg_abs_closed_form(eps, t)) < 0.05 * std::sqrt(t * eps));
}

TEST_CASE("capped parabola error is of order eps log eps") {
    for (double eps : {1e-3, 1e-4, 1e-5}) {
        const double v = quad_log_error(InitialDatum1D::capped_parabola(), eps);
        const double L = eps * std::fabs(std::log(eps));
        INFO("eps=", eps, " v=", v);
        CHECK(std::fabs(v) >= 0.5 * L);
        CHECK(std::fabs(v) <= 2.0 * L);
        CHECK(std::fabs(v - capped_parabola_log_expansion(eps).value) < 0.1 * L);
    }
}

TEST_CASE("Hopf-Lax formula on closed-form cases") {
    // Linear flux transports the datum.
    CHECK(hopf_lax(Flux1D::linear(), InitialDatum1D::hat(), 0.4, 0.3) == doctest::Approx(0.9).epsilon(1e-9));
    // |p| flux: max(1 - |x| - t, 0) for the hat.
    for (double x : {-2.0, -0.5, 0.0, 0.25, 1.5}) {
        CHECK(std::fabs(hopf_lax(Flux1D::absolute(), InitialDatum1D::hat(), x, 1.0) -
                        std::max(1.0 - std::fabs(x) - 1.0, 0.0)) < 1e-9);
        CHECK(std::fabs(hopf_lax(Flux1D::absolute(), InitialDatum1D::hat(), x, 0.5) -
                        std::max(0.5 - std::fabs(x), 0.0)) < 1e-9);
    }
    // |p|^4 / 4 with -|x|: slopes stay +-1, so u = -|x| - t/4.
    for (double x : {-1.0, -0.3, 0.0, 0.7}) {
        CHECK(std::fabs(hopf_lax(Flux1D::abs_power(0.25, 4.0), InitialDatum1D::neg_abs(), x, 1.0) -
                        (-std::fabs(x) - 0.25)) < 1e-9);
    }
    CHECK_THROWS_AS(hopf_lax(Flux1D::odd_power(1.0, 3), InitialDatum1D::hat(), 0.0, 1.0), NonConvexFlux);
}

TEST_CASE("Hopf-Lax formula agrees with brute-force minimisation") {
    // F = |p|^{3/2}: L(v) = 4|v|^3/27.
    const Flux1D F = Flux1D::abs_power(1.0, 1.5);
    for (double M : {0.25, 1.0, 2.0}) {
        const InitialDatum1D g = InitialDatum1D::double_well(M);
        for (double x : {-2.0, -0.4, 0.0, 0.2, 0.5, 1.7}) {
            const double t = 1.0;
            double best = kInf;
            const int n = 2000000;
            for (int i = 0; i <= n; ++i) {
                const double y = -10.0 + 20.0 * i / n;
                const double v = std::fabs((x - y) / t);
                best = std::min(best, g(y) + t * 4.0 * v * v * v / 27.0);
            }
            INFO("M=", M, " x=", x);
            CHECK(std::fabs(hopf_lax(F, g, x, t) - best) < 1e-6);
        }
    }
}

TEST_CASE("exact limits of the vanishing-viscosity examples") {
    CHECK(exact_limit_solution("5.1", 1.0, 1.0) == -2.0);
    CHECK(exact_limit_solution("5.2", -0.5, 1.0) == -1.5);
    CHECK(exact_limit_solution("5.3", 0.25, 0.5) == 0.25);
    CHECK(exact_limit_solution("5.3", 2.0, 0.5) == 0.0);
    CHECK(exact_limit_solution("5.4", 0.0, 1.0) == 0.0);
    // At t = 0 the formula returns the datum.
    for (double x : {-2.0, -1.0, -0.1}) {
        CHECK(exact_limit_solution("5.4", x, 0.0) == doctest::Approx(InitialDatum1D::power32()(x)).epsilon(1e-13));
    }
    // u_t + (u_x)^3 = 0 by centred differences.
    const double h = 1e-5;
    for (double x : {-2.0, -1.0, -0.4}) {
        for (double t : {0.3, 0.8}) {
            const double ut = (exact_limit_solution("5.4", x, t + h) - exact_limit_solution("5.4", x, t - h)) / (2 * h);
            const double ux = (exact_limit_solution("5.4", x + h, t) - exact_limit_solution("5.4", x - h, t)) / (2 * h);
            CHECK(std::fabs(ut + ux * ux * ux) < 1e-8);
        }
    }
    CHECK_THROWS_AS(exact_limit_solution("5.4", 0.5, 1.0), DomainError);
    CHECK_THROWS_AS(exact_limit_solution("9.9", 0.0, 1.0), ConfigError);
}

TEST_CASE("Dirichlet boundary-layer solution") {
    for (double eps : {0.1, 0.01, std::ldexp(1.0, -10)}) {
        const double r = std::sqrt(eps);
        CHECK(dirichlet_ode_solution(eps, 0.0) == 1.0);
        CHECK(dirichlet_ode_solution(eps, 1.0) == r / (1.0 + r));
        CHECK(dirichlet_ode_solution(eps, 1.0) >= 0.5 * r);
    }
    for (double x : {0.5, 1.0, 2.0}) CHECK(dirichlet_ode_residual(0.01, x) < 1e-4);
    CHECK_THROWS_AS(dirichlet_ode_solution(-1.0, 1.0), ConfigError);
}

TEST_CASE("closed-form routines reject bad parameters") {
    CHECK_THROWS_AS(heat_kernel_solution(InitialDatum1D::hat(), 0.0, 0.0, 1.0), ConfigError);
    CHECK_THROWS_AS(hopf_cole_quadratic(InitialDatum1D::neg_abs(), 0.1, 0.0, -1.0), ConfigError);
    CHECK_THROWS_AS(hopf_lax(Flux1D::absolute(), InitialDatum1D::hat(), 0.0, 0.0), ConfigError);
}
