#pragma once

#include <string_view>

#include "homoghj/hamiltonians.hpp"
#include "homoghj/quadrature.hpp"

namespace homoghj {

/// Leading-order asymptotic description of a reference value.
struct Expansion {
    enum class Scale { sqrt_t_eps, eps_log_eps, eps };

    double value = 0.0;
    double leading_coefficient = 0.0;
    Scale scale = Scale::eps;
};

/// (e - 1) / (sqrt(pi) e): lower-bound constant of the linear-flux gap at (0, 1).
double linear_gap_constant();

/// Solution of u_t + u_x = eps u_xx with u(.,0) = g, by quadrature against the heat kernel.
double heat_kernel_solution(const InitialDatum1D& g, double eps, double x, double t,
                            const QuadratureConfig& q = {});

/// Same solution for g = hat, written through erf (independent of the quadrature path).
double heat_kernel_hat_closed_form(double eps, double x, double t);

/// Hopf-Cole representation of u_t + |u_x|^2/2 = eps u_xx with u(.,0) = g.
/// The Gaussian-weighted integral is rescaled by its peak before integration.
double hopf_cole_quadratic(const InitialDatum1D& g, double eps, double x, double t,
                           const QuadratureConfig& q = {});

/// u^eps(0,t) for the quadratic flux and g = -|x|: -t/2 - 2 eps log(1 + erf(sqrt(t)/(2 sqrt(eps)))).
double hopf_cole_neg_abs_closed_form(double eps, double t);

/// u^eps(0,t) ~ -t/2 - 2 sqrt(t eps)/sqrt(pi) for t << eps.
Expansion neg_abs_small_time_expansion(double eps, double t);

/// u^eps(0,1) - u(0,1) for the quadratic flux, with the Hopf-Lax minimiser of
/// h(y) = g(y) + y^2/2 located on [-10, 10].
double quad_log_error(const InitialDatum1D& g, double eps, const QuadratureConfig& q = {});

/// Leading behaviour eps log eps + eps log pi of quad_log_error for the capped parabola.
Expansion capped_parabola_log_expansion(double eps);

/// inf_y { g(y) + t L((x - y)/t) } for a convex flux.
double hopf_lax(const Flux1D& flux, const InitialDatum1D& g, double x, double t);

/// Closed-form limits of the vanishing-viscosity examples "5.1" .. "5.4".
double exact_limit_solution(std::string_view example_id, double x, double t);

/// sqrt(eps) / (x + sqrt(eps)), the solution of 2u^3 = eps u'' on (0, inf), u(0) = 1.
double dirichlet_ode_solution(double eps, double x);

/// |2u^3 - eps u''| at x with u'' from centred differences of the given spacing.
double dirichlet_ode_residual(double eps, double x, double spacing = 1e-4);

}  // namespace homoghj
