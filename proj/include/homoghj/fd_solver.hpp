#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "homoghj/hamiltonians.hpp"
#include "homoghj/simd/stencil.hpp"

namespace homoghj {

/// Uniform grid on [a, b] with n_cells cells; node i sits at a + i*dx.
struct Grid1D {
    double a = 0.0;
    double b = 1.0;
    long n_cells = 1;

    /// Grid on [a, b] whose spacing is exactly dx; (b - a)/dx must be an integer up to 1e-9.
    static Grid1D with_spacing(double a, double b, double dx);

    double dx() const { return (b - a) / static_cast<double>(n_cells); }
    std::size_t nodes() const { return static_cast<std::size_t>(n_cells) + 1; }
    double x(std::size_t i) const { return a + static_cast<double>(i) * dx(); }
    void validate() const;
};

struct FDConfig {
    Grid1D grid;
    double eps = 1.0;
    double T = 1.0;
    double c_cfl = 0.9;
    /// Radius of the gradient ball on which max|F'| is taken.
    double gradient_radius = 1.0;

    double dt() const { return c_cfl * grid.dx() * grid.dx() / (2.0 * eps); }
    /// Throws ConfigError on bad fields and DomainError when eps < eps_min.
    void validate(const Flux1D& flux) const;
};

struct GridFunction1D {
    Grid1D grid;
    std::vector<double> values;
    double time = 0.0;
};

struct SolveOptions {
    simd::Isa isa = simd::preferred_isa();
    /// Abort with GradientBoundExceeded when a central difference leaves the gradient ball.
    bool check_gradient = true;
};

/// 1/2 dx max_{|p| <= radius} |F'(p)|.
double eps_min(double dx, const Flux1D& flux, double radius);

/// [2^k_max eps_min, ..., 2 eps_min, eps_min].
std::vector<double> eps_schedule(double dx, const Flux1D& flux, double radius, int k_max = 9);

/// Gradient radius used when none is given. Without a potential the scheme does
/// not increase the Lipschitz constant of g, so Lip(g) on [a, b] is enough; with a
/// potential the energy bound F(|u_x|) <= F(Lip g) + osc V is used for c|p|^m and
/// Lip(g) + 1 otherwise.
double default_gradient_radius(const Separable& H, const InitialDatum1D& g, double a, double b);

/// One explicit step (shortened so time does not pass cfg.T). Ghost values come
/// from linear extrapolation u_{-1} = 2u_0 - u_1, u_{n+1} = 2u_n - u_{n-1}.
GridFunction1D advance(const GridFunction1D& state, const FDConfig& cfg, const HamiltonianSpec& H);

/// Marches u^0 = g(x_i) to time cfg.T. The boundary ghosts continue the
/// initial end slopes, u_{-1} = u_0 - s_a dx with s_a = (g_1 - g_0)/dx, which
/// keeps the update monotone at the boundary nodes.
GridFunction1D solve(const FDConfig& cfg, const HamiltonianSpec& H, const InitialDatum1D& g,
                     const SolveOptions& opts = {});

/// Same, from arbitrary nodal initial values.
GridFunction1D solve_from(const FDConfig& cfg, const HamiltonianSpec& H, std::vector<double> initial,
                          const SolveOptions& opts = {});

/// max |u_i - reference(x_i)| over nodes with w0 <= x_i <= w1. Throws EmptyWindow.
double sup_error(const GridFunction1D& u, const std::function<double(double)>& reference, double w0, double w1);

/// max |u_i - v_i| over window nodes of two functions on the same grid.
double sup_difference(const GridFunction1D& u, const GridFunction1D& v, double w0, double w1);

/// max_i |u_{i+1} - u_i| / dx.
double discrete_lipschitz(const GridFunction1D& u);

}  // namespace homoghj
