#include "homoghj/fd_solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "homoghj/errors.hpp"

namespace homoghj {

namespace {

const Separable& require_separable(const HamiltonianSpec& H) {
    const auto* s = std::get_if<Separable>(&H);
    if (s == nullptr) throw DomainError("the finite-difference solver needs a separable 1-D Hamiltonian");
    return *s;
}

void check_finite(const std::vector<double>& v, double time) {
    for (double x : v) {
        if (!std::isfinite(x)) throw BlowUp("non-finite value at t = " + std::to_string(time));
    }
}

class ExplicitStepper {
public:
    ExplicitStepper(const FDConfig& cfg, const Separable& H, const SolveOptions& opts)
        : cfg_(cfg), check_gradient_(opts.check_gradient) {
        const simd::FluxKernel kern = simd::decompose(H.flux);
        step_ = simd::select_stencil(opts.isa, kern);
        args_.flux = kern;
        args_.inv_2dx = 1.0 / (2.0 * cfg.grid.dx());
        args_.eps_inv_dx2 = cfg.eps / (cfg.grid.dx() * cfg.grid.dx());
        if (H.potential.kind != Potential1D::Kind::zero) {
            potential_.resize(cfg.grid.nodes());
            for (std::size_t i = 0; i < potential_.size(); ++i) potential_[i] = H.potential(cfg.grid.x(i) / cfg.eps);
            args_.potential = potential_.data();
        }
    }

    /// u <- G(u) with the given step and ghosts; `scratch` receives the old values.
    void step(std::vector<double>& u, std::vector<double>& scratch, double dt, double ghost_left,
              double ghost_right, double time) {
        args_.dt = dt;
        args_.ghost_left = ghost_left;
        args_.ghost_right = ghost_right;
        scratch.swap(u);
        const double pmax = step_(args_, scratch.data(), u.data(), u.size());
        if (check_gradient_ && pmax > cfg_.gradient_radius * (1.0 + 1e-9)) {
            throw GradientBoundExceeded("discrete gradient " + std::to_string(pmax) + " exceeds radius " +
                                        std::to_string(cfg_.gradient_radius) + " at t = " + std::to_string(time));
        }
    }

private:
    FDConfig cfg_;
    bool check_gradient_;
    simd::StencilFn step_ = nullptr;
    simd::StencilArgs args_;
    std::vector<double> potential_;
};

}  // namespace

Grid1D Grid1D::with_spacing(double a, double b, double dx) {
    if (!(dx > 0.0) || !(b > a)) throw ConfigError("grid needs b > a and dx > 0");
    const double cells = (b - a) / dx;
    const double rounded = std::round(cells);
    if (std::fabs(cells - rounded) > 1e-9 * std::max(1.0, cells)) {
        throw ConfigError("domain length " + std::to_string(b - a) + " is not a multiple of dx = " +
                          std::to_string(dx));
    }
    Grid1D g{a, b, static_cast<long>(rounded)};
    g.validate();
    return g;
}

void Grid1D::validate() const {
    if (!std::isfinite(a) || !std::isfinite(b) || !(b > a)) throw ConfigError("grid needs finite a < b");
    if (n_cells < 1) throw ConfigError("grid needs at least one cell");
}

void FDConfig::validate(const Flux1D& flux) const {
    grid.validate();
    if (!(eps > 0.0) || !std::isfinite(eps)) throw ConfigError("eps must be positive");
    if (!(T >= 0.0) || !std::isfinite(T)) throw ConfigError("T must be non-negative");
    if (!(c_cfl > 0.0 && c_cfl <= 1.0)) throw ConfigError("c_cfl must lie in (0, 1]");
    if (!(gradient_radius > 0.0)) throw ConfigError("gradient_radius must be positive");
    const double lo = eps_min(grid.dx(), flux, gradient_radius);
    if (eps < lo * (1.0 - 1e-12)) {
        throw DomainError("eps = " + std::to_string(eps) + " is below the monotonicity bound eps_min = " +
                          std::to_string(lo));
    }
}

double eps_min(double dx, const Flux1D& flux, double radius) {
    if (!(dx > 0.0) || !(radius > 0.0)) throw ConfigError("eps_min needs dx > 0 and radius > 0");
    return 0.5 * dx * lipschitz_bound_F(flux, radius);
}

std::vector<double> eps_schedule(double dx, const Flux1D& flux, double radius, int k_max) {
    if (k_max < 0) throw ConfigError("k_max must be non-negative");
    const double base = eps_min(dx, flux, radius);
    std::vector<double> out;
    for (int k = k_max; k >= 0; --k) out.push_back(std::ldexp(base, k));
    return out;
}

double default_gradient_radius(const Separable& H, const InitialDatum1D& g, double a, double b) {
    double lip = g.lipschitz_on(a, b);
    if (!std::isfinite(lip)) throw DomainError("initial datum is not Lipschitz on the domain");
    if (H.potential.kind == Potential1D::Kind::zero) return lip > 0.0 ? lip : 1.0;
    const Flux1D& F = H.flux;
    if (F.kind == Flux1D::Kind::abs_power && F.c > 0.0) {
        return std::pow((F.c * std::pow(lip, F.m) + H.potential.oscillation()) / F.c, 1.0 / F.m);
    }
    return lip + 1.0;
}

GridFunction1D advance(const GridFunction1D& state, const FDConfig& cfg, const HamiltonianSpec& H) {
    const Separable& sep = require_separable(H);
    cfg.validate(sep.flux);
    if (state.values.size() != cfg.grid.nodes()) throw ConfigError("state does not match the grid");
    if (state.time >= cfg.T) return state;

    SolveOptions opts;
    opts.check_gradient = false;
    ExplicitStepper stepper(cfg, sep, opts);
    GridFunction1D next = state;
    std::vector<double> scratch(next.values.size());
    const auto& u = state.values;
    const std::size_t n = u.size();
    const double gl = n > 1 ? 2.0 * u[0] - u[1] : u[0];
    const double gr = n > 1 ? 2.0 * u[n - 1] - u[n - 2] : u[0];
    const double dt = std::min(cfg.dt(), cfg.T - state.time);
    stepper.step(next.values, scratch, dt, gl, gr, state.time);
    check_finite(next.values, state.time + dt);
    next.time = dt == cfg.dt() ? state.time + dt : cfg.T;
    return next;
}

GridFunction1D solve_from(const FDConfig& cfg, const HamiltonianSpec& H, std::vector<double> initial,
                          const SolveOptions& opts) {
    const Separable& sep = require_separable(H);
    cfg.validate(sep.flux);
    if (initial.size() != cfg.grid.nodes()) throw ConfigError("initial values do not match the grid");
    check_finite(initial, 0.0);

    GridFunction1D state{cfg.grid, std::move(initial), 0.0};
    if (cfg.T == 0.0) return state;

    auto& u = state.values;
    const std::size_t n = u.size();
    const double step_left = n > 1 ? u[0] - u[1] : 0.0;
    const double step_right = n > 1 ? u[n - 1] - u[n - 2] : 0.0;

    const double dt = cfg.dt();
    const long full = static_cast<long>(std::floor(cfg.T / dt));
    double last = cfg.T - static_cast<double>(full) * dt;
    if (last <= 1e-12 * dt) last = 0.0;

    ExplicitStepper stepper(cfg, sep, opts);
    std::vector<double> scratch(n);
    for (long k = 0; k < full; ++k) {
        const double t = static_cast<double>(k) * dt;
        stepper.step(u, scratch, dt, u[0] + step_left, u[n - 1] + step_right, t);
        if ((k & 255) == 255) check_finite(u, t + dt);
    }
    if (last > 0.0) stepper.step(u, scratch, last, u[0] + step_left, u[n - 1] + step_right, cfg.T - last);
    check_finite(u, cfg.T);
    state.time = cfg.T;
    return state;
}

GridFunction1D solve(const FDConfig& cfg, const HamiltonianSpec& H, const InitialDatum1D& g,
                     const SolveOptions& opts) {
    cfg.grid.validate();
    std::vector<double> init(cfg.grid.nodes());
    for (std::size_t i = 0; i < init.size(); ++i) init[i] = g(cfg.grid.x(i));
    return solve_from(cfg, H, std::move(init), opts);
}

double sup_error(const GridFunction1D& u, const std::function<double(double)>& reference, double w0, double w1) {
    double err = 0.0;
    bool any = false;
    for (std::size_t i = 0; i < u.values.size(); ++i) {
        const double x = u.grid.x(i);
        if (x < w0 || x > w1) continue;
        any = true;
        err = std::max(err, std::fabs(u.values[i] - reference(x)));
    }
    if (!any) throw EmptyWindow("no grid node lies in the window [" + std::to_string(w0) + ", " + std::to_string(w1) + "]");
    return err;
}

double sup_difference(const GridFunction1D& u, const GridFunction1D& v, double w0, double w1) {
    if (u.values.size() != v.values.size() || u.grid.a != v.grid.a || u.grid.b != v.grid.b) {
        throw ConfigError("sup_difference needs two functions on the same grid");
    }
    double err = 0.0;
    bool any = false;
    for (std::size_t i = 0; i < u.values.size(); ++i) {
        const double x = u.grid.x(i);
        if (x < w0 || x > w1) continue;
        any = true;
        err = std::max(err, std::fabs(u.values[i] - v.values[i]));
    }
    if (!any) throw EmptyWindow("no grid node lies in the window");
    return err;
}

double discrete_lipschitz(const GridFunction1D& u) {
    double lip = 0.0;
    const double dx = u.grid.dx();
    for (std::size_t i = 0; i + 1 < u.values.size(); ++i) lip = std::max(lip, std::fabs(u.values[i + 1] - u.values[i]) / dx);
    return lip;
}

}  // namespace homoghj
