#include <algorithm>
#include <cmath>

#include "homoghj/simd/stencil.hpp"

namespace homoghj::simd {

namespace {

inline double node_update(const StencilArgs& args, double ul, double uc, double ur, double v, bool has_v,
                          double& pmax) {
    const double p = (ur - ul) * args.inv_2dx;
    const double lap = (ur - 2.0 * uc) + ul;
    double h = eval_flux(args.flux, p);
    if (has_v) h = h + v;
    pmax = std::max(pmax, std::fabs(p));
    return uc - args.dt * (h - args.eps_inv_dx2 * lap);
}

}  // namespace

double stencil_step_scalar(const StencilArgs& args, const double* u, double* out, std::size_t n) {
    if (n == 0) return 0.0;
    const bool has_v = args.potential != nullptr;
    const double* V = args.potential;
    double pmax = 0.0;
    if (n == 1) {
        out[0] = node_update(args, args.ghost_left, u[0], args.ghost_right, has_v ? V[0] : 0.0, has_v, pmax);
        return pmax;
    }
    out[0] = node_update(args, args.ghost_left, u[0], u[1], has_v ? V[0] : 0.0, has_v, pmax);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        out[i] = node_update(args, u[i - 1], u[i], u[i + 1], has_v ? V[i] : 0.0, has_v, pmax);
    }
    out[n - 1] = node_update(args, u[n - 2], u[n - 1], args.ghost_right, has_v ? V[n - 1] : 0.0, has_v, pmax);
    return pmax;
}

}  // namespace homoghj::simd
