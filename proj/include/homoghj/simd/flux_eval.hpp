#pragma once

// Shared decomposition of a flux into the elementary operations the stencil
// kernels run. The scalar reference and every SIMD variant evaluate
// c * a^k * sqrt(a)^[half] with a = |p| (even fluxes) or a = p (odd fluxes),
// multiplying in the same order so all paths agree bit for bit.

#include <cmath>

#include "homoghj/hamiltonians.hpp"

namespace homoghj::simd {

struct FluxKernel {
    double c = 1.0;
    bool use_abs = true;   // a = |p| when true, a = p otherwise
    int k = 1;             // integer part of the exponent
    bool half = false;     // extra factor sqrt(a)
    bool generic = false;  // exponent not a multiple of 1/2: std::pow path
    double m = 1.0;
};

inline FluxKernel decompose(const Flux1D& flux) {
    FluxKernel kern;
    switch (flux.kind) {
        case Flux1D::Kind::linear:
            kern = {1.0, false, 1, false, false, 1.0};
            break;
        case Flux1D::Kind::abs:
            kern = {1.0, true, 1, false, false, 1.0};
            break;
        case Flux1D::Kind::odd_power:
            kern = {flux.c, false, static_cast<int>(flux.m), false, false, flux.m};
            break;
        case Flux1D::Kind::abs_power: {
            kern.c = flux.c;
            kern.use_abs = true;
            kern.m = flux.m;
            const double twice = 2.0 * flux.m;
            if (twice == std::floor(twice) && twice <= 64.0) {
                kern.k = static_cast<int>(std::floor(flux.m));
                kern.half = (flux.m - kern.k) == 0.5;
            } else {
                kern.generic = true;
            }
            break;
        }
    }
    return kern;
}

inline double eval_flux(const FluxKernel& kern, double p) {
    const double a = kern.use_abs ? std::fabs(p) : p;
    if (kern.generic) return kern.c * std::pow(a, kern.m);
    double r = 1.0;
    if (kern.k >= 1) {
        r = a;
        for (int j = 1; j < kern.k; ++j) r = r * a;
    }
    if (kern.half) r = r * std::sqrt(a);
    return kern.c * r;
}

}  // namespace homoghj::simd
