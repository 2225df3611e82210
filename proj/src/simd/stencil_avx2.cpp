// Compiled with -mavx2 only; reached through select_stencil after a CPUID check.

#include <immintrin.h>

#include <algorithm>
#include <cmath>

#include "homoghj/simd/stencil.hpp"

namespace homoghj::simd {

namespace {

inline __m256d flux_avx2(const FluxKernel& kern, __m256d p) {
    const __m256d sign_mask = _mm256_set1_pd(-0.0);
    const __m256d a = kern.use_abs ? _mm256_andnot_pd(sign_mask, p) : p;
    __m256d r = _mm256_set1_pd(1.0);
    if (kern.k >= 1) {
        r = a;
        for (int j = 1; j < kern.k; ++j) r = _mm256_mul_pd(r, a);
    }
    if (kern.half) r = _mm256_mul_pd(r, _mm256_sqrt_pd(a));
    return _mm256_mul_pd(_mm256_set1_pd(kern.c), r);
}

}  // namespace

double stencil_step_avx2(const StencilArgs& args, const double* u, double* out, std::size_t n) {
    if (n < 6) return stencil_step_scalar(args, u, out, n);

    const bool has_v = args.potential != nullptr;
    const double* V = args.potential;

    // boundary nodes through the scalar reference (they read the ghosts)
    double pmax = 0.0;
    {
        StencilArgs edge = args;
        edge.ghost_right = u[1];
        edge.potential = has_v ? V : nullptr;
        pmax = std::max(pmax, stencil_step_scalar(edge, u, out, 1));
        edge.ghost_left = u[n - 2];
        edge.ghost_right = args.ghost_right;
        edge.potential = has_v ? V + (n - 1) : nullptr;
        pmax = std::max(pmax, stencil_step_scalar(edge, u + (n - 1), out + (n - 1), 1));
    }

    const __m256d two = _mm256_set1_pd(2.0);
    const __m256d inv2dx = _mm256_set1_pd(args.inv_2dx);
    const __m256d dt = _mm256_set1_pd(args.dt);
    const __m256d eps_dx2 = _mm256_set1_pd(args.eps_inv_dx2);
    const __m256d sign_mask = _mm256_set1_pd(-0.0);
    __m256d vmax = _mm256_setzero_pd();

    std::size_t i = 1;
    for (; i + 4 < n; i += 4) {
        const __m256d ul = _mm256_loadu_pd(u + i - 1);
        const __m256d uc = _mm256_loadu_pd(u + i);
        const __m256d ur = _mm256_loadu_pd(u + i + 1);
        const __m256d p = _mm256_mul_pd(_mm256_sub_pd(ur, ul), inv2dx);
        const __m256d lap = _mm256_add_pd(_mm256_sub_pd(ur, _mm256_mul_pd(two, uc)), ul);
        __m256d h = flux_avx2(args.flux, p);
        if (has_v) h = _mm256_add_pd(h, _mm256_loadu_pd(V + i));
        const __m256d rhs = _mm256_sub_pd(h, _mm256_mul_pd(eps_dx2, lap));
        _mm256_storeu_pd(out + i, _mm256_sub_pd(uc, _mm256_mul_pd(dt, rhs)));
        vmax = _mm256_max_pd(vmax, _mm256_andnot_pd(sign_mask, p));
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, vmax);
    pmax = std::max({pmax, lanes[0], lanes[1], lanes[2], lanes[3]});

    // remainder interior nodes [i, n-1)
    if (i < n - 1) {
        StencilArgs rest = args;
        rest.ghost_left = u[i - 1];
        rest.ghost_right = u[n - 1];
        rest.potential = has_v ? V + i : nullptr;
        pmax = std::max(pmax, stencil_step_scalar(rest, u + i, out + i, n - 1 - i));
    }
    return pmax;
}

}  // namespace homoghj::simd
