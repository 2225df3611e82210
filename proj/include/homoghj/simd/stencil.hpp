#pragma once

#include <cstddef>
#include <string_view>

#include "homoghj/simd/flux_eval.hpp"

namespace homoghj::simd {

/// Coefficients of one explicit step
///   out_i = u_i - dt * [ F((u_{i+1} - u_{i-1}) / (2dx)) + V_i - eps (u_{i+1} - 2u_i + u_{i-1}) / dx^2 ]
/// with u_{-1} = ghost_left and u_n = ghost_right.
struct StencilArgs {
    FluxKernel flux;
    double dt = 0.0;
    double inv_2dx = 0.0;
    double eps_inv_dx2 = 0.0;
    const double* potential = nullptr;  // V_i per node, or null for V = 0
    double ghost_left = 0.0;
    double ghost_right = 0.0;
};

/// Writes out[0..n) and returns max_i |central gradient|.
using StencilFn = double (*)(const StencilArgs& args, const double* u, double* out, std::size_t n);

double stencil_step_scalar(const StencilArgs& args, const double* u, double* out, std::size_t n);
#if defined(HOMOGHJ_HAVE_AVX2)
double stencil_step_avx2(const StencilArgs& args, const double* u, double* out, std::size_t n);
#endif

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa);
bool isa_available(Isa isa);
/// Widest available ISA, unless HOMOGHJ_ISA=scalar is set in the environment.
Isa preferred_isa();
/// Kernel for the requested ISA; falls back to scalar when the ISA is unavailable
/// or the flux needs the generic std::pow path.
StencilFn select_stencil(Isa isa, const FluxKernel& flux);

}  // namespace homoghj::simd
