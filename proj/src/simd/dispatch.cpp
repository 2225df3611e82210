#include <cstdlib>
#include <string>

#include "homoghj/simd/stencil.hpp"

namespace homoghj::simd {

std::string_view isa_name(Isa isa) {
    switch (isa) {
        case Isa::scalar:
            return "scalar";
        case Isa::avx2:
            return "avx2";
    }
    return "?";
}

bool isa_available(Isa isa) {
    switch (isa) {
        case Isa::scalar:
            return true;
        case Isa::avx2:
#if defined(HOMOGHJ_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
            return __builtin_cpu_supports("avx2");
#else
            return false;
#endif
    }
    return false;
}

Isa preferred_isa() {
    if (const char* env = std::getenv("HOMOGHJ_ISA"); env != nullptr && std::string(env) == "scalar") {
        return Isa::scalar;
    }
    return isa_available(Isa::avx2) ? Isa::avx2 : Isa::scalar;
}

StencilFn select_stencil(Isa isa, const FluxKernel& flux) {
#if defined(HOMOGHJ_HAVE_AVX2)
    if (isa == Isa::avx2 && !flux.generic && isa_available(Isa::avx2)) return &stencil_step_avx2;
#else
    (void)isa;
    (void)flux;
#endif
    return &stencil_step_scalar;
}

}  // namespace homoghj::simd
