#include <cstdlib>
#include <string>

#include "edgetrack/error.hpp"
#include "edgetrack/simd/kernels.hpp"

namespace edgetrack::simd {

#if EDGETRACK_HAVE_AVX2
const KernelTable& avx2_kernels();
#endif
#if EDGETRACK_HAVE_NEON
const KernelTable& neon_kernels();
#endif

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
  }
  return "unknown";
}

std::vector<Isa> available_isas() {
  std::vector<Isa> isas{Isa::Scalar};
#if EDGETRACK_HAVE_AVX2
  if (__builtin_cpu_supports("avx2")) isas.push_back(Isa::Avx2);
#endif
#if EDGETRACK_HAVE_NEON
  isas.push_back(Isa::Neon);
#endif
  return isas;
}

const KernelTable& kernels_for(Isa isa) {
  for (Isa have : available_isas()) {
    if (have != isa) continue;
    switch (isa) {
      case Isa::Scalar: return scalar_kernels();
#if EDGETRACK_HAVE_AVX2
      case Isa::Avx2: return avx2_kernels();
#endif
#if EDGETRACK_HAVE_NEON
      case Isa::Neon: return neon_kernels();
#endif
      default: break;
    }
  }
  throw Error(ErrorCode::InvalidConfig,
              "kernel variant '" + std::string(to_string(isa)) + "' unavailable on this CPU");
}

const KernelTable& select_kernels(const char* forced) {
  const auto isas = available_isas();
  if (forced) {
    const std::string name(forced);
    for (Isa isa : isas)
      if (to_string(isa) == name) return kernels_for(isa);
  }
  return kernels_for(isas.back());
}

const KernelTable& active_kernels() {
  static const KernelTable& table = select_kernels(std::getenv("EDGETRACK_SIMD"));
  return table;
}

}  // namespace edgetrack::simd
