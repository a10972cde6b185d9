#include <cstdlib>
#include <string>

#include "parisian/simd.hpp"

namespace parisian::simd {

#ifdef PARISIAN_HAVE_AVX2
const KernelTable& avx2_kernels();
#endif

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return "scalar";
    case Isa::Avx2:
      return "avx2";
  }
  return "unknown";
}

const KernelTable* kernels_for(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return &scalar_kernels();
    case Isa::Avx2:
#ifdef PARISIAN_HAVE_AVX2
      if (__builtin_cpu_supports("avx2")) return &avx2_kernels();
#endif
      return nullptr;
  }
  return nullptr;
}

namespace {

const KernelTable& select() {
  if (const char* env = std::getenv("PARISIAN_SIMD")) {
    const std::string want(env);
    if (want == "scalar") return scalar_kernels();
    if (want == "avx2")
      if (const KernelTable* t = kernels_for(Isa::Avx2)) return *t;
  }
  if (const KernelTable* t = kernels_for(Isa::Avx2)) return *t;
  return scalar_kernels();
}

}  // namespace

const KernelTable& active() {
  static const KernelTable& table = select();
  return table;
}

}  // namespace parisian::simd
