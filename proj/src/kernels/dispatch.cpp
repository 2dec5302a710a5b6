#include <cstdlib>
#include <string_view>

#include "spacelog/kernels.hpp"

namespace spacelog::kernels {

namespace detail {
#if defined(SPACELOG_HAVE_AVX2)
const KernelTable& avx2_table_unchecked();
#endif
#if defined(SPACELOG_HAVE_NEON)
const KernelTable& neon_table_unchecked();
#endif
}  // namespace detail

const KernelTable* avx2_table() {
#if defined(SPACELOG_HAVE_AVX2)
  static const bool supported = __builtin_cpu_supports("avx2");
  return supported ? &detail::avx2_table_unchecked() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable* neon_table() {
#if defined(SPACELOG_HAVE_NEON)
  // Advanced SIMD is mandatory on aarch64.
  return &detail::neon_table_unchecked();
#else
  return nullptr;
#endif
}

namespace {

const KernelTable* table_for(Isa isa) {
  switch (isa) {
    case Isa::kScalar: return &scalar_table();
    case Isa::kAvx2: return avx2_table();
    case Isa::kNeon: return neon_table();
  }
  return nullptr;
}

const KernelTable* initial_table() {
  if (const char* env = std::getenv("SPACELOG_KERNELS")) {
    std::string_view want(env);
    if (want == "scalar") return &scalar_table();
    if (want == "avx2" && avx2_table()) return avx2_table();
    if (want == "neon" && neon_table()) return neon_table();
  }
  if (const KernelTable* t = avx2_table()) return t;
  if (const KernelTable* t = neon_table()) return t;
  return &scalar_table();
}

const KernelTable*& current() {
  static const KernelTable* table = initial_table();
  return table;
}

}  // namespace

const KernelTable& active() { return *current(); }

bool select(Isa isa) {
  const KernelTable* t = table_for(isa);
  if (!t) return false;
  current() = t;
  return true;
}

ScopedIsa::ScopedIsa(Isa isa) : previous_(&active()), ok_(select(isa)) {}

ScopedIsa::~ScopedIsa() { current() = previous_; }

}  // namespace spacelog::kernels
