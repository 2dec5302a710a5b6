#pragma once
// Dense vector kernels used by the simplex inner loops.
//
// Every kernel has a scalar reference implementation; AVX2 (x86-64) and NEON
// (aarch64) variants are compiled when the toolchain targets them and picked
// at runtime from the CPU feature bits. SPACELOG_KERNELS=scalar|avx2|neon
// overrides the choice. Variants must agree with the scalar reference: axpy
// and max_abs bit-for-bit, dot within reassociation error.

#include <cstddef>
#include <span>

namespace spacelog::kernels {

enum class Isa { kScalar, kAvx2, kNeon };

struct KernelTable {
  Isa isa;
  const char* name;
  // y[i] += alpha * x[i]
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  double (*dot)(const double* x, const double* y, std::size_t n);
  double (*max_abs)(const double* x, std::size_t n);
  // y[i] *= alpha
  void (*scale)(double alpha, double* y, std::size_t n);
};

const KernelTable& scalar_table();
/// nullptr when not compiled in or the CPU lacks the extension.
const KernelTable* avx2_table();
const KernelTable* neon_table();

const KernelTable& active();
/// Switches the process-wide table; returns false if `isa` is unavailable.
/// Not thread-safe; meant for tests and the CLI start-up path.
bool select(Isa isa);

/// Restores the previously active table on scope exit.
class ScopedIsa {
 public:
  explicit ScopedIsa(Isa isa);
  ~ScopedIsa();
  ScopedIsa(const ScopedIsa&) = delete;
  ScopedIsa& operator=(const ScopedIsa&) = delete;
  bool ok() const { return ok_; }

 private:
  const KernelTable* previous_;
  bool ok_;
};

inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  active().axpy(alpha, x.data(), y.data(), x.size());
}
inline double dot(std::span<const double> x, std::span<const double> y) {
  return active().dot(x.data(), y.data(), x.size());
}
inline double max_abs(std::span<const double> x) { return active().max_abs(x.data(), x.size()); }
inline void scale(double alpha, std::span<double> y) { active().scale(alpha, y.data(), y.size()); }

}  // namespace spacelog::kernels
