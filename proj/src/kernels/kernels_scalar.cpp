#include <cmath>

#include "spacelog/kernels.hpp"

namespace spacelog::kernels {
namespace {

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

double max_abs_scalar(const double* x, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) m = std::fmax(m, std::fabs(x[i]));
  return m;
}

void scale_scalar(double alpha, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] *= alpha;
}

constexpr KernelTable kScalar{Isa::kScalar, "scalar", axpy_scalar, dot_scalar, max_abs_scalar,
                              scale_scalar};

}  // namespace

const KernelTable& scalar_table() { return kScalar; }

}  // namespace spacelog::kernels
