#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "spacelog/kernels.hpp"

namespace spacelog::kernels {
namespace {

std::vector<const KernelTable*> variants() {
  std::vector<const KernelTable*> v;
  if (const auto* t = avx2_table()) v.push_back(t);
  if (const auto* t = neon_table()) v.push_back(t);
  return v;
}

std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

TEST(Kernels, ScalarReference) {
  std::vector<double> x{1, -2, 3}, y{4, 5, 6};
  const auto& s = scalar_table();
  s.axpy(2.0, x.data(), y.data(), 3);
  EXPECT_EQ(y, (std::vector<double>{6, 1, 12}));
  EXPECT_EQ(s.dot(x.data(), y.data(), 3), 6 - 2 + 36);
  EXPECT_EQ(s.max_abs(x.data(), 3), 3.0);
  EXPECT_EQ(s.max_abs(x.data(), 0), 0.0);
  s.scale(-1.0, x.data(), 3);
  EXPECT_EQ(x, (std::vector<double>{-1, 2, -3}));
}

TEST(Kernels, VariantsMatchScalar) {
  std::mt19937_64 rng(7);
  const auto& ref = scalar_table();
  for (const KernelTable* t : variants()) {
    SCOPED_TRACE(t->name);
    for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 7u, 8u, 17u, 64u, 1001u}) {
      const auto x = random_vector(rng, n);
      auto y1 = random_vector(rng, n);
      auto y2 = y1;
      ref.axpy(0.37, x.data(), y1.data(), n);
      t->axpy(0.37, x.data(), y2.data(), n);
      EXPECT_EQ(y1, y2);
      EXPECT_EQ(ref.max_abs(x.data(), n), t->max_abs(x.data(), n));
      double mag = 0.0;
      for (std::size_t i = 0; i < n; ++i) mag += std::fabs(x[i] * y1[i]);
      EXPECT_NEAR(ref.dot(x.data(), y1.data(), n), t->dot(x.data(), y1.data(), n), 1e-13 * (mag + 1.0));
      auto z1 = x, z2 = x;
      ref.scale(-2.5, z1.data(), n);
      t->scale(-2.5, z2.data(), n);
      EXPECT_EQ(z1, z2);
    }
  }
}

TEST(Kernels, ScopedSelectionRestores) {
  const Isa before = active().isa;
  {
    ScopedIsa scalar(Isa::kScalar);
    EXPECT_TRUE(scalar.ok());
    EXPECT_EQ(active().isa, Isa::kScalar);
  }
  EXPECT_EQ(active().isa, before);
  if (!neon_table()) {
    ScopedIsa neon(Isa::kNeon);
    EXPECT_FALSE(neon.ok());
    EXPECT_EQ(active().isa, before);
  }
}

}  // namespace
}  // namespace spacelog::kernels
