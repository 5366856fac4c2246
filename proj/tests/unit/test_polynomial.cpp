#include <gtest/gtest.h>

#include <vector>

#include "qes/polynomial.hpp"

namespace qes {
namespace {

TEST(Polynomial, EvalAndDerivative) {
  const std::vector<double> p{1.0, -3.0, 2.0};  // 2z^2 - 3z + 1
  EXPECT_EQ(poly_eval(std::span<const double>(p), cplx(2.0)), cplx(3.0));
  const std::vector<double> d = poly_derivative(std::span<const double>(p));
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d[0], -3.0);
  EXPECT_EQ(d[1], 4.0);
}

TEST(Polynomial, MonicFromRoots) {
  const std::vector<cplx> roots{1.0, -2.0, 3.0};
  const std::vector<cplx> c = monic_from_roots(roots);
  const std::vector<cplx> want{6.0, -5.0, -2.0, 1.0};
  ASSERT_EQ(c.size(), want.size());
  for (std::size_t i = 0; i < c.size(); ++i) EXPECT_NEAR(std::abs(c[i] - want[i]), 0.0, 1e-14);
}

TEST(Polynomial, RealRootsSorted) {
  const std::vector<double> p{6.0, -5.0, -2.0, 1.0};
  const std::vector<cplx> r = polynomial_roots(p);
  ASSERT_EQ(r.size(), 3u);
  EXPECT_NEAR(r[0].real(), -2.0, 1e-13);
  EXPECT_NEAR(r[1].real(), 1.0, 1e-13);
  EXPECT_NEAR(r[2].real(), 3.0, 1e-13);
}

TEST(Polynomial, ConjugatePair) {
  const std::vector<double> p{5.0, 2.0, 1.0};  // roots -1 +- 2i
  const std::vector<cplx> r = polynomial_roots(p);
  ASSERT_EQ(r.size(), 2u);
  EXPECT_NEAR(std::abs(r[0] - cplx(-1.0, -2.0)), 0.0, 1e-13);
  EXPECT_NEAR(std::abs(r[1] - cplx(-1.0, 2.0)), 0.0, 1e-13);
}

TEST(Polynomial, TrailingZerosIgnored) {
  const std::vector<double> p{-2.0, 1.0, 0.0, 0.0};
  const std::vector<cplx> r = polynomial_roots(p);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_NEAR(r[0].real(), 2.0, 1e-14);
  EXPECT_TRUE(polynomial_roots(std::vector<double>{3.0}).empty());
}

TEST(Polynomial, EffectiveDegree) {
  EXPECT_EQ(effective_degree(std::vector<double>{1.0, 2.0, 1e-14}), 1);
  EXPECT_EQ(effective_degree(std::vector<double>{0.0, 0.0}), -1);
  EXPECT_EQ(effective_degree(std::vector<double>{0.0, 0.0, 3.0}), 2);
}

}  // namespace
}  // namespace qes
