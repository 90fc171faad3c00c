#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "maxplus/error.hpp"
#include "maxplus/matrix.hpp"

using namespace maxplus;
using fx::mat;
using fx::Q;
using fx::X;

namespace {

Q brute_mul(const Q& a, const Q& b) {
  Q c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j)
      for (std::size_t k = 0; k < a.size(); ++k) c(i, j) = oplus(c(i, j), otimes(a(i, k), b(k, j)));
  return c;
}

}  // namespace

TEST(Scalar, ZeroIsAbsorbingAndNeutral) {
  const fx::T z = fx::T::zero(), one = fx::T::unit(), x = fx::q(-3, 2);
  EXPECT_EQ(oplus(z, x), x);
  EXPECT_EQ(otimes(z, x), z);
  EXPECT_EQ(otimes(one, x), x);
  EXPECT_TRUE(z < x);
  EXPECT_FALSE(x < z);
}

TEST(Scalar, DoubleNegativeInfinityNeverBecomesNaN) {
  const Tropical<double> z, inf_like(-INFINITY);
  EXPECT_TRUE(z.is_zero());
  EXPECT_TRUE(inf_like.is_zero());
  EXPECT_TRUE(otimes(z, Tropical<double>(5.0)).is_zero());
  EXPECT_TRUE(Tropical<double>(std::nan("")).is_zero());
}

TEST(Scalar, SemiringLawsOnRandomTriples) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> v(-20, 20);
  std::bernoulli_distribution inf(0.2);
  auto draw = [&] { return inf(rng) ? fx::T::zero() : fx::q(v(rng), 1 + (v(rng) & 3)); };
  for (int k = 0; k < 500; ++k) {
    const auto a = draw(), b = draw(), c = draw();
    EXPECT_EQ(oplus(a, oplus(b, c)), oplus(oplus(a, b), c));
    EXPECT_EQ(otimes(a, otimes(b, c)), otimes(otimes(a, b), c));
    EXPECT_EQ(otimes(a, oplus(b, c)), oplus(otimes(a, b), otimes(a, c)));
    EXPECT_EQ(oplus(a, a), a);
  }
}

TEST(MatMul, IdentityIsNeutral) {
  const auto a = fx::example1();
  EXPECT_EQ(mat_mul(Q::identity(4), a), a);
  EXPECT_EQ(mat_mul(a, Q::identity(4)), a);
}

TEST(MatMul, Example1Square) {
  const auto a2 = mat({{0, -1, -5, -4}, {-1, 0, -6, -5}, {-5, -6, -2, -4}, {-4, -5, -4, -4}});
  EXPECT_TRUE(mat_eq(mat_mul(fx::example1(), fx::example1()), a2, 0.0));
}

TEST(MatMul, AgreesWithTripleLoop) {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 100; ++k) {
    const auto a = fx::random_matrix(rng, 4), b = fx::random_matrix(rng, 4);
    EXPECT_EQ(mat_mul(a, b), brute_mul(a, b));
  }
}

TEST(MatMul, DimensionMismatchThrows) {
  try {
    mat_mul(Q(2), Q(3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::dimension);
  }
}

TEST(MatPower, ZeroIsIdentity) { EXPECT_EQ(mat_power(fx::example1(), 0), Q::identity(4)); }

TEST(MatPower, Example1TenthPower) {
  const auto a10 = mat({{0, -1, -5, -4}, {-1, 0, -6, -5}, {-5, -6, -10, -9}, {-4, -5, -9, -8}});
  EXPECT_EQ(mat_power(fx::example1(), 10), a10);
}

TEST(MatPower, MatchesIteratedProduct) {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 30; ++k) {
    const auto a = fx::random_matrix(rng, 5);
    Q chain = a;
    for (int s = 1; s < 7; ++s) chain = mat_mul(chain, a);
    EXPECT_EQ(mat_power(a, 7), chain);
  }
}

TEST(MatPower, ExponentsAdd) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> e(0, 16);
  for (int k = 0; k < 40; ++k) {
    const auto a = fx::random_matrix(rng, 4);
    const int s = e(rng), t = e(rng);
    EXPECT_EQ(mat_power(a, s + t), mat_mul(mat_power(a, s), mat_power(a, t)));
  }
}

TEST(ScalarMul, ShiftsFiniteEntries) {
  const auto a = fx::example1();
  EXPECT_EQ(mat_scalar_mul(fx::T::unit(), a), a);
  std::mt19937_64 rng(9);
  const auto r = fx::random_matrix(rng, 5);
  const auto s = mat_scalar_mul(fx::q(-1), r);
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j) {
      ASSERT_EQ(r(i, j).is_zero(), s(i, j).is_zero());
      if (r(i, j).is_finite()) EXPECT_EQ(s(i, j).value(), r(i, j).value() - 1);
    }
}

TEST(ScalarMul, Example1SecondTermShift) {
  Q n2(4);
  n2(2, 2) = fx::q(0);
  n2(2, 3) = fx::q(-2);
  n2(3, 2) = fx::q(-2);
  n2(3, 3) = fx::q(-4);
  const auto shifted = mat_scalar_mul(fx::q(-2), n2);
  EXPECT_EQ(shifted(2, 2), fx::q(-2));
  EXPECT_EQ(shifted(3, 3), fx::q(-6));
  EXPECT_TRUE(shifted(0, 0).is_zero());
}

TEST(Oplus, Example1SquareFromNachtigallTerms) {
  const auto n1 = mat({{0, -1, -5, -4}, {-1, 0, -6, -5}, {-5, -6, -10, -9}, {-4, -5, -9, -8}});
  const auto n2 = mat({{X, X, X, X}, {X, X, X, X}, {X, X, 0, -2}, {X, X, -2, -4}});
  const auto n3 = mat({{X, X, X, X}, {X, X, X, X}, {X, X, X, X}, {X, X, X, 0}});
  const auto sum = mat_oplus(n1, mat_oplus(mat_scalar_mul(fx::q(-2), n2), mat_scalar_mul(fx::q(-4), n3)));
  EXPECT_EQ(sum, mat_power(fx::example1(), 2));
}

TEST(Oplus, IdempotentCommutativeAssociative) {
  std::mt19937_64 rng(13);
  for (int k = 0; k < 50; ++k) {
    const auto a = fx::random_matrix(rng, 4), b = fx::random_matrix(rng, 4), c = fx::random_matrix(rng, 4);
    EXPECT_EQ(mat_oplus(a, a), a);
    EXPECT_EQ(mat_oplus(a, b), mat_oplus(b, a));
    EXPECT_EQ(mat_oplus(a, mat_oplus(b, c)), mat_oplus(mat_oplus(a, b), c));
  }
}

TEST(MatEq, ToleranceAndPattern) {
  const auto a = fx::example1();
  EXPECT_TRUE(mat_eq(a, a, 0.0));
  auto d = mat<double>({{0, 1}, {X, 2}});
  auto e = d;
  e(0, 1) = Tropical<double>(1.0 + 2e-9);
  EXPECT_FALSE(mat_eq(d, e, 1e-9));
  EXPECT_TRUE(mat_eq(d, e, 3e-9));
  e(1, 0) = Tropical<double>(0.0);
  EXPECT_FALSE(mat_eq(d, e, 1.0));
}

TEST(Overflow, ExactArithmeticThrowsInsteadOfWrapping) {
  const fx::T big(Rational(std::numeric_limits<long long>::max() - 1));
  EXPECT_THROW(otimes(big, fx::q(5)), std::overflow_error);
  EXPECT_THROW(tpow(fx::q(3), std::numeric_limits<long long>::max() / 2), std::overflow_error);
  EXPECT_EQ(otimes(fx::q(1, 3), fx::q(1, 6)), fx::q(1, 2));
  EXPECT_EQ(tpow(fx::q(-2, 3), 6), fx::q(-4));
  EXPECT_THROW(mat_power(mat({{3}}), 1ULL << 62), std::overflow_error);
}
