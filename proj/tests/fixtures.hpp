#pragma once

// Shared matrices and hand-rolled random generators for the test suites.

#include <cmath>
#include <random>
#include <vector>

#include "maxplus/graph.hpp"
#include "maxplus/matrix.hpp"
#include "maxplus/scalar.hpp"

namespace fx {

using maxplus::Matrix;
using maxplus::Rational;
using maxplus::Tropical;
using Q = Matrix<Rational>;
using T = Tropical<Rational>;

inline constexpr double X = -INFINITY;

template <class F = Rational>
Matrix<F> mat(const std::vector<std::vector<double>>& rows) {
  return Matrix<F>::from_rows(rows);
}

template <class F = Rational>
maxplus::Vector<F> vec(const std::vector<double>& xs) {
  maxplus::Vector<F> v;
  for (double x : xs) v.push_back(maxplus::from_double<F>(x));
  return v;
}

inline T q(long long num, long long den = 1) { return T(Rational(num, den)); }

inline Q example1() {
  return mat({{-1, 0, -7, -6}, {0, -1, -5, -4}, {-7, -5, -1, -3}, {-6, -4, -3, -2}});
}

inline Q example2() {
  return mat({{-2, 0, -3, -7, X, X, X},
              {0, -2, -5, -7, X, X, X},
              {-9, -7, -9, -8, X, X, X},
              {-9, -6, -4, -4, X, X, X},
              {-8, -5, -5, -4, -1, -7, -5},
              {-7, -8, -5, -6, -3, -6, -8},
              {-6, -4, -9, -3, -5, -5, -5}});
}

inline Q example3a() {
  return mat({{X, 1, X, X, X, X},
              {X, X, 1, X, X, X},
              {X, X, X, 1, X, X},
              {1, X, X, X, X, X},
              {X, -2, X, X, X, 0},
              {X, -2, X, X, 0, X}});
}

inline Q example3b() {
  return mat({{X, 1, X, X, X, X},
              {X, X, 1, X, X, X},
              {X, X, X, 1, X, X},
              {1, X, X, X, X, X},
              {X, -2, X, X, X, 0},
              {X, X, -2, X, 0, X}});
}

/// Integer entries uniform in [lo, hi], each present with probability
/// `density`, −∞ otherwise.
template <class F = Rational>
Matrix<F> random_matrix(std::mt19937_64& rng, std::size_t n, int lo = -9, int hi = 3,
                        double density = 0.5) {
  std::uniform_int_distribution<int> value(lo, hi);
  std::bernoulli_distribution present(density);
  Matrix<F> m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (present(rng)) m(i, j) = Tropical<F>(F(value(rng)));
  return m;
}

/// Random matrix with at least one cycle (redrawn until λ > −∞).
template <class F = Rational>
Matrix<F> random_cyclic(std::mt19937_64& rng, std::size_t n, int lo = -9, int hi = 3,
                        double density = 0.5) {
  for (;;) {
    auto m = random_matrix<F>(rng, n, lo, hi, density);
    if (maxplus::component_means(m).lambda.is_finite()) return m;
  }
}

/// Random cyclic matrix shifted by −λ.
template <class F = Rational>
Matrix<F> random_definite(std::mt19937_64& rng, std::size_t n, int lo = -9, int hi = 3,
                          double density = 0.5) {
  auto m = random_cyclic<F>(rng, n, lo, hi, density);
  const auto lambda = maxplus::component_means(m).lambda;
  return maxplus::mat_scalar_mul(Tropical<F>(-lambda.value()), m);
}

/// Entries in [lo, hi] or −∞ with probability 1 − density.
template <class F = Rational>
maxplus::Vector<F> random_vector(std::mt19937_64& rng, std::size_t n, int lo = -9, int hi = 3,
                                 double density = 0.7) {
  std::uniform_int_distribution<int> value(lo, hi);
  std::bernoulli_distribution present(density);
  maxplus::Vector<F> v(n);
  for (auto& x : v)
    if (present(rng)) x = Tropical<F>(F(value(rng)));
  return v;
}

}  // namespace fx
