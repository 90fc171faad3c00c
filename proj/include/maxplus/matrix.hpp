#pragma once

/// @file matrix.hpp
/// Square max-plus matrices and vectors with ⊕/⊗ arithmetic.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "maxplus/error.hpp"
#include "maxplus/scalar.hpp"

namespace maxplus {

template <class F>
using Vector = std::vector<Tropical<F>>;

/// Dense n×n matrix over the max-plus semiring, row-major.
template <class F>
class Matrix {
 public:
  using value_type = Tropical<F>;

  Matrix() = default;
  /// n×n matrix filled with −∞.
  explicit Matrix(std::size_t n) : n_(n), data_(n * n) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = value_type::unit();
    return m;
  }

  /// Build from rows of doubles; -INFINITY denotes −∞.
  static Matrix from_rows(const std::vector<std::vector<double>>& rows) {
    Matrix m(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != rows.size()) throw Error(Errc::dimension, "matrix is not square");
      for (std::size_t j = 0; j < rows.size(); ++j) m(i, j) = from_double<F>(rows[i][j]);
    }
    return m;
  }

  std::size_t size() const { return n_; }

  value_type& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  const value_type& operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

  std::span<value_type> row(std::size_t i) { return {data_.data() + i * n_, n_}; }
  std::span<const value_type> row(std::size_t i) const { return {data_.data() + i * n_, n_}; }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.n_ == b.n_ && a.data_ == b.data_;
  }
  friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

 private:
  std::size_t n_ = 0;
  std::vector<value_type> data_;
};

namespace detail {
template <class F>
void require_same_size(const Matrix<F>& a, const Matrix<F>& b) {
  if (a.size() != b.size()) throw Error(Errc::dimension, "sizes differ");
}
}  // namespace detail

/// (a ⊗ b)_ij = max_k a_ik + b_kj.
template <class F>
Matrix<F> mat_mul(const Matrix<F>& a, const Matrix<F>& b) {
  detail::require_same_size(a, b);
  const std::size_t n = a.size();
  Matrix<F> c(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto crow = c.row(i);
    for (std::size_t k = 0; k < n; ++k) {
      const auto& aik = a(i, k);
      if (aik.is_zero()) continue;
      const F& x = aik.value();
      auto brow = b.row(k);
      for (std::size_t j = 0; j < n; ++j) {
        if (brow[j].is_zero()) continue;
        Tropical<F> cand(field_traits<F>::add(x, brow[j].value()));
        if (crow[j] < cand) crow[j] = cand;
      }
    }
  }
  return c;
}

/// a^t by repeated squaring; a^0 = I.
template <class F>
Matrix<F> mat_power(const Matrix<F>& a, unsigned long long t) {
  Matrix<F> result = Matrix<F>::identity(a.size());
  Matrix<F> base = a;
  bool first = true;
  while (t > 0) {
    if (t & 1ULL) {
      result = first ? base : mat_mul(result, base);
      first = false;
    }
    t >>= 1ULL;
    if (t > 0) base = mat_mul(base, base);
  }
  return result;
}

/// λ ⊗ a: adds λ to every finite entry.
template <class F>
Matrix<F> mat_scalar_mul(const Tropical<F>& lambda, const Matrix<F>& a) {
  const std::size_t n = a.size();
  Matrix<F> r(n);
  if (lambda.is_zero()) return r;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) r(i, j) = otimes(lambda, a(i, j));
  return r;
}

/// Entrywise maximum.
template <class F>
Matrix<F> mat_oplus(const Matrix<F>& a, const Matrix<F>& b) {
  detail::require_same_size(a, b);
  const std::size_t n = a.size();
  Matrix<F> r(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) r(i, j) = oplus(a(i, j), b(i, j));
  return r;
}

/// True iff −∞ patterns coincide and finite entries differ by at most tol.
/// tol = 0 demands exact equality in the field.
template <class F>
bool mat_eq(const Matrix<F>& a, const Matrix<F>& b, double tol = 0.0) {
  detail::require_same_size(a, b);
  const std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const auto& x = a(i, j);
      const auto& y = b(i, j);
      if (x.is_zero() != y.is_zero()) return false;
      if (x.is_zero()) continue;
      if (tol == 0.0) {
        if (!(x.value() == y.value())) return false;
      } else if (std::fabs(field_traits<F>::to_double(x.value() - y.value())) > tol) {
        return false;
      }
    }
  }
  return true;
}

/// Entrywise a ≤ b.
template <class F>
bool mat_leq(const Matrix<F>& a, const Matrix<F>& b) {
  detail::require_same_size(a, b);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j)
      if (b(i, j) < a(i, j)) return false;
  return true;
}

/// a ⊗ x.
template <class F>
Vector<F> mat_vec(const Matrix<F>& a, const Vector<F>& x) {
  if (x.size() != a.size()) throw Error(Errc::dimension, "vector length differs from matrix size");
  const std::size_t n = a.size();
  Vector<F> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      auto cand = otimes(a(i, k), x[k]);
      if (y[i] < cand) y[i] = cand;
    }
  }
  return y;
}

/// Copy of a with every entry outside rows/columns in `keep` set to −∞.
template <class F>
Matrix<F> restrict_to(const Matrix<F>& a, const std::vector<bool>& keep) {
  const std::size_t n = a.size();
  Matrix<F> r(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!keep[i]) continue;
    for (std::size_t j = 0; j < n; ++j)
      if (keep[j]) r(i, j) = a(i, j);
  }
  return r;
}

namespace detail {

/// Max-weight closure by Floyd-Warshall relaxation, followed by ⊕ I.
/// Assumes no positive cycles; the caller is responsible for that check.
template <class F>
Matrix<F> floyd_warshall_star(const Matrix<F>& a) {
  const std::size_t n = a.size();
  Matrix<F> m = a;
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      if (m(i, k).is_zero()) continue;
      const F mik = m(i, k).value();
      for (std::size_t j = 0; j < n; ++j) {
        const auto& mkj = m(k, j);
        if (mkj.is_zero()) continue;
        Tropical<F> cand(mik + mkj.value());
        if (m(i, j) < cand) m(i, j) = cand;
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) m(i, i) = oplus(m(i, i), Tropical<F>::unit());
  return m;
}

}  // namespace detail

}  // namespace maxplus
