#pragma once

/// @file scalar.hpp
/// Max-plus scalars over a number field F.
///
/// The semiring is (F ∪ {−∞}, max, +): zero is −∞, unity is 0. Two fields
/// are supported: `double` (−∞ stored natively as the IEEE negative
/// infinity) and `Rational` (exact, −∞ carried by a flag). Everything in
/// the library is templated on the field so the same algorithms run exactly
/// on integer/decimal data and approximately on log-transformed data.

#include <boost/rational.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <type_traits>

namespace maxplus {

using Rational = boost::rational<long long>;

/// Per-field numeric policy: exactness, approximate-zero tests, conversion.
template <class F>
struct field_traits;

template <>
struct field_traits<double> {
  static constexpr bool exact = false;
  // Cycle sums of normalized matrices are compared against zero with this
  // absolute slack.
  static constexpr double eps = 1e-9;

  static bool near_zero(double x) { return std::fabs(x) <= eps; }
  static bool positive(double x) { return x > eps; }
  static double to_double(double x) { return x; }
  static double from_integer(long long x) { return static_cast<double>(x); }
  static double add(double x, double y) { return x + y; }
  static double scale(double x, long long k) { return x * static_cast<double>(k); }
};

template <>
struct field_traits<Rational> {
  static constexpr bool exact = true;

  static bool near_zero(const Rational& x) { return x.numerator() == 0; }
  static bool positive(const Rational& x) { return x > Rational(0); }
  static double to_double(const Rational& x) {
    return boost::rational_cast<double>(x);
  }
  static Rational from_integer(long long x) { return Rational(x); }

  // boost::rational wraps silently; these two throw std::overflow_error
  // instead.
  static Rational add(const Rational& x, const Rational& y) {
    long long sum = 0;
    if (x.denominator() == 1 && y.denominator() == 1) {
      if (__builtin_add_overflow(x.numerator(), y.numerator(), &sum)) overflow();
      return Rational(sum);
    }
    const __int128 den = static_cast<__int128>(x.denominator()) * y.denominator();
    const __int128 num = static_cast<__int128>(x.numerator()) * y.denominator() +
                         static_cast<__int128>(y.numerator()) * x.denominator();
    const __int128 g = gcd128(num < 0 ? -num : num, den);
    return make(num / g, den / g);
  }
  static Rational scale(const Rational& x, long long k) {
    const __int128 num = static_cast<__int128>(x.numerator()) * k;
    const __int128 g = gcd128(num < 0 ? -num : num, x.denominator());
    return make(num / g, x.denominator() / g);
  }

 private:
  [[noreturn]] static void overflow() { throw std::overflow_error("rational value exceeds 64 bits"); }
  static __int128 gcd128(__int128 a, __int128 b) {
    while (b != 0) {
      const __int128 r = a % b;
      a = b;
      b = r;
    }
    return a == 0 ? 1 : a;
  }
  static Rational make(__int128 num, __int128 den) {
    constexpr __int128 lo = std::numeric_limits<long long>::min(), hi = std::numeric_limits<long long>::max();
    if (num < lo || num > hi || den > hi) overflow();
    return Rational(static_cast<long long>(num), static_cast<long long>(den));
  }
};

namespace detail {
struct NoFlag {};
}  // namespace detail

/// Element of the max-plus semiring. Default-constructed value is the zero −∞.
template <class F>
class Tropical {
  static constexpr bool kNativeInfinity = std::numeric_limits<F>::has_infinity;

 public:
  using field_type = F;

  Tropical() { set_zero(); }
  Tropical(const F& v) : value_(v) {  // NOLINT(google-explicit-constructor)
    if constexpr (kNativeInfinity) {
      // NaN is never admitted into a matrix.
      if (std::isnan(v)) set_zero();
    } else {
      zero_ = false;
    }
  }

  static Tropical zero() { return Tropical(); }
  static Tropical unit() { return Tropical(F(0)); }

  bool is_zero() const {
    if constexpr (kNativeInfinity) {
      return value_ == -std::numeric_limits<F>::infinity();
    } else {
      return zero_;
    }
  }
  bool is_finite() const { return !is_zero(); }

  /// Finite value. Precondition: is_finite().
  const F& value() const { return value_; }

  friend bool operator==(const Tropical& a, const Tropical& b) {
    if (a.is_zero() || b.is_zero()) return a.is_zero() == b.is_zero();
    return a.value_ == b.value_;
  }
  friend bool operator!=(const Tropical& a, const Tropical& b) { return !(a == b); }
  // −∞ is below every finite value.
  friend bool operator<(const Tropical& a, const Tropical& b) {
    if (b.is_zero()) return false;
    if (a.is_zero()) return true;
    return a.value_ < b.value_;
  }
  friend bool operator>(const Tropical& a, const Tropical& b) { return b < a; }
  friend bool operator<=(const Tropical& a, const Tropical& b) { return !(b < a); }
  friend bool operator>=(const Tropical& a, const Tropical& b) { return !(a < b); }

 private:
  void set_zero() {
    if constexpr (kNativeInfinity) {
      value_ = -std::numeric_limits<F>::infinity();
    } else {
      value_ = F(0);
      zero_ = true;
    }
  }

  F value_{};
  [[no_unique_address]] std::conditional_t<kNativeInfinity, detail::NoFlag, bool> zero_{};
};

/// a ⊕ b = max(a, b).
template <class F>
Tropical<F> oplus(const Tropical<F>& a, const Tropical<F>& b) {
  return a < b ? b : a;
}

/// a ⊗ b = a + b, with −∞ absorbing.
template <class F>
Tropical<F> otimes(const Tropical<F>& a, const Tropical<F>& b) {
  if (a.is_zero() || b.is_zero()) return Tropical<F>::zero();
  return Tropical<F>(field_traits<F>::add(a.value(), b.value()));
}

/// a^k for an integer exponent k ≥ 0, i.e. k·a in ordinary arithmetic.
template <class F>
Tropical<F> tpow(const Tropical<F>& a, long long k) {
  if (k == 0) return Tropical<F>::unit();
  if (a.is_zero()) return a;
  return Tropical<F>(field_traits<F>::scale(a.value(), k));
}

/// Finite-or-−∞ value as a double, for reporting.
template <class F>
double to_double(const Tropical<F>& x) {
  if (x.is_zero()) return -std::numeric_limits<double>::infinity();
  return field_traits<F>::to_double(x.value());
}

/// Exact conversion from double where possible. Integral doubles map exactly
/// to Rational; other values go through their shortest decimal form.
template <class F>
Tropical<F> from_double(double x);

template <>
inline Tropical<double> from_double<double>(double x) {
  return Tropical<double>(x);
}

template <>
inline Tropical<Rational> from_double<Rational>(double x) {
  if (std::isinf(x) && x < 0) return Tropical<Rational>::zero();
  if (!std::isfinite(x)) return Tropical<Rational>::zero();
  if (x == std::floor(x) && std::fabs(x) < 9.0e15) {
    return Tropical<Rational>(Rational(static_cast<long long>(x)));
  }
  // Scale by powers of ten until integral (at most 15 digits).
  long long den = 1;
  double scaled = x;
  for (int k = 0; k < 15 && scaled != std::floor(scaled); ++k) {
    scaled *= 10.0;
    den *= 10;
  }
  return Tropical<Rational>(Rational(static_cast<long long>(std::llround(scaled)), den));
}

inline long long gcd_ll(long long a, long long b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    long long r = a % b;
    a = b;
    b = r;
  }
  return a;
}

inline long long lcm_ll(long long a, long long b) {
  if (a == 0 || b == 0) return 0;
  return a / gcd_ll(a, b) * b;
}

/// Non-negative remainder of t modulo m (m > 0).
inline long long mod_floor(long long t, long long m) {
  long long r = t % m;
  return r < 0 ? r + m : r;
}

}  // namespace maxplus
