#pragma once

/// @file orbit.hpp
/// Orbit periodicity: whether every orbit {A^t y} is ultimately linear
/// periodic, i.e. A^(t+γ) y = λ(y)^γ ⊗ A^t y for all large t, where γ is the
/// joint cyclicity γ^u of the critical graphs of all components of 𝒟(A).
///
/// The decision uses the component access order (condition 1) and the
/// support inclusion between columns of the ultimate terms U_μ^(1)
/// (condition 2). The Boolean strong-access form of condition 2 lives in
/// oracle.hpp as an independent cross-check.

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "maxplus/csr.hpp"
#include "maxplus/error.hpp"
#include "maxplus/expansion.hpp"
#include "maxplus/graph.hpp"
#include "maxplus/matrix.hpp"

namespace maxplus {

struct SupportViolation {
  int mu = 0;  // ultimate term with smaller λ
  int nu = 0;  // ultimate term with larger λ
  int i = 0;   // column of U_μ^(1), i ∈ N_μ
  int j = 0;   // column of U_ν^(1), j ∈ N_ν
};

struct OrbitReport {
  bool verdict = true;
  /// (X, Y) components of 𝒟(A): X accesses Y but λ(X) > λ(Y).
  std::vector<std::pair<int, int>> condition1_violations;
  /// Components holding the two columns of a support violation.
  std::vector<std::pair<int, int>> condition2_violations;
  std::vector<SupportViolation> support_violations;
  long long gamma_u = 1;
};

namespace detail {

template <class F>
bool lambda_equal(const Tropical<F>& x, const Tropical<F>& y) {
  if (x.is_zero() || y.is_zero()) return x.is_zero() == y.is_zero();
  return field_traits<F>::near_zero(x.value() - y.value());
}

template <class F>
bool lambda_less(const Tropical<F>& x, const Tropical<F>& y) {
  return x < y && !lambda_equal(x, y);
}

}  // namespace detail

template <class F>
OrbitReport is_orbit_periodic(const Matrix<F>& a) {
  OrbitReport report;
  const auto cs = component_means(a);
  if (cs.lambda.is_zero()) return report;  // nilpotent: every orbit dies out

  const auto& scc = cs.scc;
  for (std::size_t x = 0; x < scc.size(); ++x) {
    if (scc.trivial[x]) continue;
    for (std::size_t y = 0; y < scc.size(); ++y) {
      if (x == y || scc.trivial[y] || !scc.accesses(static_cast<int>(x), static_cast<int>(y)))
        continue;
      if (detail::lambda_less(cs.lambda_of_component[y], cs.lambda_of_component[x]))
        report.condition1_violations.push_back({static_cast<int>(x), static_cast<int>(y)});
    }
  }

  const auto e = ultimate_expand(a);
  report.gamma_u = e.gamma;
  const std::size_t n = a.size();
  std::vector<Matrix<F>> u1;
  for (const auto& term : e.terms) u1.push_back(csr_product(term.triple, 1).matrix);

  std::set<std::pair<int, int>> cond2;
  for (std::size_t mu = 0; mu < e.terms.size(); ++mu) {
    for (std::size_t nu = 0; nu < e.terms.size(); ++nu) {
      if (!detail::lambda_less(e.terms[mu].lambda, e.terms[nu].lambda)) continue;
      for (int i : e.terms[mu].triple.nodes()) {
        for (int j : e.terms[nu].triple.nodes()) {
          bool included = true;
          for (std::size_t k = 0; k < n && included; ++k)
            if (u1[mu](k, i).is_finite() && u1[nu](k, j).is_zero()) included = false;
          if (included) continue;
          report.support_violations.push_back(
              {static_cast<int>(mu), static_cast<int>(nu), i, j});
          cond2.insert({scc.component_of[i], scc.component_of[j]});
        }
      }
    }
  }
  report.condition2_violations.assign(cond2.begin(), cond2.end());
  report.verdict = report.condition1_violations.empty() && report.support_violations.empty();
  return report;
}

/// λ(y): the largest cycle mean among nontrivial components that access
/// supp(y). −∞ when no such component exists.
template <class F>
Tropical<F> orbit_growth_rate(const Matrix<F>& a, const Vector<F>& y) {
  if (y.size() != a.size()) throw Error(Errc::dimension, "vector length differs from matrix size");
  if (std::all_of(y.begin(), y.end(), [](const auto& v) { return v.is_zero(); }))
    throw Error(Errc::zero_vector);
  if (!is_orbit_periodic(a).verdict) throw Error(Errc::not_orbit_periodic);
  const auto cs = component_means(a);
  std::vector<char> target(cs.scc.size(), 0);
  for (std::size_t k = 0; k < y.size(); ++k)
    if (y[k].is_finite()) target[cs.scc.component_of[k]] = 1;
  Tropical<F> best;
  for (std::size_t x = 0; x < cs.scc.size(); ++x) {
    if (cs.scc.trivial[x]) continue;
    for (std::size_t c = 0; c < cs.scc.size(); ++c)
      if (target[c] && cs.scc.accesses(static_cast<int>(x), static_cast<int>(c)))
        best = oplus(best, cs.lambda_of_component[x]);
  }
  return best;
}

template <class F>
struct OrbitTrace {
  Vector<F> y0;
  std::vector<Vector<F>> samples;  // samples[t] = A^t y0, t = 0 … t_max
  std::optional<long long> detected_period;
  std::optional<Tropical<F>> growth_rate;
  std::optional<long long> transient;
  long long gamma_u = 1;
};

namespace detail {

/// x(t + p) = p·rate + x(t) entrywise for all t in [from, last − p]. On
/// success returns the rate (−∞ when the tail is the zero vector).
template <class F>
std::optional<Tropical<F>> linear_period_from(const std::vector<Vector<F>>& xs, long long from,
                                              long long p) {
  const long long last = static_cast<long long>(xs.size()) - 1;
  std::optional<F> rate;
  const double tol = field_traits<F>::exact ? 0.0 : 1e-6;
  for (long long t = from; t + p <= last; ++t) {
    const auto& u = xs[t];
    const auto& v = xs[t + p];
    for (std::size_t i = 0; i < u.size(); ++i) {
      if (u[i].is_zero() != v[i].is_zero()) return std::nullopt;
      if (u[i].is_zero()) continue;
      const F step = v[i].value() - u[i].value();
      if (!rate) {
        rate = step;
      } else if (tol == 0.0 ? !(step == *rate)
                            : std::fabs(field_traits<F>::to_double(step - *rate)) > tol) {
        return std::nullopt;
      }
    }
  }
  if (!rate) return Tropical<F>::zero();
  return Tropical<F>(*rate / field_traits<F>::from_integer(p));
}

}  // namespace detail

/// Iterates x ← A ⊗ x up to t_max and looks for the smallest period p
/// dividing γ^u, then the smallest transient T, such that the linear
/// periodicity identity holds on [T, t_max]. At least γ^u comparisons past
/// T are demanded so a match is never decided on a sliver of the tail.
template <class F>
OrbitTrace<F> simulate_orbit(const Matrix<F>& a, const Vector<F>& y, long long t_max) {
  if (y.size() != a.size()) throw Error(Errc::dimension, "vector length differs from matrix size");
  if (t_max < 1) throw Error(Errc::precondition, "t_max must be at least 1");
  OrbitTrace<F> trace;
  trace.y0 = y;
  trace.samples.reserve(static_cast<std::size_t>(t_max) + 1);
  trace.samples.push_back(y);
  for (long long t = 1; t <= t_max; ++t) trace.samples.push_back(mat_vec(a, trace.samples.back()));

  const auto cs = component_means(a);
  if (!cs.lambda.is_zero()) trace.gamma_u = ultimate_expand(a).gamma;
  const long long g = trace.gamma_u;
  for (long long p = 1; p <= g; ++p) {
    if (g % p != 0) continue;
    for (long long from = 0; from + p + g - 1 <= t_max; ++from) {
      auto rate = detail::linear_period_from(trace.samples, from, p);
      if (!rate) continue;
      trace.detected_period = p;
      trace.transient = from;
      trace.growth_rate = *rate;
      return trace;
    }
  }
  return trace;
}

/// {A^t e_j} is ultimately linear periodic iff no nontrivial component with
/// a larger cycle mean accesses j.
template <class F>
bool column_periodicity(const Matrix<F>& a, int j) {
  const auto cs = component_means(a);
  const int cj = cs.scc.component_of.at(j);
  if (cs.scc.trivial[cj]) throw Error(Errc::trivial_column, "node " + std::to_string(j));
  for (std::size_t x = 0; x < cs.scc.size(); ++x) {
    if (cs.scc.trivial[x] || !cs.scc.accesses(static_cast<int>(x), cj)) continue;
    if (detail::lambda_less(cs.lambda_of_component[cj], cs.lambda_of_component[x])) return false;
  }
  return true;
}

/// Given periodic columns i and j, {A^t (e_k ⊕ e_l)} is ultimately linear
/// periodic for all k ↔ i, l ↔ j iff i ⇒ j, j ⇒ i, or λ(i) = λ(j).
template <class F>
bool pair_periodicity(const Matrix<F>& a, int i, int j) {
  const auto cs = component_means(a);
  const int ci = cs.scc.component_of.at(i);
  const int cj = cs.scc.component_of.at(j);
  if (cs.scc.trivial[ci] || cs.scc.trivial[cj])
    throw Error(Errc::precondition, "both nodes must lie in nontrivial components");
  if (!column_periodicity(a, i) || !column_periodicity(a, j))
    throw Error(Errc::precondition, "columns are not ultimately linear periodic");
  if (detail::lambda_equal(cs.lambda_of_component[ci], cs.lambda_of_component[cj])) return true;
  return strong_access(a, i, j) || strong_access(a, j, i);
}

}  // namespace maxplus
