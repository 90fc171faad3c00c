#pragma once

/// @file kleene.hpp
/// Kleene stars and diagonal similarity scalings (S-visualization).

#include <string>
#include <vector>

#include "maxplus/error.hpp"
#include "maxplus/graph.hpp"
#include "maxplus/matrix.hpp"

namespace maxplus {

/// A* = I ⊕ A ⊕ A² ⊕ …, defined when λ(A) ≤ 0.
template <class F>
Matrix<F> kleene_star(const Matrix<F>& a) {
  const auto cs = component_means(a);
  for (std::size_t c = 0; c < cs.scc.size(); ++c) {
    const auto& lam = cs.lambda_of_component[c];
    if (lam.is_finite() && field_traits<F>::positive(lam.value()))
      throw Error(Errc::divergent_star, "component " + std::to_string(c) + " (node " +
                                            std::to_string(cs.scc.components[c].front()) +
                                            ") has positive cycle mean");
  }
  return detail::floyd_warshall_star(a);
}

/// Diagonal similarity A ↦ D⁻¹AD with D = diag(z), all z finite.
template <class F>
struct Scaling {
  std::vector<F> z;

  static Scaling identity(std::size_t n) { return Scaling{std::vector<F>(n, F(0))}; }
  Scaling inverse() const {
    Scaling s{z};
    for (auto& x : s.z) x = -x;
    return s;
  }
};

/// result_ij = −z_i + a_ij + z_j.
template <class F>
Matrix<F> apply_scaling(const Matrix<F>& a, const Scaling<F>& s) {
  const std::size_t n = a.size();
  if (s.z.size() != n) throw Error(Errc::dimension, "scaling length differs from matrix size");
  Matrix<F> r(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (a(i, j).is_finite()) r(i, j) = Tropical<F>(a(i, j).value() - s.z[i] + s.z[j]);
  return r;
}

/// Scaling that turns a critical-part matrix S (λ(S) = 0, 𝒟(S) = 𝒞(S))
/// into a Boolean one, using z = ⊕_j S*_{·j}.
template <class F>
Scaling<F> visualizing_scaling(const Matrix<F>& s) {
  const std::size_t n = s.size();
  CriticalStructure<F> cs;
  try {
    cs = critical_structure(s);
  } catch (const Error&) {
    throw Error(Errc::not_critical_part, "no cycles");
  }
  if (!field_traits<F>::near_zero(cs.lambda.value()))
    throw Error(Errc::not_critical_part, "cycle mean is not zero");
  std::size_t edge_count = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (s(i, j).is_finite()) ++edge_count;
  if (edge_count != cs.critical_edges.size())
    throw Error(Errc::not_critical_part, "matrix has non-critical edges");

  const Matrix<F> star = detail::floyd_warshall_star(s);
  Scaling<F> out;
  out.z.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    Tropical<F> best;
    for (std::size_t j = 0; j < n; ++j) best = oplus(best, star(i, j));
    out.z[i] = best.value();  // star ≥ I, so finite
  }
  return out;
}

/// One scaling for several critical-part matrices with pairwise disjoint
/// node sets: z_i = z^μ_i on N_μ and 0 elsewhere.
template <class F>
Scaling<F> total_visualizing_scaling(const std::vector<Matrix<F>>& terms, std::size_t n) {
  Scaling<F> out = Scaling<F>::identity(n);
  std::vector<int> owner(n, -1);
  for (std::size_t mu = 0; mu < terms.size(); ++mu) {
    const auto& s = terms[mu];
    if (s.size() != n) throw Error(Errc::dimension, "term size differs");
    std::vector<char> in_term(n, 0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (s(i, j).is_finite()) in_term[i] = in_term[j] = 1;
    for (std::size_t i = 0; i < n; ++i) {
      if (!in_term[i]) continue;
      if (owner[i] >= 0)
        throw Error(Errc::overlapping_nodes, "node " + std::to_string(i) + " in terms " +
                                                 std::to_string(owner[i]) + " and " +
                                                 std::to_string(mu));
      owner[i] = static_cast<int>(mu);
    }
    const auto local = visualizing_scaling(s);
    for (std::size_t i = 0; i < n; ++i)
      if (in_term[i]) out.z[i] = local.z[i];
  }
  return out;
}

/// True iff every finite entry is the unity.
template <class F>
bool is_boolean(const Matrix<F>& m) {
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j)
      if (m(i, j).is_finite() && !field_traits<F>::near_zero(m(i, j).value())) return false;
  return true;
}

}  // namespace maxplus
