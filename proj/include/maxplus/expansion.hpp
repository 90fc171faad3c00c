#pragma once

/// @file expansion.hpp
/// Nachtigall and ultimate expansions A^t = ⊕_μ λ_μ^t ⊗ C_μ S_μ^t R_μ.
///
/// Both are built by deflation. At step μ the matrix A_μ keeps the entries
/// of A on the surviving node set K_μ; its critical subgraph gives one CSR
/// term, and some nodes are removed before the next step:
///   - Nachtigall: the nodes N_μ of the selected critical subgraph;
///   - ultimate:   every node of each component of 𝒟(A) meeting 𝒞(A_μ).
/// The Nachtigall expansion is exact for t ≥ 3n². The ultimate one holds
/// from an unknown threshold on, which ultimate_threshold measures.

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "maxplus/csr.hpp"
#include "maxplus/error.hpp"
#include "maxplus/graph.hpp"
#include "maxplus/kleene.hpp"
#include "maxplus/matrix.hpp"

namespace maxplus {

template <class F>
struct DeflationStep {
  int mu = 0;
  std::vector<int> k_set;  // surviving nodes K_μ
  Matrix<F> a_mu;          // A restricted to K_μ
  Tropical<F> lambda_mu;
  CriticalSubgraph crit_mu;  // (N_μ, E_μ)
  std::vector<int> m_set;    // nodes removed after this step
};

enum class ExpansionKind { nachtigall_canonical, nachtigall_cycle, ultimate };

inline const char* expansion_kind_name(ExpansionKind k) {
  switch (k) {
    case ExpansionKind::nachtigall_canonical: return "nachtigall-canonical";
    case ExpansionKind::nachtigall_cycle: return "nachtigall-cycle";
    case ExpansionKind::ultimate: return "ultimate";
  }
  return "unknown";
}

template <class F>
struct ExpansionTerm {
  Tropical<F> lambda;
  CsrTriple<F> triple;
};

template <class F>
struct Expansion {
  ExpansionKind kind = ExpansionKind::nachtigall_canonical;
  std::size_t n = 0;
  std::vector<DeflationStep<F>> steps;
  std::vector<ExpansionTerm<F>> terms;
  /// Ultimate only: sigma[ν] is the index of the canonical Nachtigall term
  /// with the same λ.
  std::vector<int> sigma;
  long long gamma = 1;  // l.c.m. of term cyclicities
  /// 3n² for Nachtigall; for ultimate, set once measured.
  std::optional<long long> validity_threshold;
};

namespace detail {

template <class F>
Matrix<F> normalized(const Matrix<F>& a, const Tropical<F>& lambda) {
  return mat_scalar_mul(Tropical<F>(-lambda.value()), a);
}

/// Deflation loop shared by both expansions; stops when A_μ has no cycle.
template <class F>
std::vector<DeflationStep<F>> deflate(const Matrix<F>& a, ExpansionKind kind) {
  const std::size_t n = a.size();
  const SccDecomposition scc = scc_decompose(digraph_of(a));
  std::vector<bool> keep(n, true);
  std::vector<DeflationStep<F>> steps;
  for (int mu = 0;; ++mu) {
    Matrix<F> a_mu = restrict_to(a, keep);
    const auto means = component_means(a_mu);
    if (means.lambda.is_zero()) break;
    const auto cs = critical_structure(a_mu);
    DeflationStep<F> step;
    step.mu = mu;
    for (std::size_t v = 0; v < n; ++v)
      if (keep[v]) step.k_set.push_back(static_cast<int>(v));
    step.lambda_mu = cs.lambda;
    step.crit_mu = select_critical(cs, kind == ExpansionKind::nachtigall_cycle
                                           ? SelectionRule::single_cycle
                                           : SelectionRule::canonical);
    if (kind == ExpansionKind::ultimate) {
      std::vector<char> hit(scc.size(), 0);
      for (int v : step.crit_mu.nodes) hit[scc.component_of[v]] = 1;
      for (std::size_t v = 0; v < n; ++v)
        if (hit[scc.component_of[v]]) step.m_set.push_back(static_cast<int>(v));
    } else {
      step.m_set = step.crit_mu.nodes;
    }
    for (int v : step.m_set) keep[v] = false;
    step.a_mu = std::move(a_mu);
    steps.push_back(std::move(step));
  }
  if (steps.empty()) throw Error(Errc::no_cycles);
  return steps;
}

template <class F>
Expansion<F> expand(const Matrix<F>& a, ExpansionKind kind) {
  Expansion<F> e;
  e.kind = kind;
  e.n = a.size();
  e.steps = deflate(a, kind);
  for (const auto& step : e.steps) {
    ExpansionTerm<F> term;
    term.lambda = step.lambda_mu;
    term.triple = csr_from_subgraph(normalized(step.a_mu, step.lambda_mu), step.crit_mu);
    e.gamma = lcm_ll(e.gamma, term.triple.gamma);
    e.terms.push_back(std::move(term));
  }
  return e;
}

template <class F>
bool same_lambda(const Tropical<F>& x, const Tropical<F>& y) {
  if (x.is_zero() || y.is_zero()) return x.is_zero() == y.is_zero();
  return field_traits<F>::near_zero(x.value() - y.value());
}

}  // namespace detail

template <class F>
Expansion<F> nachtigall_expand(const Matrix<F>& a, SelectionRule rule = SelectionRule::canonical) {
  auto e = detail::expand(a, rule == SelectionRule::canonical ? ExpansionKind::nachtigall_canonical
                                                              : ExpansionKind::nachtigall_cycle);
  e.validity_threshold = 3LL * static_cast<long long>(a.size() * a.size());
  return e;
}

template <class F>
Expansion<F> ultimate_expand(const Matrix<F>& a) {
  auto e = detail::expand(a, ExpansionKind::ultimate);
  const auto canonical = detail::deflate(a, ExpansionKind::nachtigall_canonical);
  for (const auto& term : e.terms) {
    int match = -1;
    for (std::size_t mu = 0; mu < canonical.size() && match < 0; ++mu)
      if (detail::same_lambda(canonical[mu].lambda_mu, term.lambda)) match = static_cast<int>(mu);
    if (match < 0) throw Error(Errc::precondition, "ultimate term without a Nachtigall match");
    e.sigma.push_back(match);
  }
  return e;
}

template <class F>
struct ExpansionEvaluation {
  long long t = 0;
  Matrix<F> matrix;
  std::vector<Matrix<F>> per_term;  // λ_ν^t ⊗ P_ν^(t)
};

/// ⊕_ν λ_ν^t ⊗ C_ν S_ν^t R_ν.
template <class F>
ExpansionEvaluation<F> evaluate(const Expansion<F>& e, long long t) {
  ExpansionEvaluation<F> out;
  out.t = t;
  out.matrix = Matrix<F>(e.n);
  for (const auto& term : e.terms) {
    auto m = mat_scalar_mul(tpow(term.lambda, t), csr_product(term.triple, t).matrix);
    out.matrix = mat_oplus(out.matrix, m);
    out.per_term.push_back(std::move(m));
  }
  return out;
}

/// Term computed by the squaring-and-rotation route: `matrix` is P_μ^(t)
/// without the λ_μ^t factor.
template <class F>
struct FastTerm {
  Tropical<F> lambda;
  Matrix<F> matrix;
};

/// All terms at exponent t without Kleene stars: square Â_μ = A_μ − λ_μ up
/// to r = 2^k ≥ 3n², read C_μ S_μ^r and S_μ^r R_μ off the critical columns
/// and rows of Â_μ^r, rotate them to C_μ and S_μ^t R_μ, multiply once.
/// Nachtigall kinds require t ≥ 3n²; the ultimate kind accepts any t ≥ 0.
template <class F>
std::vector<FastTerm<F>> fast_terms(const Matrix<F>& a, long long t, ExpansionKind kind) {
  const std::size_t n = a.size();
  const long long bound = 3LL * static_cast<long long>(n * n);
  if (t < 0) throw Error(Errc::precondition, "negative exponent");
  if (kind != ExpansionKind::ultimate && t < bound)
    throw Error(Errc::below_threshold, "t = " + std::to_string(t) + " < 3n² = " + std::to_string(bound));
  long long r = 1;
  int squarings = 0;
  while (r < bound) {
    r *= 2;
    ++squarings;
  }

  std::vector<FastTerm<F>> out;
  for (const auto& step : detail::deflate(a, kind)) {
    const Matrix<F> hat = detail::normalized(step.a_mu, step.lambda_mu);
    Matrix<F> power = hat;
    for (int k = 0; k < squarings; ++k) power = mat_mul(power, power);

    std::vector<char> in_nc(n, 0);
    for (int v : step.crit_mu.nodes) in_nc[v] = 1;
    Matrix<F> cs_r(n), sr_r(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        if (in_nc[j]) cs_r(i, j) = power(i, j);
        if (in_nc[i]) sr_r(i, j) = power(i, j);
      }

    Matrix<F> s(n);
    for (const auto& [u, v] : step.crit_mu.edges) s(u, v) = hat(u, v);
    const auto cyc = cyclic_structure(n, step.crit_mu.edges);
    const auto z = visualizing_scaling(s);
    const auto c = detail::rotate_block(cyc, z, cs_r, -r, BlockKind::columns);
    const auto st_r = detail::rotate_block(cyc, z, sr_r, t - r, BlockKind::rows);
    out.push_back({step.lambda_mu, mat_mul(c, st_r)});
  }
  return out;
}

/// Smallest t′ ≤ t_max after which the ultimate expansion reproduces A^t,
/// judged on [0, t_max + γ^u + ⌈log₂ t_max⌉]: t′ is one past the last
/// mismatch in that range. nullopt when t′ would exceed t_max.
template <class F>
std::optional<long long> ultimate_threshold(const Matrix<F>& a, const Expansion<F>& e,
                                            long long t_max) {
  if (a.size() != e.n) throw Error(Errc::dimension, "expansion built for another size");
  if (t_max < 0) t_max = 0;
  const long long log2 =
      t_max <= 1 ? 0 : static_cast<long long>(std::ceil(std::log2(static_cast<double>(t_max))));
  const long long horizon = t_max + e.gamma + log2;

  // P_ν^(t) is fixed by the reduced exponent; cache one product per value.
  std::vector<std::map<long long, Matrix<F>>> cache(e.terms.size());
  auto product = [&](std::size_t nu, long long t) -> const Matrix<F>& {
    const auto& tr = e.terms[nu].triple;
    const long long thr = tr.periodicity_threshold;
    const long long key = t <= thr ? t : thr + (t - thr) % tr.gamma;
    auto it = cache[nu].find(key);
    if (it == cache[nu].end()) it = cache[nu].emplace(key, csr_product(tr, key).matrix).first;
    return it->second;
  };

  const double tol = field_traits<F>::exact ? 0.0 : 1e-6;
  long long last_mismatch = -1;
  Matrix<F> power = Matrix<F>::identity(a.size());
  for (long long t = 0; t <= horizon; ++t) {
    if (t > 0) power = mat_mul(power, a);
    Matrix<F> sum(a.size());
    for (std::size_t nu = 0; nu < e.terms.size(); ++nu)
      sum = mat_oplus(sum, mat_scalar_mul(tpow(e.terms[nu].lambda, t), product(nu, t)));
    if (!mat_eq(sum, power, tol)) last_mismatch = t;
  }
  const long long t_prime = last_mismatch + 1;
  if (t_prime > t_max) return std::nullopt;
  return t_prime;
}

}  // namespace maxplus
