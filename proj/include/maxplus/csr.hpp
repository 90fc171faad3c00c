#pragma once

/// @file csr.hpp
/// CSR products P(t) = C ⊗ S^t ⊗ R of a definite matrix.
///
/// Given a definite A (λ(A) = 0) and a completely reducible subgraph
/// (N_c, E_c) of its critical graph with cyclicity γ, let B = (A^γ)*. Then C
/// keeps the columns of B indexed by N_c, R keeps the rows of B indexed by
/// N_c, and S keeps the entries of A on E_c. Everything else is −∞.
///
/// P(t) is periodic with period γ from t = 0 and satisfies the group law
/// P(t1 + t2) = P(t1) ⊗ P(t2). Rows (columns) of P indexed by N_c move
/// between cyclic classes as t advances; csr_rotate exploits this to shift a
/// block S^r R (or C S^r) to another exponent without any multiplication.

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "maxplus/error.hpp"
#include "maxplus/graph.hpp"
#include "maxplus/kleene.hpp"
#include "maxplus/matrix.hpp"

namespace maxplus {

template <class F>
struct CsrTriple {
  Matrix<F> c;
  Matrix<F> s;
  Matrix<F> r;
  CriticalSubgraph subgraph;  // N_c and E_c
  CyclicStructure cyclic;     // components, cyclicities and classes of the subgraph
  long long gamma = 1;
  /// z with D⁻¹SD Boolean; lets rotation work whether or not S is Boolean.
  Scaling<F> visualization;
  /// S^t is periodic (period γ) for t at or beyond this exponent.
  long long periodicity_threshold = 0;

  const std::vector<int>& nodes() const { return subgraph.nodes; }
  std::size_t size() const { return c.size(); }
};

template <class F>
struct CsrProduct {
  Matrix<F> matrix;
  long long t_residue = 0;
};

/// Triple for an explicit critical subgraph of a definite matrix.
template <class F>
CsrTriple<F> csr_from_subgraph(const Matrix<F>& a, const CriticalSubgraph& sub) {
  const std::size_t n = a.size();
  if (sub.nodes.empty()) throw Error(Errc::precondition, "empty critical subgraph");
  CsrTriple<F> t;
  t.subgraph = sub;
  t.cyclic = cyclic_structure(n, sub.edges);
  for (int v : sub.nodes)
    if (t.cyclic.component_of[v] < 0)
      throw Error(Errc::precondition, "subgraph node " + std::to_string(v) + " is not on a cycle");
  t.gamma = t.cyclic.gamma;

  const Matrix<F> b = kleene_star(mat_power(a, static_cast<unsigned long long>(t.gamma)));
  std::vector<char> in_nc(n, 0);
  for (int v : sub.nodes) in_nc[v] = 1;
  t.c = Matrix<F>(n);
  t.r = Matrix<F>(n);
  t.s = Matrix<F>(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (in_nc[j]) t.c(i, j) = b(i, j);
      if (in_nc[i]) t.r(i, j) = b(i, j);
    }
  }
  for (const auto& [u, v] : sub.edges) {
    if (a(u, v).is_zero()) throw Error(Errc::precondition, "subgraph edge absent from matrix");
    t.s(u, v) = a(u, v);
  }
  t.visualization = visualizing_scaling(t.s);
  for (const auto& comp : t.cyclic.components)
    t.periodicity_threshold =
        std::max(t.periodicity_threshold, wielandt(static_cast<long long>(comp.size())));
  return t;
}

/// Triple of a definite matrix for the canonical (whole critical graph) or
/// single-cycle selection.
template <class F>
CsrTriple<F> csr_build(const Matrix<F>& a, SelectionRule rule = SelectionRule::canonical) {
  const auto cs = critical_structure(a);
  if (!field_traits<F>::near_zero(cs.lambda.value()))
    throw Error(Errc::not_definite, "normalize by −λ first");
  return csr_from_subgraph(a, select_critical(cs, rule));
}

/// C ⊗ S^t ⊗ R. Exponents past the periodicity threshold of S are reduced to
/// the representative in [threshold, threshold + γ).
template <class F>
CsrProduct<F> csr_product(const CsrTriple<F>& triple, long long t) {
  if (t < 0) throw Error(Errc::precondition, "negative exponent");
  const long long thr = triple.periodicity_threshold;
  const long long e = t <= thr ? t : thr + (t - thr) % triple.gamma;
  CsrProduct<F> p;
  p.matrix = mat_mul(mat_mul(triple.c, mat_power(triple.s, static_cast<unsigned long long>(e))),
                     triple.r);
  p.t_residue = t % triple.gamma;
  return p;
}

/// Group law self-test: P(t1 + t2) == P(t1) ⊗ P(t2).
template <class F>
bool csr_group_check(const CsrTriple<F>& triple, long long t1, long long t2, double tol = 0.0) {
  const auto lhs = csr_product(triple, t1 + t2).matrix;
  const auto rhs = mat_mul(csr_product(triple, t1).matrix, csr_product(triple, t2).matrix);
  return mat_eq(lhs, rhs, tol);
}

enum class BlockKind {
  rows,     // S^r ⊗ R type: rows outside N_c are −∞
  columns,  // C ⊗ S^r type: columns outside N_c are −∞
};

namespace detail {

/// Shift a critical-row (or critical-column) block by dt steps along the
/// cyclic classes of `cyc`. Rows/columns are compared after the scaling z
/// that makes S Boolean, where all members of one class coincide.
template <class F>
Matrix<F> rotate_block(const CyclicStructure& cyc, const Scaling<F>& z, const Matrix<F>& m,
                       long long dt, BlockKind kind) {
  const std::size_t n = m.size();
  Matrix<F> out(n);
  for (std::size_t comp = 0; comp < cyc.components.size(); ++comp) {
    const auto& nodes = cyc.components[comp];
    const long long g = cyc.cyclicity[comp];
    std::vector<int> representative(static_cast<std::size_t>(g), -1);
    for (int v : nodes)  // nodes are sorted: keep the smallest per class
      if (representative[cyc.class_of[v]] < 0) representative[cyc.class_of[v]] = v;
    for (int v : nodes) {
      const long long c = cyc.class_of[v];
      if (kind == BlockKind::rows) {
        const int src = representative[mod_floor(c + dt, g)];
        for (std::size_t k = 0; k < n; ++k)
          if (m(src, k).is_finite())
            out(v, k) = Tropical<F>(m(src, k).value() - z.z[src] + z.z[v]);
      } else {
        const int src = representative[mod_floor(c - dt, g)];
        for (std::size_t k = 0; k < n; ++k)
          if (m(k, src).is_finite())
            out(k, v) = Tropical<F>(m(k, src).value() + z.z[src] - z.z[v]);
      }
    }
  }
  return out;
}

}  // namespace detail

/// From a block S^r ⊗ R (kind = rows) produce S^(r+dt) ⊗ R, or from
/// C ⊗ S^r (kind = columns) produce C ⊗ S^(r+dt), by permuting cyclic classes.
template <class F>
Matrix<F> csr_rotate(const CsrTriple<F>& triple, const Matrix<F>& m, long long dt, BlockKind kind) {
  const std::size_t n = triple.size();
  if (m.size() != n) throw Error(Errc::dimension, "block size differs from triple");
  std::vector<char> in_nc(n, 0);
  for (int v : triple.nodes()) in_nc[v] = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (in_nc[i]) continue;
    for (std::size_t k = 0; k < n; ++k) {
      const auto& x = kind == BlockKind::rows ? m(i, k) : m(k, i);
      if (x.is_finite())
        throw Error(Errc::invalid_block, std::string(kind == BlockKind::rows ? "row " : "column ") +
                                             std::to_string(i) + " outside N_c is not −∞");
    }
  }
  return detail::rotate_block(triple.cyclic, triple.visualization, m, dt, kind);
}

/// Rows of S^t ⊗ R (kind = rows) or columns of C ⊗ S^t (kind = columns) by
/// literal multiplication; the reference for csr_rotate.
template <class F>
Matrix<F> csr_block(const CsrTriple<F>& triple, long long t, BlockKind kind) {
  const auto st = mat_power(triple.s, static_cast<unsigned long long>(t));
  return kind == BlockKind::rows ? mat_mul(st, triple.r) : mat_mul(triple.c, st);
}

}  // namespace maxplus
