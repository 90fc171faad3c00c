#pragma once

/// @file graph.hpp
/// Associated digraph of a max-plus matrix: strongly connected components,
/// maximum cycle means (Karp), the critical graph with its cyclicities and
/// cyclic classes, and strong access between nodes.

#include <algorithm>
#include <cstddef>
#include <deque>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "maxplus/error.hpp"
#include "maxplus/matrix.hpp"
#include "maxplus/scalar.hpp"

namespace maxplus {

using Edge = std::pair<int, int>;

template <class F>
struct Arc {
  int from;
  int to;
  F weight;
};

/// Digraph 𝒟(A): arc (i, j) present iff a_ij ≠ −∞.
template <class F>
struct Digraph {
  std::size_t n = 0;
  std::vector<Arc<F>> arcs;
  std::vector<std::vector<std::size_t>> out;  // arc indices by source node
};

template <class F>
Digraph<F> digraph_of(const Matrix<F>& a) {
  Digraph<F> g;
  g.n = a.size();
  g.out.resize(g.n);
  for (std::size_t i = 0; i < g.n; ++i) {
    for (std::size_t j = 0; j < g.n; ++j) {
      if (a(i, j).is_zero()) continue;
      g.out[i].push_back(g.arcs.size());
      g.arcs.push_back({static_cast<int>(i), static_cast<int>(j), a(i, j).value()});
    }
  }
  return g;
}

struct SccDecomposition {
  std::vector<int> component_of;
  /// Components in topological order: if X accesses Y and X ≠ Y, X comes first.
  std::vector<std::vector<int>> components;
  /// Single node without a self-loop.
  std::vector<bool> trivial;
  /// access[x][y]: some node of x reaches some node of y (reflexive).
  std::vector<std::vector<char>> access;

  bool accesses(int x, int y) const { return access[x][y] != 0; }
  std::size_t size() const { return components.size(); }
};

namespace detail {

/// Tarjan's algorithm, iterative. Emits components sinks-first.
inline std::vector<std::vector<int>> tarjan(const std::vector<std::vector<int>>& succ) {
  const int n = static_cast<int>(succ.size());
  std::vector<int> index(n, -1), low(n, 0);
  std::vector<char> on_stack(n, 0);
  std::vector<int> stack;
  std::vector<std::vector<int>> out;
  int counter = 0;
  std::vector<std::pair<int, std::size_t>> call;
  for (int root = 0; root < n; ++root) {
    if (index[root] != -1) continue;
    call.push_back({root, 0});
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      auto& [v, pos] = call.back();
      if (pos < succ[v].size()) {
        int w = succ[v][pos++];
        if (index[w] == -1) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        std::vector<int> comp;
        int w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp.push_back(w);
        } while (w != v);
        std::sort(comp.begin(), comp.end());
        out.push_back(std::move(comp));
      }
      int finished = v;
      call.pop_back();
      if (!call.empty()) {
        int parent = call.back().first;
        low[parent] = std::min(low[parent], low[finished]);
      }
    }
  }
  return out;
}

inline SccDecomposition decompose(const std::vector<std::vector<int>>& succ) {
  const std::size_t n = succ.size();
  SccDecomposition d;
  d.components = tarjan(succ);
  std::reverse(d.components.begin(), d.components.end());
  d.component_of.assign(n, -1);
  for (std::size_t c = 0; c < d.components.size(); ++c)
    for (int v : d.components[c]) d.component_of[v] = static_cast<int>(c);
  const std::size_t m = d.components.size();
  d.trivial.assign(m, false);
  for (std::size_t c = 0; c < m; ++c) {
    if (d.components[c].size() != 1) continue;
    int v = d.components[c][0];
    d.trivial[c] = std::find(succ[v].begin(), succ[v].end(), v) == succ[v].end();
  }
  // Sinks are last, so fill access from the back.
  d.access.assign(m, std::vector<char>(m, 0));
  for (std::size_t c = m; c-- > 0;) {
    d.access[c][c] = 1;
    for (int v : d.components[c]) {
      for (int w : succ[v]) {
        auto cw = static_cast<std::size_t>(d.component_of[w]);
        if (cw == c) continue;
        for (std::size_t y = 0; y < m; ++y)
          if (d.access[cw][y]) d.access[c][y] = 1;
      }
    }
  }
  return d;
}

}  // namespace detail

template <class F>
SccDecomposition scc_decompose(const Digraph<F>& g) {
  std::vector<std::vector<int>> succ(g.n);
  for (const auto& arc : g.arcs) succ[arc.from].push_back(arc.to);
  return detail::decompose(succ);
}

/// Maximum cycle mean of the subgraph induced by `component` (Karp).
/// Returns −∞ when the induced subgraph has no cycle (trivial component).
template <class F>
Tropical<F> max_cycle_mean(const Digraph<F>& g, const std::vector<int>& component) {
  const std::size_t m = component.size();
  if (m == 0) return Tropical<F>::zero();
  std::vector<int> local(g.n, -1);
  for (std::size_t k = 0; k < m; ++k) local[component[k]] = static_cast<int>(k);
  std::vector<Arc<F>> inner;
  for (int v : component)
    for (std::size_t idx : g.out[v])
      if (local[g.arcs[idx].to] >= 0) inner.push_back(g.arcs[idx]);
  if (inner.empty()) return Tropical<F>::zero();

  // walk[k][v]: heaviest walk of exactly k arcs from the first node to v.
  std::vector<std::vector<Tropical<F>>> walk(m + 1, std::vector<Tropical<F>>(m));
  walk[0][0] = Tropical<F>::unit();
  for (std::size_t k = 1; k <= m; ++k) {
    for (const auto& arc : inner) {
      const auto& prev = walk[k - 1][local[arc.from]];
      if (prev.is_zero()) continue;
      auto& cur = walk[k][local[arc.to]];
      cur = oplus(cur, Tropical<F>(field_traits<F>::add(prev.value(), arc.weight)));
    }
  }
  Tropical<F> best = Tropical<F>::zero();
  for (std::size_t v = 0; v < m; ++v) {
    if (walk[m][v].is_zero()) continue;
    Tropical<F> worst;
    bool have = false;
    for (std::size_t k = 0; k < m; ++k) {
      if (walk[k][v].is_zero()) continue;
      F mean = (walk[m][v].value() - walk[k][v].value()) /
               field_traits<F>::from_integer(static_cast<long long>(m - k));
      if (!have || Tropical<F>(mean) < worst) worst = Tropical<F>(mean);
      have = true;
    }
    if (have) best = oplus(best, worst);
  }
  return best;
}

/// A completely reducible subdigraph selected from a critical graph.
struct CriticalSubgraph {
  std::vector<int> nodes;   // sorted
  std::vector<Edge> edges;  // sorted
};

/// Components, cyclicities and cyclic classes of a completely reducible
/// digraph given by its edges.
struct CyclicStructure {
  std::vector<std::vector<int>> components;
  std::vector<long long> cyclicity;
  std::vector<int> component_of;  // node → component, or −1
  std::vector<int> class_of;      // node → class in [0, cyclicity), or −1
  long long gamma = 1;            // l.c.m. of cyclicities
};

/// Cyclic classes by BFS levels: the cyclicity of a strongly connected
/// component is the gcd of level(u) + 1 − level(v) over its edges and the
/// class of a node is its level modulo the cyclicity.
inline CyclicStructure cyclic_structure(std::size_t n, const std::vector<Edge>& edges) {
  std::vector<std::vector<int>> succ(n);
  for (const auto& [u, v] : edges) succ[u].push_back(v);
  for (auto& s : succ) std::sort(s.begin(), s.end());
  SccDecomposition scc = detail::decompose(succ);
  CyclicStructure cs;
  cs.component_of.assign(n, -1);
  cs.class_of.assign(n, -1);
  std::vector<long long> level(n, -1);
  for (std::size_t c = 0; c < scc.size(); ++c) {
    if (scc.trivial[c]) continue;
    const auto& comp = scc.components[c];
    const int id = static_cast<int>(cs.components.size());
    const int root = comp.front();
    std::deque<int> queue{root};
    level[root] = 0;
    while (!queue.empty()) {
      int u = queue.front();
      queue.pop_front();
      for (int v : succ[u]) {
        if (scc.component_of[v] != static_cast<int>(c) || level[v] != -1) continue;
        level[v] = level[u] + 1;
        queue.push_back(v);
      }
    }
    long long g = 0;
    for (int u : comp)
      for (int v : succ[u])
        if (scc.component_of[v] == static_cast<int>(c)) g = gcd_ll(g, level[u] + 1 - level[v]);
    for (int u : comp) {
      cs.component_of[u] = id;
      cs.class_of[u] = static_cast<int>(level[u] % g);
    }
    cs.components.push_back(comp);
    cs.cyclicity.push_back(g);
    cs.gamma = lcm_ll(cs.gamma, g);
  }
  return cs;
}

/// Per-matrix record of λ, SCCs and the critical graph 𝒞(A).
template <class F>
struct CriticalStructure {
  std::size_t n = 0;
  Tropical<F> lambda;
  SccDecomposition scc;
  std::vector<Tropical<F>> lambda_of_component;  // indexed like scc.components
  std::vector<int> critical_nodes;
  std::vector<Edge> critical_edges;
  CyclicStructure cyclic;  // components of 𝒞(A) with cyclicities and classes

  const std::vector<std::vector<int>>& critical_components() const { return cyclic.components; }
  long long cyclicity_of(std::size_t comp) const { return cyclic.cyclicity.at(comp); }
  long long gamma_lcm() const { return cyclic.gamma; }
  Tropical<F> lambda_of_node(int v) const { return lambda_of_component[scc.component_of[v]]; }
  bool is_critical(int v) const { return cyclic.component_of[v] >= 0; }
};

namespace detail {

template <class F>
void fill_components(CriticalStructure<F>& cs, const Digraph<F>& g) {
  cs.n = g.n;
  cs.scc = scc_decompose(g);
  cs.lambda_of_component.assign(cs.scc.size(), Tropical<F>::zero());
  cs.lambda = Tropical<F>::zero();
  for (std::size_t c = 0; c < cs.scc.size(); ++c) {
    if (cs.scc.trivial[c]) continue;
    cs.lambda_of_component[c] = max_cycle_mean(g, cs.scc.components[c]);
    cs.lambda = oplus(cs.lambda, cs.lambda_of_component[c]);
  }
}

}  // namespace detail

/// Components and their maximum cycle means only; no critical graph.
/// Works on acyclic matrices too (λ = −∞).
template <class F>
CriticalStructure<F> component_means(const Matrix<F>& a) {
  CriticalStructure<F> cs;
  detail::fill_components(cs, digraph_of(a));
  cs.cyclic.component_of.assign(a.size(), -1);
  cs.cyclic.class_of.assign(a.size(), -1);
  return cs;
}

/// Full analysis. An edge (i, j) is critical iff, after normalizing by −λ,
/// a'_ij ⊗ (A'^*)_ji equals the unity.
template <class F>
CriticalStructure<F> critical_structure(const Matrix<F>& a) {
  const auto g = digraph_of(a);
  CriticalStructure<F> cs;
  detail::fill_components(cs, g);
  if (cs.lambda.is_zero()) throw Error(Errc::no_cycles);
  const Tropical<F> shift(-cs.lambda.value());
  const Matrix<F> normalized = mat_scalar_mul(shift, a);
  const Matrix<F> star = detail::floyd_warshall_star(normalized);
  for (const auto& arc : g.arcs) {
    if (cs.scc.component_of[arc.from] != cs.scc.component_of[arc.to]) continue;
    const auto& back = star(arc.to, arc.from);
    if (back.is_zero()) continue;
    if (field_traits<F>::near_zero(normalized(arc.from, arc.to).value() + back.value()))
      cs.critical_edges.push_back({arc.from, arc.to});
  }
  std::sort(cs.critical_edges.begin(), cs.critical_edges.end());
  cs.cyclic = cyclic_structure(a.size(), cs.critical_edges);
  for (std::size_t v = 0; v < a.size(); ++v)
    if (cs.cyclic.component_of[v] >= 0) cs.critical_nodes.push_back(static_cast<int>(v));
  return cs;
}

enum class SelectionRule { canonical, single_cycle };

/// The whole critical graph (canonical) or one critical cycle: the shortest
/// cycle through the smallest critical node, ties broken towards smaller
/// successor indices.
template <class F>
CriticalSubgraph select_critical(const CriticalStructure<F>& cs, SelectionRule rule) {
  CriticalSubgraph sub;
  if (rule == SelectionRule::canonical) {
    sub.nodes = cs.critical_nodes;
    sub.edges = cs.critical_edges;
    return sub;
  }
  const int start = cs.critical_nodes.front();
  std::vector<std::vector<int>> succ(cs.n);
  for (const auto& [u, v] : cs.critical_edges) succ[u].push_back(v);
  std::vector<int> parent(cs.n, -1);
  std::vector<char> seen(cs.n, 0);
  std::deque<int> queue{start};
  seen[start] = 1;
  int last = -1;
  while (!queue.empty() && last < 0) {
    int u = queue.front();
    queue.pop_front();
    for (int v : succ[u]) {  // critical_edges are sorted, so succ is ascending
      if (v == start) {
        last = u;
        break;
      }
      if (seen[v]) continue;
      seen[v] = 1;
      parent[v] = u;
      queue.push_back(v);
    }
  }
  std::vector<int> cycle;
  for (int v = last; v != -1; v = parent[v]) cycle.push_back(v);
  std::reverse(cycle.begin(), cycle.end());  // start … last
  for (std::size_t k = 0; k < cycle.size(); ++k)
    sub.edges.push_back({cycle[k], cycle[(k + 1) % cycle.size()]});
  sub.nodes = cycle;
  std::sort(sub.nodes.begin(), sub.nodes.end());
  std::sort(sub.edges.begin(), sub.edges.end());
  return sub;
}

/// Permutation of the cyclic classes of critical component `comp` induced by
/// paths of length t: class c goes to class (c + t) mod γ.
template <class F>
std::vector<int> cyclic_class_shift(const CriticalStructure<F>& cs, std::size_t comp, long long t) {
  if (comp >= cs.cyclic.components.size())
    throw Error(Errc::unknown_component, "critical component " + std::to_string(comp));
  const long long g = cs.cyclic.cyclicity[comp];
  std::vector<int> perm(static_cast<std::size_t>(g));
  for (long long c = 0; c < g; ++c) perm[c] = static_cast<int>(mod_floor(c + t, g));
  return perm;
}

/// Wielandt number W(k) = (k − 1)² + 1.
inline long long wielandt(long long k) { return (k - 1) * (k - 1) + 1; }

namespace detail {

using BoolMatrix = std::vector<std::vector<char>>;

inline BoolMatrix bool_mul(const BoolMatrix& a, const BoolMatrix& b) {
  const std::size_t n = a.size();
  BoolMatrix c(n, std::vector<char>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      if (a[i][k])
        for (std::size_t j = 0; j < n; ++j) c[i][j] |= b[k][j];
  return c;
}

}  // namespace detail

/// i strongly accesses j: paths i → j exist of every length beyond some T.
/// Boolean powers of the support are inspected on one full period starting
/// at t₀ = 3n², which lies beyond the Boolean transient.
template <class F>
bool strong_access(const Matrix<F>& a, int i, int j) {
  const std::size_t n = a.size();
  detail::BoolMatrix pattern(n, std::vector<char>(n, 0));
  std::vector<Edge> inner;
  std::vector<std::vector<int>> succ(n);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = 0; v < n; ++v)
      if (a(u, v).is_finite()) {
        pattern[u][v] = 1;
        succ[u].push_back(static_cast<int>(v));
      }
  const auto scc = detail::decompose(succ);
  for (std::size_t u = 0; u < n; ++u)
    for (int v : succ[u])
      if (scc.component_of[u] == scc.component_of[v]) inner.push_back({static_cast<int>(u), v});
  const long long period = cyclic_structure(n, inner).gamma;

  unsigned long long t0 = 3ULL * n * n;
  detail::BoolMatrix power(n, std::vector<char>(n, 0));
  for (std::size_t u = 0; u < n; ++u) power[u][u] = 1;
  detail::BoolMatrix base = pattern;
  for (unsigned long long e = t0; e > 0; e >>= 1ULL) {
    if (e & 1ULL) power = detail::bool_mul(power, base);
    if (e > 1) base = detail::bool_mul(base, base);
  }
  std::vector<char> reach = power[i];
  for (long long s = 0; s < period; ++s) {
    if (!reach[j]) return false;
    std::vector<char> next(n, 0);
    for (std::size_t k = 0; k < n; ++k)
      if (reach[k])
        for (std::size_t v = 0; v < n; ++v) next[v] |= pattern[k][v];
    reach = std::move(next);
  }
  return true;
}

}  // namespace maxplus
