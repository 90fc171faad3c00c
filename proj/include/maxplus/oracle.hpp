#pragma once

/// @file oracle.hpp
/// Brute-force references for tests and `verify`: dynamic programs over
/// paths of fixed length restricted to a path class, Boolean reachability
/// powers, and the orbit-periodicity conditions with strong access decided
/// by Boolean powers. Nothing here calls the production graph routines;
/// every loop is written out again so the two sides cannot share a bug.

#include <cstdlib>
#include <numeric>
#include <string>
#include <vector>

#include "maxplus/error.hpp"
#include "maxplus/expansion.hpp"
#include "maxplus/matrix.hpp"

namespace maxplus::oracle {

enum class PathClass { all, crit_heavy, mu_heavy, mu_hard };

/// Deflation data needed by the μ-classes, copied out of expansions.
template <class F>
struct DeflationRecord {
  /// level[v] = μ with v ∈ N_μ of the Nachtigall expansion, or −1.
  std::vector<int> level;
  int levels = 0;
  /// Ultimate critical node sets N_μ^u and their λ_μ^u.
  std::vector<std::vector<int>> hard_nodes;
  std::vector<Tropical<F>> hard_lambda;
};

template <class F>
DeflationRecord<F> make_record(const Expansion<F>& nachtigall, const Expansion<F>& ultimate) {
  DeflationRecord<F> r;
  r.level.assign(nachtigall.n, -1);
  r.levels = static_cast<int>(nachtigall.terms.size());
  for (std::size_t mu = 0; mu < nachtigall.terms.size(); ++mu)
    for (int v : nachtigall.terms[mu].triple.nodes()) r.level[v] = static_cast<int>(mu);
  for (const auto& term : ultimate.terms) {
    r.hard_nodes.push_back(term.triple.nodes());
    r.hard_lambda.push_back(term.lambda);
  }
  return r;
}

struct PathClassQuery {
  int i = 0;
  int j = 0;
  long long t = 0;
  PathClass cls = PathClass::all;
  std::vector<int> nodes;  // N_c for crit_heavy
  int mu = 0;              // level for mu_heavy / mu_hard
};

/// Independent per-node cycle means: λ(v) is the best mean of a closed walk
/// through any node mutually reachable with v, from diagonals of A^k,
/// k ≤ n. −∞ for nodes on no cycle.
template <class F>
std::vector<Tropical<F>> node_lambdas(const Matrix<F>& a) {
  const std::size_t n = a.size();
  std::vector<Tropical<F>> through(n);
  Matrix<F> p = a;
  for (std::size_t k = 1; k <= n; ++k) {
    for (std::size_t v = 0; v < n; ++v)
      if (p(v, v).is_finite())
        through[v] = oplus(through[v], Tropical<F>(p(v, v).value() /
                                                   field_traits<F>::from_integer(static_cast<long long>(k))));
    if (k < n) {
      Matrix<F> q(n);
      for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y)
          for (std::size_t z = 0; z < n; ++z) q(x, z) = oplus(q(x, z), otimes(p(x, y), a(y, z)));
      p = q;
    }
  }
  std::vector<std::vector<char>> reach(n, std::vector<char>(n, 0));
  for (std::size_t x = 0; x < n; ++x) {
    reach[x][x] = 1;
    for (std::size_t y = 0; y < n; ++y)
      if (a(x, y).is_finite()) reach[x][y] = 1;
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t x = 0; x < n; ++x)
      if (reach[x][k])
        for (std::size_t y = 0; y < n; ++y)
          if (reach[k][y]) reach[x][y] = 1;
  std::vector<Tropical<F>> out(n);
  for (std::size_t v = 0; v < n; ++v) {
    if (through[v].is_zero()) continue;
    for (std::size_t w = 0; w < n; ++w)
      if (reach[v][w] && reach[w][v]) out[v] = oplus(out[v], through[w]);
  }
  return out;
}

namespace detail {

template <class F>
bool same(const Tropical<F>& x, const Tropical<F>& y) {
  if (x.is_zero() || y.is_zero()) return x.is_zero() == y.is_zero();
  return field_traits<F>::near_zero(x.value() - y.value());
}

/// Forward DP from `start` over an augmented state space. States are
/// (node, tag) with tag < tags; `init` gives the tag at the start node and
/// `next` maps (tag, node entered) to the new tag, or −1 to forbid the move.
/// Returns best[t][node * tags + tag] for t = 0 … t_max.
template <class F, class Init, class Next>
std::vector<std::vector<Tropical<F>>> path_dp(const Matrix<F>& a, int start, long long t_max,
                                              int tags, Init init, Next next) {
  const std::size_t n = a.size();
  const std::size_t states = n * static_cast<std::size_t>(tags);
  std::vector<std::vector<Tropical<F>>> best(static_cast<std::size_t>(t_max) + 1,
                                             std::vector<Tropical<F>>(states));
  const int tag0 = init(start);
  if (tag0 < 0) return best;
  best[0][start * tags + tag0] = Tropical<F>::unit();
  for (long long t = 1; t <= t_max; ++t) {
    const auto& cur = best[t - 1];
    auto& nxt = best[t];
    for (std::size_t u = 0; u < n; ++u)
      for (int g = 0; g < tags; ++g) {
        const auto& w = cur[u * tags + g];
        if (w.is_zero()) continue;
        for (std::size_t v = 0; v < n; ++v) {
          if (a(u, v).is_zero()) continue;
          const int h = next(g, static_cast<int>(v));
          if (h < 0) continue;
          auto& slot = nxt[v * tags + h];
          slot = oplus(slot, Tropical<F>(field_traits<F>::add(w.value(), a(u, v).value())));
        }
      }
  }
  return best;
}

}  // namespace detail

/// Best weights of length-t paths from q.i, for every end node and t ≤ q.t,
/// within the requested class. Row t of the result is indexed by end node.
template <class F>
std::vector<Vector<F>> best_path_weights(const Matrix<F>& a, const PathClassQuery& q,
                                         const DeflationRecord<F>* record = nullptr) {
  const std::size_t n = a.size();
  if (q.i < 0 || static_cast<std::size_t>(q.i) >= n || q.t < 0)
    throw Error(Errc::precondition, "query outside the matrix");
  std::vector<std::vector<Tropical<F>>> best;
  int tags = 1;
  int accept = 0;
  switch (q.cls) {
    case PathClass::all:
      best = detail::path_dp(a, q.i, q.t, 1, [](int) { return 0; }, [](int, int) { return 0; });
      break;
    case PathClass::crit_heavy: {
      std::vector<char> in(n, 0);
      for (int v : q.nodes) in[v] = 1;
      tags = 2;
      accept = 1;
      best = detail::path_dp(a, q.i, q.t, 2, [&](int v) { return static_cast<int>(in[v]); },
                             [&](int g, int v) { return g | in[v]; });
      break;
    }
    case PathClass::mu_heavy: {
      if (!record || q.mu < 0 || q.mu >= record->levels)
        throw Error(Errc::precondition, "μ-heavy query needs a deflation record");
      // Tag: smallest level visited so far; `levels` stands for none.
      const int none = record->levels;
      auto lv = [&](int v) { return record->level[v] < 0 ? none : record->level[v]; };
      tags = none + 1;
      accept = q.mu;
      best = detail::path_dp(a, q.i, q.t, tags, lv, [&](int g, int v) { return std::min(g, lv(v)); });
      break;
    }
    case PathClass::mu_hard: {
      if (!record || q.mu < 0 || q.mu >= static_cast<int>(record->hard_nodes.size()))
        throw Error(Errc::precondition, "μ-hard query needs a deflation record");
      const auto lam = node_lambdas(a);
      const auto& target = record->hard_lambda[q.mu];
      std::vector<char> in(n, 0), allowed(n, 0);
      for (int v : record->hard_nodes[q.mu]) in[v] = 1;
      for (std::size_t v = 0; v < n; ++v) allowed[v] = lam[v] <= target || detail::same(lam[v], target);
      tags = 2;
      accept = 1;
      best = detail::path_dp(
          a, q.i, q.t, 2, [&](int v) { return allowed[v] ? static_cast<int>(in[v]) : -1; },
          [&](int g, int v) { return allowed[v] ? (g | in[v]) : -1; });
      break;
    }
  }
  std::vector<Vector<F>> out(static_cast<std::size_t>(q.t) + 1, Vector<F>(n));
  for (std::size_t t = 0; t < out.size(); ++t)
    for (std::size_t v = 0; v < n; ++v) out[t][v] = best[t][v * tags + accept];
  return out;
}

/// w(Π_{ij,t}) restricted to the class; −∞ when the class is empty.
template <class F>
Tropical<F> best_path_weight(const Matrix<F>& a, const PathClassQuery& q,
                             const DeflationRecord<F>* record = nullptr) {
  if (q.j < 0 || static_cast<std::size_t>(q.j) >= a.size())
    throw Error(Errc::precondition, "query outside the matrix");
  return best_path_weights(a, q, record)[q.t][q.j];
}

using BoolMatrix = std::vector<std::vector<char>>;

inline BoolMatrix bool_product(const BoolMatrix& x, const BoolMatrix& y) {
  const std::size_t n = x.size();
  BoolMatrix z(n, std::vector<char>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      if (x[i][k])
        for (std::size_t j = 0; j < n; ++j)
          if (y[k][j]) z[i][j] = 1;
  return z;
}

/// Pattern of walks of exactly t steps in 𝒟(A).
template <class F>
BoolMatrix boolean_power_reach(const Matrix<F>& a, long long t) {
  const std::size_t n = a.size();
  BoolMatrix result(n, std::vector<char>(n, 0)), base(n, std::vector<char>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    result[i][i] = 1;
    for (std::size_t j = 0; j < n; ++j) base[i][j] = a(i, j).is_finite();
  }
  for (; t > 0; t >>= 1) {
    if (t & 1) result = bool_product(result, base);
    if (t > 1) base = bool_product(base, base);
  }
  return result;
}

/// sa[i][j]: walks i → j exist of every length from 3n² on. The pattern
/// sequence is periodic from there with a period dividing lcm(1, …, n), so
/// one such window decides it.
template <class F>
BoolMatrix strong_access_matrix(const Matrix<F>& a) {
  const std::size_t n = a.size();
  long long window = 1;
  for (long long k = 2; k <= static_cast<long long>(n); ++k) window = std::lcm(window, k);
  BoolMatrix step = boolean_power_reach(a, 1);
  BoolMatrix cur = boolean_power_reach(a, 3LL * static_cast<long long>(n * n));
  BoolMatrix sa = cur;
  for (long long s = 1; s < window; ++s) {
    cur = bool_product(cur, step);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) sa[i][j] = sa[i][j] && cur[i][j];
  }
  return sa;
}

/// Orbit periodicity straight from the two access conditions over L^u,
/// with strong access from Boolean powers.
template <class F>
bool orbit_conditions(const Matrix<F>& a) {
  const std::size_t n = a.size();
  const auto lam = node_lambdas(a);
  BoolMatrix reach(n, std::vector<char>(n, 0));
  BoolMatrix cur = boolean_power_reach(a, 0);
  const BoolMatrix step = boolean_power_reach(a, 1);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) reach[i][j] = reach[i][j] || cur[i][j];
    cur = bool_product(cur, step);
  }
  const auto sa = strong_access_matrix(a);
  for (std::size_t i = 0; i < n; ++i) {
    if (lam[i].is_zero()) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (lam[j].is_zero()) continue;
      if (reach[i][j] && lam[j] < lam[i] && !detail::same(lam[i], lam[j])) return false;
      if (!sa[i][j] && !sa[j][i] && !detail::same(lam[i], lam[j])) return false;
    }
  }
  return true;
}

/// Every class weight for every (i, j) and t ≤ t_max.
template <class F>
struct PathTable {
  long long t_max = 0;
  std::vector<Matrix<F>> all;                     // [t]
  std::vector<Matrix<F>> crit_heavy;              // [t], N_c = critical nodes of A
  std::vector<std::vector<Matrix<F>>> mu_heavy;  // [μ][t]
  std::vector<std::vector<Matrix<F>>> mu_hard;   // [μ][t]
};

inline std::size_t oracle_cap() {
  if (const char* env = std::getenv("TROPICAL_ORACLE_CAP")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<std::size_t>(v);
  }
  return 8;
}

template <class F>
PathTable<F> enumerate_small(const Matrix<F>& a, long long t_max,
                             const DeflationRecord<F>& record,
                             const std::vector<int>& critical_nodes) {
  const std::size_t n = a.size();
  if (n > oracle_cap() || t_max > 60)
    throw Error(Errc::too_large, "n = " + std::to_string(n) + ", t_max = " + std::to_string(t_max));
  if (t_max < 0) throw Error(Errc::precondition, "negative t_max");
  PathTable<F> table;
  table.t_max = t_max;
  const std::size_t steps = static_cast<std::size_t>(t_max) + 1;
  auto blank = [&] { return std::vector<Matrix<F>>(steps, Matrix<F>(n)); };
  table.all = blank();
  table.crit_heavy = blank();
  table.mu_heavy.assign(record.levels, blank());
  table.mu_hard.assign(record.hard_nodes.size(), blank());

  auto fill = [&](std::vector<Matrix<F>>& dst, PathClassQuery q) {
    q.t = t_max;
    for (std::size_t i = 0; i < n; ++i) {
      q.i = static_cast<int>(i);
      const auto rows = best_path_weights(a, q, &record);
      for (std::size_t t = 0; t < steps; ++t)
        for (std::size_t j = 0; j < n; ++j) dst[t](i, j) = rows[t][j];
    }
  };
  fill(table.all, {0, 0, 0, PathClass::all, {}, 0});
  fill(table.crit_heavy, {0, 0, 0, PathClass::crit_heavy, critical_nodes, 0});
  for (int mu = 0; mu < record.levels; ++mu)
    fill(table.mu_heavy[mu], {0, 0, 0, PathClass::mu_heavy, {}, mu});
  for (std::size_t mu = 0; mu < record.hard_nodes.size(); ++mu)
    fill(table.mu_hard[mu], {0, 0, 0, PathClass::mu_hard, {}, static_cast<int>(mu)});
  return table;
}

}  // namespace maxplus::oracle
