#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "maxplus/error.hpp"
#include "maxplus/orbit.hpp"

using namespace maxplus;
using fx::mat;
using fx::Q;
using fx::X;

namespace {

using V = Vector<Rational>;

V unit(std::size_t n, std::initializer_list<int> at) {
  V v(n);
  for (int k : at) v[k] = fx::q(0);
  return v;
}

bool periodic(const Q& a, const V& y) {
  const long long n = static_cast<long long>(a.size());
  const auto trace = simulate_orbit(a, y, 6 * n * n + 2 * ultimate_expand(a).gamma);
  if (trace.detected_period) EXPECT_EQ(trace.gamma_u % *trace.detected_period, 0);
  return trace.detected_period.has_value();
}

/// Growth per step of a^t_ij along t ≡ l (mod γ), read far out.
fx::T late_rate(const Q& a, long long gamma, long long l, int i, int j) {
  const long long t = 4000 - 4000 % gamma + l;
  const auto x = mat_power(a, t)(i, j), y = mat_power(a, t + gamma)(i, j);
  EXPECT_EQ(x.is_zero(), y.is_zero());
  if (x.is_zero()) return fx::T::zero();
  return fx::T((y.value() - x.value()) / gamma);
}

std::vector<Q> reducible_corpus(std::uint64_t seed, int count, std::size_t n_hi) {
  std::mt19937_64 rng(seed);
  std::vector<Q> out;
  while (static_cast<int>(out.size()) < count) {
    const Q a = fx::random_cyclic(rng, 2 + out.size() % (n_hi - 1), -9, 3, 0.35);
    if (scc_decompose(digraph_of(a)).size() > 1) out.push_back(a);
  }
  return out;
}

}  // namespace

TEST(OrbitCheck, Example3) {
  EXPECT_TRUE(is_orbit_periodic(fx::example3a()).verdict);
  const auto r = is_orbit_periodic(fx::example3b());
  EXPECT_FALSE(r.verdict);
  EXPECT_TRUE(r.condition1_violations.empty());
  ASSERT_FALSE(r.support_violations.empty());
  const auto scc = scc_decompose(digraph_of(fx::example3b()));
  bool found = false;
  for (const auto& [x, y] : r.condition2_violations) {
    std::set<int> both{scc.components[x].front(), scc.components[y].front()};
    found = found || both == std::set<int>{0, 4};
  }
  EXPECT_TRUE(found);
  for (const auto& v : r.support_violations) {
    EXPECT_EQ(scc.component_of[v.i], scc.component_of[4]);
    EXPECT_EQ(scc.component_of[v.j], scc.component_of[0]);
  }
}

TEST(OrbitCheck, DiagonalMatrices) {
  EXPECT_TRUE(is_orbit_periodic(Q::identity(3)).verdict);
  // Isolated loops with different means: e_1 ⊕ e_2 has no linear period.
  const Q a = mat({{0, X, X}, {X, -1, X}, {X, X, -5}});
  EXPECT_FALSE(is_orbit_periodic(a).verdict);
  EXPECT_FALSE(simulate_orbit(a, unit(3, {0, 1}), 60).detected_period);
}

TEST(OrbitCheck, AcyclicIsVacuouslyPeriodic) {
  const Q a = mat({{X, 0, X}, {X, X, 2}, {X, X, X}});
  EXPECT_TRUE(is_orbit_periodic(a).verdict);
  const auto trace = simulate_orbit(a, unit(3, {2}), 10);
  ASSERT_TRUE(trace.detected_period);
  EXPECT_TRUE(trace.growth_rate->is_zero());
}

TEST(GrowthRate, CriticalUnitVector) {
  const Q a = fx::example1();
  EXPECT_EQ(orbit_growth_rate(a, unit(4, {0})), fx::q(0));
}

TEST(GrowthRate, Example3) { EXPECT_EQ(orbit_growth_rate(fx::example3a(), unit(6, {0, 5})), fx::q(1)); }

TEST(GrowthRate, Errors) {
  try {
    orbit_growth_rate(fx::example3a(), V(6));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::zero_vector);
  }
  try {
    orbit_growth_rate(fx::example3b(), unit(6, {0}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::not_orbit_periodic);
  }
}

TEST(GrowthRate, MatchesSimulation) {
  std::mt19937_64 rng(61);
  int checked = 0;
  for (const auto& a : reducible_corpus(62, 200, 6)) {
    if (!is_orbit_periodic(a).verdict) continue;
    const std::size_t n = a.size();
    const auto y = fx::random_vector(rng, n, -3, 3, 0.4);
    if (std::all_of(y.begin(), y.end(), [](const auto& v) { return v.is_zero(); })) continue;
    const long long t_max = 6 * static_cast<long long>(n * n) + 2 * ultimate_expand(a).gamma;
    const auto trace = simulate_orbit(a, y, t_max);
    ASSERT_TRUE(trace.detected_period);
    EXPECT_EQ(*trace.growth_rate, orbit_growth_rate(a, y));
    ++checked;
  }
  EXPECT_GT(checked, 50);
}

TEST(Simulate, Example3A) {
  const auto trace = simulate_orbit(fx::example3a(), unit(6, {0, 5}), 40);
  for (long long t = 4; t <= 40; ++t) EXPECT_EQ(trace.samples[t][5], fx::q(1 + 4 * ((t - 4) / 4)));
  ASSERT_TRUE(trace.detected_period);
  EXPECT_EQ(*trace.detected_period, 4);
  EXPECT_EQ(*trace.growth_rate, fx::q(1));
}

TEST(Simulate, Example3BHasNoLinearPeriod) {
  const auto trace = simulate_orbit(fx::example3b(), unit(6, {0, 5}), 40);
  EXPECT_FALSE(trace.detected_period);
  for (long long t = 2; t <= 40; t += 2) EXPECT_EQ(trace.samples[t][5], fx::q(0));
}

TEST(Simulate, EigenvectorIsPeriodicFromStart) {
  std::mt19937_64 rng(63);
  int seen = 0;
  while (seen < 30) {
    const Q a = fx::random_matrix(rng, 5, -9, 3, 0.8);
    const auto cs = component_means(a);
    if (cs.scc.size() != 1) continue;
    const auto crit = critical_structure(a);
    const Q star = kleene_star(mat_scalar_mul(fx::T(-crit.lambda.value()), a));
    V v(5);
    for (int i = 0; i < 5; ++i) v[i] = star(i, crit.critical_nodes.front());
    const auto trace = simulate_orbit(a, v, 20);
    ASSERT_TRUE(trace.detected_period);
    EXPECT_EQ(*trace.transient, 0);
    EXPECT_EQ(*trace.detected_period, 1);
    EXPECT_EQ(*trace.growth_rate, crit.lambda);
    ++seen;
  }
}

TEST(ColumnPeriodicity, IrreducibleAlwaysTrue) {
  for (int j = 0; j < 4; ++j) EXPECT_TRUE(column_periodicity(fx::example1(), j));
}

TEST(ColumnPeriodicity, Example3B) {
  EXPECT_TRUE(column_periodicity(fx::example3b(), 4));
  EXPECT_TRUE(column_periodicity(fx::example3b(), 0));
}

TEST(ColumnPeriodicity, TrivialColumnThrows) {
  try {
    column_periodicity(mat({{0, 0}, {X, X}}), 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::trivial_column);
  }
}

TEST(ColumnPeriodicity, MatchesSimulation) {
  for (const auto& a : reducible_corpus(64, 150, 6)) {
    const auto cs = component_means(a);
    for (std::size_t j = 0; j < a.size(); ++j) {
      if (cs.scc.trivial[cs.scc.component_of[j]]) continue;
      EXPECT_EQ(column_periodicity(a, static_cast<int>(j)), periodic(a, unit(a.size(), {static_cast<int>(j)})));
    }
  }
}

TEST(PairPeriodicity, SameComponent) { EXPECT_TRUE(pair_periodicity(fx::example3b(), 0, 2)); }

TEST(PairPeriodicity, Example3B) {
  for (int j = 0; j < 4; ++j) EXPECT_FALSE(pair_periodicity(fx::example3b(), 5, j));
  for (int j = 0; j < 4; ++j) EXPECT_TRUE(pair_periodicity(fx::example3a(), 5, j));
}

TEST(PairPeriodicity, MatchesSimulationOverComponents) {
  for (const auto& a : reducible_corpus(65, 150, 6)) {
    const auto cs = component_means(a);
    const std::size_t n = a.size();
    std::vector<int> periodic_cols;
    for (std::size_t j = 0; j < n; ++j)
      if (!cs.scc.trivial[cs.scc.component_of[j]] && column_periodicity(a, static_cast<int>(j)))
        periodic_cols.push_back(static_cast<int>(j));
    for (int i : periodic_cols)
      for (int j : periodic_cols) {
        if (j < i) continue;
        bool all = true;
        for (int k : periodic_cols)
          for (int l : periodic_cols)
            if (cs.scc.component_of[k] == cs.scc.component_of[i] &&
                cs.scc.component_of[l] == cs.scc.component_of[j])
              all = all && periodic(a, unit(n, {k, l}));
        EXPECT_EQ(pair_periodicity(a, i, j), all);
      }
  }
}

TEST(PairPeriodicity, PreconditionThrows) {
  try {
    pair_periodicity(mat({{0, 0}, {X, X}}), 0, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::precondition);
  }
}

TEST(OrbitRoutes, VerdictEqualsColumnAndPairChecks) {
  for (const auto& a : reducible_corpus(66, 200, 7)) {
    const auto cs = component_means(a);
    std::vector<int> lu;
    for (std::size_t j = 0; j < a.size(); ++j)
      if (!cs.scc.trivial[cs.scc.component_of[j]]) lu.push_back(static_cast<int>(j));
    bool all = true;
    for (int j : lu) all = all && column_periodicity(a, j);
    if (all)
      for (int i : lu)
        for (int j : lu) all = all && pair_periodicity(a, i, j);
    EXPECT_EQ(is_orbit_periodic(a).verdict, all);
  }
}

TEST(EntrySequences, RatesComeFromUltimateTerms) {
  // Along each residue class the entries of A^t grow at the largest λ among
  // ultimate terms whose U^(l) entry is finite; inside one component that is
  // the component's own λ, and no walk can beat its best visited λ.
  std::mt19937_64 rng(67);
  for (const auto& a : reducible_corpus(68, 60, 5)) {
    const std::size_t n = a.size();
    const auto u = ultimate_expand(a);
    const auto cs = component_means(a);
    for (long long l = 0; l < u.gamma; ++l)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          fx::T want;
          for (std::size_t nu = 0; nu < u.terms.size(); ++nu)
            if (csr_product(u.terms[nu].triple, l).matrix(i, j).is_finite()) want = oplus(want, u.terms[nu].lambda);
          const auto rate = late_rate(a, u.gamma, l, static_cast<int>(i), static_cast<int>(j));
          EXPECT_EQ(rate, want);
          const int ci = cs.scc.component_of[i];
          if (ci == cs.scc.component_of[j] && !cs.scc.trivial[ci] && rate.is_finite())
            EXPECT_EQ(rate, cs.lambda_of_component[ci]);
        }
    // Random walks: the residue of the walk length grows at least at the
    // best λ of a nontrivial component the walk visits.
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (int s = 0; s < 40; ++s) {
      int v = static_cast<int>(pick(rng));
      const int start = v;
      fx::T best = cs.lambda_of_component[cs.scc.component_of[v]];
      long long len = 0;
      for (int step = 0; step < 12; ++step) {
        std::vector<int> next;
        for (std::size_t w = 0; w < n; ++w)
          if (a(v, w).is_finite()) next.push_back(static_cast<int>(w));
        if (next.empty()) break;
        v = next[pick(rng) % next.size()];
        ++len;
        best = oplus(best, cs.lambda_of_component[cs.scc.component_of[v]]);
      }
      if (len == 0 || best.is_zero()) continue;
      EXPECT_GE(late_rate(a, u.gamma, len % u.gamma, start, v), best);
    }
  }
}
