#include <cmath>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "spectra/audit.hpp"
#include "spectra/errors.hpp"
#include "spectra/random.hpp"

using namespace spectra;

namespace {

std::size_t naive_symdiff(const oracle::Matrix& a, std::size_t x, std::size_t y) {
  std::size_t d = 0;
  for (std::size_t w = 0; w < a.size(); ++w) d += a[x][w] != a[y][w];
  return d;
}

VertexSet naive_violators(const oracle::Matrix& a, const VertexSet& w, double eps) {
  const std::size_t n = a.size();
  const auto ws = w.members();
  VertexSet y(n);
  for (std::size_t v = 0; v < n; ++v) {
    std::size_t in = 0, out = 0;
    for (auto u : ws) {
      if (u == v) continue;
      (a[v][u] ? in : out) += 1;
    }
    if (static_cast<double>(in) < eps * static_cast<double>(ws.size()) ||
        static_cast<double>(out) < eps * static_cast<double>(ws.size()))
      y.insert(v);
  }
  return y;
}

// gnp(n, 1/2) in which the first `k` vertices lose every edge to the rest.
Graph planted_sparse_block(std::size_t n, std::size_t k, std::uint64_t seed) {
  const Graph g = oracle::random_graph(n, 0.5, seed);
  GraphBuilder b(n);
  for (auto [u, v] : g.edges())
    if ((u < k) == (v < k)) b.add_edge(u, v);
  return std::move(b).build();
}

}  // namespace

TEST(Audit, DensityBounds) {
  EXPECT_FALSE(density_bounds_check(generate({Model::complete, 10, 0}, 0), 0.1).within_bounds);
  EXPECT_FALSE(density_bounds_check(Graph(10), 0.1).within_bounds);
  const auto d = density_bounds_check(oracle::random_graph(100, 0.5, 1), 0.1);
  EXPECT_TRUE(d.within_bounds);
  EXPECT_NEAR(d.density, 0.5, 0.05);
  EXPECT_THROW(density_bounds_check(Graph(1), 0.1), ContractError);
}

TEST(Audit, DiversityProfileMatchesOracle) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const std::size_t n = 10 + seed * 4;
    const Graph g = oracle::random_graph(n, 0.5, 40 + seed);
    const auto a = oracle::matrix(g);
    const double c = 0.3 + 0.01 * static_cast<double>(seed);
    const auto prof = diversity_profile(g, c);
    for (std::size_t x = 0; x < n; ++x) {
      std::size_t cnt = 0;
      for (std::size_t y = 0; y < n; ++y)
        if (y != x && static_cast<double>(naive_symdiff(a, x, y)) < c * static_cast<double>(n)) ++cnt;
      EXPECT_EQ(prof[x], cnt);
    }
  }
  EXPECT_THROW(diversity_profile(Graph(4), 0.0), ContractError);
}

TEST(Audit, IsDiverseThreshold) {
  const std::vector<std::size_t> prof(16, 2);  // 16^0.25 = 2
  EXPECT_TRUE(is_diverse(prof, 0.25));
  auto over = prof;
  over[3] = 3;
  EXPECT_FALSE(is_diverse(over, 0.25));
}

TEST(Audit, CloseComplementCountMatchesOracle) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const std::size_t n = 12 + seed * 3;
    const Graph g = oracle::random_graph(n, 0.5, 60 + seed);
    const auto a = oracle::matrix(g);
    const double thr = 0.5;
    std::size_t expect = 0;
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = x + 1; y < n; ++y) {
        std::size_t d = 0;
        for (std::size_t w = 0; w < n; ++w) {
          const bool ny = w != y && !a[y][w];
          d += a[x][w] != ny;
        }
        if (static_cast<double>(d) < thr * static_cast<double>(n)) ++expect;
      }
    EXPECT_EQ(close_complement_pair_count(g, thr), expect);
  }
}

TEST(Audit, PairDiversityWitnessIsValidWhenFound) {
  std::size_t found = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const std::size_t n = 40;
    const Graph g = oracle::random_graph(n, 0.5, 80 + seed);
    const auto all = VertexSet::full(n);
    const double c = 0.9, delta = 0.25, alpha = 0.5;
    const auto wit = pair_diversity_witness(g, c, delta, alpha);
    if (!wit) continue;
    ++found;
    EXPECT_GE(static_cast<double>(symdiff_size(g, Unit::single(wit->x.first), Unit::single(wit->x.second), all, true)),
              alpha * n);
    EXPECT_GE(static_cast<double>(wit->family.size()), std::pow(40.0, delta));
    VertexSet used(n);
    wit->x.for_each_vertex([&](Vertex v) { used.insert(v); });
    for (const auto& y : wit->family) {
      y.for_each_vertex([&](Vertex v) {
        EXPECT_FALSE(used.contains(v));
        used.insert(v);
      });
      EXPECT_LT(static_cast<double>(symdiff_size(g, wit->x, y, all)), c * n);
    }
  }
  EXPECT_GT(found, 0u);
  EXPECT_FALSE(pair_diversity_witness(oracle::random_graph(60, 0.5, 1), 0.05, 0.25, 0.5).has_value());
}

TEST(Audit, RichnessViolatorsMatchOracle) {
  std::mt19937_64 rng(2);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const std::size_t n = 20 + seed * 6;
    const Graph g = oracle::random_graph(n, 0.5, 200 + seed);
    const VertexSet w = oracle::random_subset(n, 0.3, rng);
    EXPECT_EQ(richness_violators(g, w, 0.3), naive_violators(oracle::matrix(g), w, 0.3));
  }
}

TEST(Audit, AuditWitnessesAreGenuine) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const std::size_t n = 120;
    const Graph g = planted_sparse_block(n, 8 + seed, 300 + seed);
    AuditParams ap;
    ap.seed = seed;
    const auto v = richness_audit(g, ap);
    ASSERT_EQ(v.status, RichnessStatus::witness_found);
    const auto& w = *v.witness;
    EXPECT_GE(static_cast<double>(w.w.size()), std::ceil(ap.delta * n));
    EXPECT_GE(static_cast<double>(w.y.size()), std::pow(static_cast<double>(n), ap.delta));
    EXPECT_EQ(w.y, naive_violators(oracle::matrix(g), w.w, ap.epsilon));
    EXPECT_LE(v.budget_used, ap.sample_budget);
  }
}

TEST(Audit, GnpHasNoWitnessInBudget) {
  AuditParams ap;
  const auto v = richness_audit(oracle::random_graph(256, 0.5, 4), ap);
  EXPECT_EQ(v.status, RichnessStatus::no_witness_in_budget);
  EXPECT_EQ(v.budget_used, ap.sample_budget);
}

TEST(Audit, AuditIsDeterministic) {
  const Graph g = oracle::random_graph(90, 0.5, 9);
  AuditParams ap;
  ap.seed = 77;
  const auto a = richness_audit(g, ap), b = richness_audit(g, ap);
  EXPECT_EQ(a.status, b.status);
  EXPECT_EQ(a.budget_used, b.budget_used);
}

TEST(Audit, HeuristicAgreesWithExhaustiveAtSmallN) {
  std::size_t rich = 0, witnessed = 0;
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const std::size_t n = 8 + seed % 5;
    const Graph g = oracle::random_graph(n, 0.5, 400 + seed);
    const double delta = seed % 2 ? 0.8 : 0.5, eps = 0.2;
    AuditParams ap;
    ap.delta = delta;
    ap.epsilon = eps;
    ap.alpha = 1.0;
    ap.seed = seed;
    const auto exact = richness_exact(g, delta, eps);
    const auto heur = richness_audit(g, ap);
    if (!exact) {
      ++rich;
      // A witness found by the heuristic is a real violation, so none may exist.
      EXPECT_EQ(heur.status, RichnessStatus::no_witness_in_budget);
    } else {
      ++witnessed;
      EXPECT_EQ(exact->y, naive_violators(oracle::matrix(g), exact->w, eps));
    }
  }
  EXPECT_GT(rich, 0u);
  EXPECT_GT(witnessed, 0u);
  EXPECT_THROW(richness_exact(Graph(kExactRichnessCap + 1), 0.5, 0.2), CapacityError);
}

TEST(Audit, RichGraphsAreDiverseAtSmallN) {
  // Exhaustive check of rich => diverse with c = ε/2.
  std::size_t rich = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const std::size_t n = 10 + seed % 5;
    const Graph g = oracle::random_graph(n, 0.5, 1000 + seed);
    const double delta = 0.8, eps = 0.2;
    if (richness_exact(g, delta, eps)) continue;
    ++rich;
    const auto prof = diversity_profile(g, eps / 2);
    EXPECT_TRUE(is_diverse(prof, delta)) << "seed " << seed;
  }
  EXPECT_GT(rich, 0u);
}

TEST(Audit, ExtractPeelsPlantedBlock) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const std::size_t n = 200;
    const Graph g = planted_sparse_block(n, 30, 500 + seed);
    AuditParams ap;
    ap.seed = seed;
    const auto r = rich_extract(g, ap);
    ASSERT_FALSE(r.trace.empty());
    for (const auto& round : r.trace) {
      EXPECT_GE(static_cast<double>(round.output_size), ap.delta / 4 * static_cast<double>(round.input_size));
      EXPECT_LE(round.output_size, round.w_size);
      EXPECT_LE(round.s_size, round.y_size);
    }
    EXPECT_EQ(r.u.size(), r.trace.back().output_size);
    if (r.stop == ExtractStop::rich) {
      const auto sub = induced_subgraph(g, r.u);
      AuditParams again = ap;
      again.seed = derive_seed(ap.seed, "rich-extract", r.trace.size());
      EXPECT_EQ(richness_audit(sub.graph, again).status, RichnessStatus::no_witness_in_budget);
    }
  }
}

TEST(Audit, ExtractIsIdentityOnRichGraph) {
  const auto r = rich_extract(oracle::random_graph(128, 0.5, 3), AuditParams{});
  EXPECT_TRUE(r.trace.empty());
  EXPECT_EQ(r.u.size(), 128u);
  EXPECT_EQ(r.stop, ExtractStop::rich);
}

TEST(Audit, ParameterValidation) {
  AuditParams bad;
  bad.epsilon = 0.6;
  EXPECT_THROW(bad.validate(), ContractError);
  bad = {};
  bad.alpha = 0.1;
  EXPECT_THROW(bad.validate(), ContractError);
  EXPECT_THROW(rich_extract(Graph(10), AuditParams{}), ContractError);
}
