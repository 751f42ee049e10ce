#include <gtest/gtest.h>

#include "oracles.hpp"
#include "spectra/errors.hpp"
#include "spectra/spectrum.hpp"

using namespace spectra;

namespace {

std::vector<std::int64_t> as_vector(const std::set<std::int64_t>& s) { return {s.begin(), s.end()}; }

}  // namespace

TEST(Phi, MatchesIndependentRecount) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const std::size_t n = 1 + seed % 12;
    const Graph g = oracle::random_graph(n, 0.15 + 0.012 * static_cast<double>(seed), 500 + seed);
    const auto expect = as_vector(oracle::phi(oracle::matrix(g)));
    EXPECT_EQ(phi_exact(g).sizes, expect) << "seed " << seed;
    EXPECT_EQ(phi_naive(g).sizes, expect) << "seed " << seed;
  }
}

TEST(Phi, GrayWalkVisitsEverySubsetOnce) {
  for (std::size_t n : {1u, 5u, 13u}) {
    const auto run = phi_enumerate(oracle::random_graph(n, 0.5, n));
    EXPECT_EQ(run.subsets_visited, std::uint64_t{1} << n);
  }
}

TEST(Phi, ExtremesAreZeroAndEdgeCount) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Graph g = oracle::random_graph(14, 0.5, seed);
    const auto s = phi_exact(g);
    EXPECT_EQ(s.sizes.front(), 0);
    EXPECT_EQ(s.sizes.back(), g.edge_count());
    EXPECT_TRUE(std::is_sorted(s.sizes.begin(), s.sizes.end()));
    EXPECT_TRUE(std::adjacent_find(s.sizes.begin(), s.sizes.end()) == s.sizes.end());
  }
}

TEST(Phi, PartitionedRunEqualsSerial) {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const Graph g = oracle::random_graph(16, 0.4, 900 + seed);
    const auto serial = phi_exact(g);
    for (std::size_t workers : {2u, 3u, 8u})
      for (std::size_t bits : {0u, 1u, 4u}) {
        EnumerationOptions opts;
        opts.workers = workers;
        opts.prefix_bits = bits;
        EXPECT_EQ(phi_exact(g, opts), serial);
        EXPECT_EQ(psi_exact(g, opts), psi_exact(g));
      }
  }
}

TEST(Phi, CompleteAndEmptyClosedForms) {
  for (std::size_t n = 1; n <= 16; ++n) {
    std::vector<std::int64_t> expect;
    for (std::size_t k = 0; k <= n; ++k) expect.push_back(static_cast<std::int64_t>(k * (k - 1) / 2));
    expect.erase(std::unique(expect.begin(), expect.end()), expect.end());
    EXPECT_EQ(phi_exact(generate({Model::complete, n, 0}, 0)).sizes, expect);
    EXPECT_EQ(phi_exact(Graph(n)).sizes, std::vector<std::int64_t>{0});
  }
}

TEST(Phi, WindowExamples) {
  const Graph k4 = generate({Model::complete, 4, 0}, 0);
  EXPECT_EQ(phi_window(k4, 1, 3).sizes, (std::vector<std::int64_t>{1, 3}));
  EXPECT_EQ(phi_window(oracle::random_graph(10, 0.5, 1), 0, 0).sizes, std::vector<std::int64_t>{0});
  const Graph c5 = generate({Model::paley, 5, 0}, 0);
  EXPECT_EQ(phi_window(c5, 2, 5).sizes, (std::vector<std::int64_t>{2, 3, 5}));
  EXPECT_THROW(phi_window(c5, 3, 2), ContractError);
}

TEST(Phi, CapacityErrors) {
  EXPECT_THROW(phi_exact(Graph(31)), CapacityError);
  EnumerationOptions small;
  small.max_n = 10;
  EXPECT_THROW(phi_exact(Graph(11), small), CapacityError);
  EXPECT_THROW(phi_naive(Graph(21)), CapacityError);
}

TEST(Psi, MatchesOracleAndComplementInvariance) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const std::size_t n = 2 + seed % 11;
    const Graph g = oracle::random_graph(n, 0.5, 700 + seed);
    const auto expect = oracle::psi(oracle::matrix(g));
    const auto got = psi_exact(g);
    EXPECT_EQ(got.pairs, std::vector(expect.begin(), expect.end()));
    EXPECT_EQ(got.count(), psi_exact(complement(g)).count());
  }
}

TEST(Spectrum, ContainsAndWindow) {
  const SizeSpectrum s{5, {0, 1, 3, 6}};
  EXPECT_TRUE(s.contains(3));
  EXPECT_FALSE(s.contains(2));
  EXPECT_EQ(s.window(1, 5).sizes, (std::vector<std::int64_t>{1, 3}));
}
