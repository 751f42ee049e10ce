#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spectra/graph.hpp"

namespace spectra {

struct AuditParams {
  double epsilon = 0.1;  // intersection fraction ε
  double delta = 0.25;   // size exponent δ
  double c_div = 0.05;   // diversity threshold, as a fraction of n
  double alpha = 0.5;    // pair-diversity constant, α ≥ 2δ
  std::size_t sample_budget = 200;
  std::size_t k_rounds = 8;
  std::uint64_t seed = 0;

  // 0 < ε < 1/2, 0 < δ ≤ 1/2, α ≥ 2δ, budget ≥ 1.
  void validate() const;
};

struct DensityCheck {
  double density = 0;
  bool within_bounds = false;
};
DensityCheck density_bounds_check(const Graph& g, double epsilon);

// cnt[x] = #{y ≠ x : |N(x) △ N(y)| < c_div·n}.
std::vector<std::size_t> diversity_profile(const Graph& g, double c_div);
bool is_diverse(const std::vector<std::size_t>& profile, double delta);

struct PairDiversityWitness {
  Unit x;
  std::vector<Unit> family;  // pairwise disjoint, disjoint from x
};

// A pair x with |N(x1) △ N̄(x2)| ≥ αn and at least n^δ disjoint pairs y with
// |N(x) △ N(y)| < c_div·n, or nothing.
std::optional<PairDiversityWitness> pair_diversity_witness(const Graph& g, double c_div, double delta, double alpha);

// #{ {x1,x2} : |N(x1) △ N̄(x2)| < threshold_fraction·n }.
std::size_t close_complement_pair_count(const Graph& g, double threshold_fraction);

enum class RichnessStatus { witness_found, no_witness_in_budget };

struct RichnessWitness {
  VertexSet w;
  VertexSet y;
  std::string source;  // which candidate family produced W
};

struct RichnessVerdict {
  RichnessStatus status = RichnessStatus::no_witness_in_budget;
  std::optional<RichnessWitness> witness;
  std::size_t budget_used = 0;
};

// Vertices v with |N(v)∩W| < ε|W| or |N̄(v)∩W| < ε|W|.
VertexSet richness_violators(const Graph& g, const VertexSet& w, double epsilon);

// Budgeted search over candidate sets W in a fixed order: vertex
// neighbourhoods and complement neighbourhoods, degree-sorted prefixes, then
// seeded random subsets. Reports the first (W, Y) with |W| ≥ δn, |Y| ≥ n^δ.
RichnessVerdict richness_audit(const Graph& g, const AuditParams& params);

inline constexpr std::size_t kExactRichnessCap = 14;
// Exhaustive over every W with |W| ≥ δn. Decides richness exactly.
std::optional<RichnessWitness> richness_exact(const Graph& g, double delta, double epsilon);

struct ExtractRound {
  std::size_t input_size = 0;  // |U_{i-1}|
  std::size_t w_size = 0;
  std::size_t y_size = 0;
  std::size_t s_size = 0;
  bool dense_side = false;
  std::size_t output_size = 0;  // |U_i|
  std::string source;
};

enum class ExtractStop { rich, rounds_exhausted };

struct ExtractResult {
  VertexSet u;  // in the input graph's labelling
  std::vector<ExtractRound> trace;
  ExtractStop stop = ExtractStop::rich;
};

// Iteratively peels violating sets: while the audit finds a witness (W,Y) in
// G[U], pick S ⊆ Y on one side, set U' = W∖S and keep the vertices of U'
// whose density to S stays on that side (≤ 4ε, or ≥ 1−4ε). Throws
// PipelineFailure("rich_extract") if a round keeps fewer than (δ/4)|U|.
ExtractResult rich_extract(const Graph& g, const AuditParams& params);

}  // namespace spectra
