#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spectra/audit.hpp"
#include "spectra/graph.hpp"

namespace spectra {

// Greedy Turán independent set: repeatedly take a vertex of minimum current
// degree (lowest index on ties) and delete its closed neighbourhood. Returns
// the chosen indices in increasing order.
std::vector<std::size_t> turan_independent_set(const std::vector<std::vector<std::size_t>>& adjacency);

struct ConstructionParams {
  double C = 0;  // Ramsey constant, recorded; checked when n ≤ 64
  double epsilon = 0.1;
  double delta = 0.25;
  double c = 0;                // density constant; 0 = e(G)/(density_factor·n²)
  double density_factor = 800;  // e(G) ≥ density_factor·c·n²
  std::size_t bucket_width = 0;  // 0 = ⌈√n⌉
  double theta_compl = -1;       // fraction of n; < 0 = ε/2
  double theta_conflict = -1;    // fraction of n; < 0 = ε²/4
  double star_floor = 0.5;       // × n^{3/4}
  double matching_floor = 0.5;   // × n^{3/4}
  std::size_t pair_enum_cap = 3000;
  double a_cap = 16;  // keep at most ⌈a_cap·√n⌉ units of A; 0 = no cap
  double kappa1 = 0.01;   // |e(U0) − 4m| ≤ κ1·n^{3/2}
  double kappa2 = 0.5;    // |d_{U0}(x) − p·d''| ≤ κ2·√n
  double kappa3 = 0.004;  // |N_{U0}(x) △ N_{U0}(y)| ≥ κ3·n
  double kappa4 = 700;    // equal-degree pairs ≤ κ4·√n
  double kappa5 = 0.02;   // d ≥ κ5·n, diagnostic only
  std::size_t retry_max = 10;
  bool rich_extract = true;
  std::size_t audit_budget = 200;
  std::size_t audit_rounds = 8;
  std::size_t workers = 1;
  std::uint64_t seed = 0;

  void validate() const;
};

// Constants after resolving the automatic defaults against a graph.
struct ResolvedConstruction {
  std::size_t n = 0;
  double c = 0;
  std::size_t bucket_width = 0;
  double theta_compl = 0;
  double theta_conflict = 0;
  double star_floor = 0;      // absolute
  double matching_floor = 0;  // absolute
  std::size_t a_cap = 0;      // absolute, 0 = none
  std::int64_t m_min = 0;     // ⌈c·n²⌉
  std::int64_t m_max = 0;     // ⌊2c·n²⌋
};
ResolvedConstruction resolve(const ConstructionParams& params, const Graph& g);

struct PigeonholeResult {
  std::int64_t d_prime = 0;
  std::int64_t window_lo = 0;  // bucket covers sums in [lo, lo + width)
  std::vector<Edge> h;         // pairs u < v
  bool sampled = false;
};
PigeonholeResult pigeonhole_pairs(const Graph& g, std::size_t bucket_width,
                                  std::size_t pair_enum_cap = 3000, std::uint64_t seed = 0);

std::vector<Edge> filter_close_complements(const Graph& g, const std::vector<Edge>& h, double theta_compl);

enum class ConstructionMode { star, matching };
std::string_view mode_name(ConstructionMode m);

struct Dichotomy {
  ConstructionMode mode = ConstructionMode::star;
  Vertex anchor = Unit::kNone;  // star centre
  std::vector<Unit> l;
  std::int64_t d_doubleprime = 0;
};
// Floors are absolute counts. Throws PipelineFailure("star_or_matching").
Dichotomy star_or_matching(const Graph& g, const std::vector<Edge>& h, const std::vector<Edge>& h_filtered,
                           std::int64_t d_prime, double star_floor, double matching_floor);

struct IndependentUnits {
  std::vector<Unit> a;
  std::size_t conflict_edges = 0;  // e(F)
};
IndependentUnits independent_units(const Graph& g, const std::vector<Unit>& l, double theta_conflict);

struct EventRecord {
  std::array<bool, 5> pass{};
  std::int64_t e_u0 = 0;
  std::size_t q_size = 0;
  std::size_t r_size = 0;
  std::size_t min_symdiff = 0;
  std::size_t equal_degree_pairs = 0;
  bool all() const { return pass[0] && pass[1] && pass[2] && pass[3] && pass[4]; }
};

struct U0Sample {
  VertexSet u0;
  std::vector<std::size_t> q;  // indices into A
  std::vector<std::size_t> r;
  std::vector<EventRecord> attempts;  // attempts[accepted] is the passing one
  std::size_t accepted = 0;
};
// Resamples with derived seeds until all five events hold. Throws
// PipelineFailure("sample_U0") carrying the per-event failure histogram.
U0Sample sample_U0(const Graph& g, const std::vector<Unit>& a, std::int64_t m, double p, std::int64_t d_doubleprime,
                   const ConstructionParams& params);
// One attempt's events for a fixed U0.
EventRecord evaluate_events(const Graph& g, const std::vector<Unit>& a, const VertexSet& u0, std::int64_t m,
                            double p, std::int64_t d_doubleprime, const ConstructionParams& params,
                            std::vector<std::size_t>* q = nullptr, std::vector<std::size_t>* r = nullptr);

struct STX {
  std::vector<Unit> s;  // ascending d_{U0}
  std::vector<Unit> t;  // descending d_{U0}
  std::vector<Unit> x;
  std::size_t b_size = 0;
};
// `units` is R∩Q in unit order. Throws PipelineFailure("select_STX").
STX select_STX(const Graph& g, const VertexSet& u0, const std::vector<Unit>& units);

struct ConstructionResult {
  ConstructionMode mode = ConstructionMode::star;
  Vertex anchor = Unit::kNone;
  VertexSet working;  // vertex set after the richness pre-pass
  VertexSet u0;
  std::vector<Unit> a;
  std::vector<Unit> s, t, x;
  std::size_t b_size = 0;
  std::int64_t m = 0;
  double c = 0;
  double p = 0;
  double d = 0;
  std::int64_t d_prime = 0;
  std::int64_t d_doubleprime = 0;
  std::int64_t gap = 0;  // min_T d_{U0} − max_S d_{U0}
  std::size_t h_size = 0;
  std::size_t h_filtered_size = 0;
  std::size_t l_size = 0;
  std::size_t conflict_edges = 0;
  bool d_linear = false;  // d ≥ κ5·n
  std::optional<bool> c_ramsey;
  std::vector<ExtractRound> extract_trace;
  std::vector<EventRecord> attempts;
  std::size_t accepted_attempt = 0;
  ResolvedConstruction resolved;
  ConstructionParams params;
};

// Full pipeline. Precondition violations throw ContractError; stage
// failures throw PipelineFailure labelled with the stage.
ConstructionResult construct(const Graph& g, std::int64_t m, const ConstructionParams& params);

struct ConstructionCheck {
  bool disjoint = false;
  bool degree_window = false;
  bool gap = false;
  bool x_symdiff = false;
  bool mode_uniform = false;
  bool ok() const { return disjoint && degree_window && gap && x_symdiff && mode_uniform; }
};
// Re-derives the four output properties from G and the result's sets using
// only graph primitives.
ConstructionCheck verify_construction(const Graph& g, const ConstructionResult& r);

}  // namespace spectra
