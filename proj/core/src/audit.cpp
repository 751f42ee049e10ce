#include "spectra/audit.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <sstream>

#include "spectra/errors.hpp"
#include "spectra/random.hpp"

namespace spectra {

void AuditParams::validate() const {
  if (!(epsilon > 0 && epsilon < 0.5)) throw ContractError("audit: need 0 < epsilon < 1/2");
  if (!(delta > 0 && delta <= 0.5)) throw ContractError("audit: need 0 < delta <= 1/2");
  if (!(alpha >= 2 * delta)) throw ContractError("audit: need alpha >= 2*delta");
  if (sample_budget < 1) throw ContractError("audit: sample_budget must be >= 1");
}

DensityCheck density_bounds_check(const Graph& g, double epsilon) {
  const auto n = static_cast<double>(g.order());
  if (g.order() < 2) throw ContractError("density check needs n >= 2");
  DensityCheck out;
  out.density = static_cast<double>(g.edge_count()) / (n * (n - 1) / 2);
  out.within_bounds = epsilon <= out.density && out.density <= 1 - epsilon;
  return out;
}

std::vector<std::size_t> diversity_profile(const Graph& g, double c_div) {
  if (!(c_div > 0 && c_div < 1)) throw ContractError("diversity: c_div must lie in (0,1)");
  const std::size_t n = g.order();
  const double limit = c_div * static_cast<double>(n);
  std::vector<std::size_t> cnt(n, 0);
  for (Vertex x = 0; x < n; ++x)
    for (Vertex y = x + 1; y < n; ++y)
      if (static_cast<double>(popcount_xor(g.row(x), g.row(y))) < limit) {
        ++cnt[x];
        ++cnt[y];
      }
  return cnt;
}

bool is_diverse(const std::vector<std::size_t>& profile, double delta) {
  const double cap = std::pow(static_cast<double>(profile.size()), delta);
  for (auto c : profile)
    if (static_cast<double>(c) > cap) return false;
  return true;
}

std::optional<PairDiversityWitness> pair_diversity_witness(const Graph& g, double c_div, double delta,
                                                           double alpha) {
  if (!(alpha >= 2 * delta)) throw ContractError("pair diversity: need alpha >= 2*delta");
  const std::size_t n = g.order();
  const auto all = VertexSet::full(n);
  const double nd = static_cast<double>(n);
  const auto need = static_cast<std::size_t>(std::ceil(std::pow(nd, delta)));
  for (Vertex x1 = 0; x1 < n; ++x1)
    for (Vertex x2 = x1 + 1; x2 < n; ++x2) {
      if (static_cast<double>(symdiff_size(g, Unit::single(x1), Unit::single(x2), all, true)) < alpha * nd)
        continue;
      const Unit x = Unit::pair(x1, x2);
      PairDiversityWitness wit{x, {}};
      VertexSet used(n);
      used.insert(x1);
      used.insert(x2);
      for (Vertex y1 = 0; y1 < n && wit.family.size() < need; ++y1) {
        if (used.contains(y1)) continue;
        for (Vertex y2 = y1 + 1; y2 < n; ++y2) {
          if (used.contains(y2)) continue;
          const Unit y = Unit::pair(y1, y2);
          if (static_cast<double>(symdiff_size(g, x, y, all)) < c_div * nd) {
            wit.family.push_back(y);
            used.insert(y1);
            used.insert(y2);
            break;
          }
        }
      }
      if (wit.family.size() >= need) return wit;
    }
  return std::nullopt;
}

std::size_t close_complement_pair_count(const Graph& g, double threshold_fraction) {
  if (!(threshold_fraction > 0 && threshold_fraction < 1))
    throw ContractError("close complement count: threshold must lie in (0,1)");
  const std::size_t n = g.order();
  const auto all = VertexSet::full(n);
  const double limit = threshold_fraction * static_cast<double>(n);
  std::size_t count = 0;
  for (Vertex a = 0; a < n; ++a)
    for (Vertex b = a + 1; b < n; ++b)
      if (static_cast<double>(symdiff_size(g, Unit::single(a), Unit::single(b), all, true)) < limit) ++count;
  return count;
}

// ---- richness ------------------------------------------------------------

VertexSet richness_violators(const Graph& g, const VertexSet& w, double epsilon) {
  const std::size_t n = g.order();
  const auto ws = static_cast<double>(w.size());
  VertexSet y(n);
  for (Vertex v = 0; v < n; ++v) {
    const auto in = popcount_and(g.row(v), w.words());
    const auto out = w.size() - in - (w.contains(v) ? 1 : 0);
    if (static_cast<double>(in) < epsilon * ws || static_cast<double>(out) < epsilon * ws) y.insert(v);
  }
  return y;
}

namespace {

std::size_t min_w_size(std::size_t n, double delta) {
  return static_cast<std::size_t>(std::ceil(delta * static_cast<double>(n) - 1e-9));
}

double min_y_size(std::size_t n, double delta) { return std::pow(static_cast<double>(n), delta); }

VertexSet random_subset(std::size_t n, std::size_t k, Rng& rng) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  for (std::size_t i = 0; i < k; ++i) {
    const auto j = static_cast<std::size_t>(rng.uniform_int(static_cast<std::int64_t>(i), static_cast<std::int64_t>(n - 1)));
    std::swap(perm[i], perm[j]);
  }
  VertexSet s(n);
  for (std::size_t i = 0; i < k; ++i) s.insert(perm[i]);
  return s;
}

}  // namespace

RichnessVerdict richness_audit(const Graph& g, const AuditParams& params) {
  if (params.sample_budget < 1) throw ContractError("audit: sample_budget must be >= 1");
  const std::size_t n = g.order();
  const std::size_t wmin = std::max<std::size_t>(1, min_w_size(n, params.delta));
  const double ymin = min_y_size(n, params.delta);
  RichnessVerdict verdict;

  auto try_candidate = [&](const VertexSet& w, const char* source) -> bool {
    if (verdict.budget_used >= params.sample_budget) return true;
    if (w.size() < wmin) return false;
    ++verdict.budget_used;
    VertexSet y = richness_violators(g, w, params.epsilon);
    if (static_cast<double>(y.size()) >= ymin) {
      verdict.status = RichnessStatus::witness_found;
      verdict.witness = RichnessWitness{w, std::move(y), source};
      return true;
    }
    return false;
  };

  // (a) neighbourhoods and complement neighbourhoods
  for (Vertex v = 0; v < n; ++v) {
    VertexSet nb = g.neighbourhood(v);
    if (try_candidate(nb, "neighbourhood")) return verdict;
    VertexSet co = nb.complement();
    co.erase(v);
    if (try_candidate(co, "complement-neighbourhood")) return verdict;
  }

  const std::size_t sizes[] = {wmin, std::min(n, min_w_size(n, 2 * params.delta)), std::max<std::size_t>(1, n / 2)};

  // (b) degree-sorted prefixes, ascending then descending
  std::vector<Vertex> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Vertex a, Vertex b) { return g.degree(a) < g.degree(b); });
  for (int dir = 0; dir < 2; ++dir) {
    for (auto k : sizes) {
      VertexSet w(n);
      for (std::size_t i = 0; i < k && i < n; ++i) w.insert(dir == 0 ? order[i] : order[n - 1 - i]);
      if (try_candidate(w, dir == 0 ? "low-degree-prefix" : "high-degree-prefix")) return verdict;
    }
  }

  // (c) random subsets until the budget is spent
  Rng rng(derive_seed(params.seed, "richness-audit"));
  for (std::size_t i = 0; verdict.budget_used < params.sample_budget; ++i) {
    const auto k = std::min(n, sizes[i % 3]);
    if (k < wmin) break;
    if (try_candidate(random_subset(n, k, rng), "random")) return verdict;
  }
  return verdict;
}

std::optional<RichnessWitness> richness_exact(const Graph& g, double delta, double epsilon) {
  const std::size_t n = g.order();
  if (n > kExactRichnessCap)
    throw CapacityError("exact richness capped at n=" + std::to_string(kExactRichnessCap));
  const std::size_t wmin = std::max<std::size_t>(1, min_w_size(n, delta));
  const double ymin = min_y_size(n, delta);
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
    if (static_cast<std::size_t>(std::popcount(mask)) < wmin) continue;
    VertexSet w(n);
    for (Vertex v = 0; v < n; ++v)
      if ((mask >> v) & 1U) w.insert(v);
    VertexSet y = richness_violators(g, w, epsilon);
    if (static_cast<double>(y.size()) >= ymin) return RichnessWitness{w, std::move(y), "exhaustive"};
  }
  return std::nullopt;
}

// ---- extraction ----------------------------------------------------------

namespace {

std::string trace_json(const std::vector<ExtractRound>& trace) {
  std::ostringstream os;
  os << "{\"trace\":[";
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const auto& r = trace[i];
    os << (i ? "," : "") << "{\"input\":" << r.input_size << ",\"w\":" << r.w_size << ",\"y\":" << r.y_size
       << ",\"s\":" << r.s_size << ",\"dense\":" << (r.dense_side ? "true" : "false") << ",\"output\":" << r.output_size
       << "}";
  }
  os << "]}";
  return os.str();
}

}  // namespace

ExtractResult rich_extract(const Graph& g, const AuditParams& params) {
  params.validate();
  const std::size_t n = g.order();
  if (params.delta * static_cast<double>(n) < 4) throw ContractError("rich_extract needs delta*n >= 4");

  ExtractResult result;
  result.u = VertexSet::full(n);
  for (std::size_t round = 0; round < params.k_rounds; ++round) {
    const auto sub = induced_subgraph(g, result.u);
    const std::size_t m = sub.graph.order();
    AuditParams ap = params;
    ap.seed = derive_seed(params.seed, "rich-extract", round);
    const auto verdict = richness_audit(sub.graph, ap);
    if (verdict.status == RichnessStatus::no_witness_in_budget) {
      result.stop = ExtractStop::rich;
      return result;
    }
    const auto& wit = *verdict.witness;
    const double ws = static_cast<double>(wit.w.size());

    std::vector<Vertex> sparse, dense;
    wit.y.for_each([&](Vertex v) {
      const auto in = popcount_and(sub.graph.row(v), wit.w.words());
      if (static_cast<double>(in) < params.epsilon * ws)
        sparse.push_back(v);
      else
        dense.push_back(v);
    });
    const auto ycap = static_cast<std::size_t>(std::ceil(std::pow(static_cast<double>(m), params.delta)));
    const std::size_t half = std::max<std::size_t>(1, (std::min(ycap, wit.y.size()) + 1) / 2);
    const bool use_dense = sparse.size() < half;
    const auto& side = use_dense ? dense : sparse;

    VertexSet s(m);
    for (std::size_t i = 0; i < half && i < side.size(); ++i) s.insert(side[i]);
    const VertexSet rest = wit.w - s;
    const auto ss = static_cast<double>(s.size());
    VertexSet kept(m);
    rest.for_each([&](Vertex v) {
      const double d = static_cast<double>(popcount_and(sub.graph.row(v), s.words())) / ss;
      if (use_dense ? d >= 1 - 4 * params.epsilon : d <= 4 * params.epsilon) kept.insert(v);
    });

    ExtractRound r;
    r.input_size = m;
    r.w_size = wit.w.size();
    r.y_size = wit.y.size();
    r.s_size = s.size();
    r.dense_side = use_dense;
    r.output_size = kept.size();
    r.source = wit.source;
    result.trace.push_back(r);

    if (static_cast<double>(kept.size()) < params.delta / 4 * static_cast<double>(m))
      throw PipelineFailure("rich_extract",
                            "round " + std::to_string(round) + " kept " + std::to_string(kept.size()) + " of " +
                                std::to_string(m) + " vertices",
                            trace_json(result.trace));

    VertexSet next(n);
    kept.for_each([&](Vertex v) { next.insert(sub.original[v]); });
    result.u = std::move(next);
  }
  result.stop = ExtractStop::rounds_exhausted;
  return result;
}

}  // namespace spectra
