#include "spectra/construct.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "spectra/errors.hpp"
#include "spectra/parallel.hpp"
#include "spectra/random.hpp"

namespace spectra {

std::vector<std::size_t> turan_independent_set(const std::vector<std::vector<std::size_t>>& adjacency) {
  const std::size_t n = adjacency.size();
  std::vector<std::size_t> degree(n);
  std::vector<char> alive(n, 1);
  for (std::size_t v = 0; v < n; ++v) degree[v] = adjacency[v].size();
  std::vector<std::size_t> chosen;
  std::size_t remaining = n;
  auto remove = [&](std::size_t v) {
    alive[v] = 0;
    --remaining;
    for (auto w : adjacency[v])
      if (alive[w]) --degree[w];
  };
  while (remaining > 0) {
    std::size_t best = n;
    for (std::size_t v = 0; v < n; ++v)
      if (alive[v] && (best == n || degree[v] < degree[best])) best = v;
    chosen.push_back(best);
    remove(best);
    for (auto w : adjacency[best])
      if (alive[w]) remove(w);
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

void ConstructionParams::validate() const {
  if (!(c >= 0)) throw ContractError("construct: c must be positive (or 0 for automatic)");
  if (!(density_factor > 0)) throw ContractError("construct: density_factor must be positive");
  if (!(epsilon > 0 && epsilon < 0.5)) throw ContractError("construct: need 0 < epsilon < 1/2");
  if (!(delta > 0 && delta <= 0.5)) throw ContractError("construct: need 0 < delta <= 1/2");
  if (retry_max < 1) throw ContractError("construct: retry_max must be >= 1");
  if (!(kappa1 > 0 && kappa2 > 0 && kappa4 > 0))
    throw ContractError("construct: kappa1, kappa2, kappa4 must be positive");
  if (!(kappa3 >= 0 && kappa5 >= 0)) throw ContractError("construct: kappa3, kappa5 must be non-negative");
  if (!(a_cap >= 0)) throw ContractError("construct: a_cap must be >= 0");
  if (!(star_floor >= 0 && matching_floor >= 0)) throw ContractError("construct: floors must be >= 0");
}

ResolvedConstruction resolve(const ConstructionParams& params, const Graph& g) {
  ResolvedConstruction r;
  r.n = g.order();
  const auto n = static_cast<double>(r.n);
  const double root = std::sqrt(n);
  r.c = params.c > 0 ? params.c : static_cast<double>(g.edge_count()) / (params.density_factor * n * n);
  r.bucket_width =
      params.bucket_width > 0 ? params.bucket_width : static_cast<std::size_t>(std::max(1.0, std::ceil(root)));
  r.theta_compl = params.theta_compl >= 0 ? params.theta_compl : params.epsilon / 2;
  r.theta_conflict = params.theta_conflict >= 0 ? params.theta_conflict : params.epsilon * params.epsilon / 4;
  r.star_floor = params.star_floor * std::pow(n, 0.75);
  r.matching_floor = params.matching_floor * std::pow(n, 0.75);
  r.a_cap = params.a_cap > 0 ? static_cast<std::size_t>(std::ceil(params.a_cap * root)) : 0;
  r.m_min = static_cast<std::int64_t>(std::ceil(r.c * n * n - 1e-9));
  r.m_max = static_cast<std::int64_t>(std::floor(2 * r.c * n * n + 1e-9));
  return r;
}

PigeonholeResult pigeonhole_pairs(const Graph& g, std::size_t bucket_width, std::size_t pair_enum_cap,
                                  std::uint64_t seed) {
  const std::size_t n = g.order();
  if (n < 4) throw ContractError("pigeonhole needs n >= 4");
  if (bucket_width < 1) throw ContractError("bucket_width must be >= 1");

  std::vector<Edge> pool;
  PigeonholeResult out;
  if (n > pair_enum_cap) {
    out.sampled = true;
    const auto draws = static_cast<std::size_t>(std::ceil(10 * std::pow(static_cast<double>(n), 1.5)));
    Rng rng(derive_seed(seed, "pigeonhole"));
    pool.reserve(draws);
    const auto hi = static_cast<std::int64_t>(n - 1);
    for (std::size_t i = 0; i < draws; ++i) {
      auto u = static_cast<Vertex>(rng.uniform_int(0, hi));
      auto v = static_cast<Vertex>(rng.uniform_int(0, hi));
      if (u == v) continue;
      pool.emplace_back(std::min(u, v), std::max(u, v));
    }
    std::sort(pool.begin(), pool.end());
    pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
  }
  auto sum_of = [&](Vertex u, Vertex v) { return static_cast<std::int64_t>(g.degree(u) + g.degree(v)); };

  std::vector<std::size_t> hist(2 * n, 0);
  if (out.sampled) {
    for (auto [u, v] : pool) ++hist[static_cast<std::size_t>(sum_of(u, v))];
  } else {
    for (Vertex u = 0; u < n; ++u)
      for (Vertex v = u + 1; v < n; ++v) ++hist[static_cast<std::size_t>(sum_of(u, v))];
  }

  const auto width = static_cast<std::int64_t>(bucket_width);
  const auto top = static_cast<std::int64_t>(hist.size());
  std::int64_t best_lo = 0;
  std::size_t best = 0;
  std::size_t running = 0;
  // window [lo, lo + width), lo may start below 0 so the first sums are covered
  for (std::int64_t lo = 1 - width; lo < top; ++lo) {
    const std::int64_t add = lo + width - 1;
    if (add >= 0 && add < top) running += hist[static_cast<std::size_t>(add)];
    if (lo - 1 >= 0) running -= hist[static_cast<std::size_t>(lo - 1)];
    if (running > best) {
      best = running;
      best_lo = lo;
    }
  }
  best_lo = std::max<std::int64_t>(best_lo, 0);
  out.window_lo = best_lo;
  auto in_window = [&](Vertex u, Vertex v) {
    const auto s = sum_of(u, v);
    return s >= best_lo && s < best_lo + width;
  };
  if (out.sampled) {
    for (auto e : pool)
      if (in_window(e.first, e.second)) out.h.push_back(e);
  } else {
    for (Vertex u = 0; u < n; ++u)
      for (Vertex v = u + 1; v < n; ++v)
        if (in_window(u, v)) out.h.emplace_back(u, v);
  }
  std::vector<std::int64_t> sums;
  sums.reserve(out.h.size());
  for (auto [u, v] : out.h) sums.push_back(sum_of(u, v));
  std::sort(sums.begin(), sums.end());
  out.d_prime = sums.empty() ? 0 : sums[(sums.size() - 1) / 2];
  return out;
}

std::vector<Edge> filter_close_complements(const Graph& g, const std::vector<Edge>& h, double theta_compl) {
  const auto all = VertexSet::full(g.order());
  const double limit = theta_compl * static_cast<double>(g.order());
  std::vector<Edge> out;
  out.reserve(h.size());
  for (auto [u, v] : h)
    if (static_cast<double>(symdiff_size(g, Unit::single(u), Unit::single(v), all, true)) >= limit)
      out.emplace_back(u, v);
  return out;
}

std::string_view mode_name(ConstructionMode m) { return m == ConstructionMode::star ? "star" : "matching"; }

Dichotomy star_or_matching(const Graph& g, const std::vector<Edge>& h, const std::vector<Edge>& h_filtered,
                           std::int64_t d_prime, double star_floor, double matching_floor) {
  if (h_filtered.empty()) throw PipelineFailure("star_or_matching", "filtered pair graph is empty");
  const std::size_t n = g.order();
  std::vector<std::size_t> deg(n, 0);
  for (auto [u, v] : h_filtered) {
    ++deg[u];
    ++deg[v];
  }
  const auto v = static_cast<Vertex>(std::max_element(deg.begin(), deg.end()) - deg.begin());
  Dichotomy out;
  if (static_cast<double>(deg[v]) >= star_floor) {
    out.mode = ConstructionMode::star;
    out.anchor = v;
    for (auto [a, b] : h) {
      if (a == v) out.l.push_back(Unit::single(b));
      if (b == v) out.l.push_back(Unit::single(a));
    }
    std::sort(out.l.begin(), out.l.end());
    out.d_doubleprime = d_prime - static_cast<std::int64_t>(g.degree(v));
    return out;
  }
  std::vector<char> used(n, 0);
  for (auto [a, b] : h_filtered)
    if (!used[a] && !used[b]) {
      used[a] = used[b] = 1;
      out.l.push_back(Unit::pair(a, b));
    }
  if (static_cast<double>(out.l.size()) < matching_floor)
    throw PipelineFailure("star_or_matching", "max H'-degree " + std::to_string(deg[v]) + " and matching size " +
                                                  std::to_string(out.l.size()) + " are both below their floors");
  out.mode = ConstructionMode::matching;
  out.d_doubleprime = d_prime;
  return out;
}

IndependentUnits independent_units(const Graph& g, const std::vector<Unit>& l, double theta_conflict) {
  if (l.empty()) throw ContractError("independent_units: L is empty");
  const auto all = VertexSet::full(g.order());
  const double limit = theta_conflict * static_cast<double>(g.order());
  std::vector<std::vector<std::size_t>> adj(l.size());
  IndependentUnits out;
  for (std::size_t i = 0; i < l.size(); ++i)
    for (std::size_t j = i + 1; j < l.size(); ++j)
      if (static_cast<double>(symdiff_size(g, l[i], l[j], all)) < limit) {
        adj[i].push_back(j);
        adj[j].push_back(i);
        ++out.conflict_edges;
      }
  for (auto i : turan_independent_set(adj)) out.a.push_back(l[i]);
  return out;
}

EventRecord evaluate_events(const Graph& g, const std::vector<Unit>& a, const VertexSet& u0, std::int64_t m,
                            double p, std::int64_t d_doubleprime, const ConstructionParams& params,
                            std::vector<std::size_t>* q, std::vector<std::size_t>* r) {
  const auto n = static_cast<double>(g.order());
  const double root = std::sqrt(n);
  EventRecord ev;
  ev.e_u0 = count_edges(g, u0);
  ev.pass[0] = std::abs(static_cast<double>(ev.e_u0 - 4 * m)) <= params.kappa1 * n * root;

  std::vector<std::size_t> qi, ri;
  std::vector<std::int64_t> du(a.size());
  const double target = p * static_cast<double>(d_doubleprime);
  for (std::size_t i = 0; i < a.size(); ++i) {
    bool outside = true;
    a[i].for_each_vertex([&](Vertex v) { outside = outside && !u0.contains(v); });
    if (outside) qi.push_back(i);
    du[i] = static_cast<std::int64_t>(unit_degree(g, a[i], u0));
    if (std::abs(static_cast<double>(du[i]) - target) <= params.kappa2 * root) ri.push_back(i);
  }
  ev.q_size = qi.size();
  ev.r_size = ri.size();
  ev.pass[1] = 3 * qi.size() >= 2 * a.size();
  ev.pass[2] = 3 * ri.size() >= 2 * a.size();

  ev.min_symdiff = g.order();
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i + 1; j < a.size(); ++j)
      ev.min_symdiff = std::min(ev.min_symdiff, symdiff_size(g, a[i], a[j], u0));
  ev.pass[3] = static_cast<double>(ev.min_symdiff) >= params.kappa3 * n;

  auto sorted = du;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    ev.equal_degree_pairs += (j - i) * (j - i - 1) / 2;
    i = j;
  }
  ev.pass[4] = static_cast<double>(ev.equal_degree_pairs) <= params.kappa4 * root;
  if (q) *q = std::move(qi);
  if (r) *r = std::move(ri);
  return ev;
}

namespace {

VertexSet sample_subset(const VertexSet& from, double p, std::uint64_t seed) {
  Rng rng(seed);
  VertexSet out(from.universe());
  from.for_each([&](Vertex v) {
    if (rng.bernoulli(p)) out.insert(v);
  });
  return out;
}

}  // namespace

U0Sample sample_U0(const Graph& g, const std::vector<Unit>& a, std::int64_t m, double p, std::int64_t d_doubleprime,
                   const ConstructionParams& params) {
  if (a.empty()) throw ContractError("sample_U0: A is empty");
  if (!(p > 0 && p <= 1)) throw PipelineFailure("sample_U0", "sampling probability " + std::to_string(p) + " outside (0,1]");
  const auto all = VertexSet::full(g.order());
  const std::size_t workers = std::max<std::size_t>(1, params.workers);

  U0Sample out;
  std::array<std::size_t, 5> failures{};
  for (std::size_t base = 0; base < params.retry_max; base += workers) {
    const std::size_t batch = std::min(workers, params.retry_max - base);
    std::vector<EventRecord> recs(batch);
    parallel_for(batch, workers, [&](std::size_t j) {
      const auto u0 = sample_subset(all, p, derive_seed(params.seed, "U0", base + j));
      recs[j] = evaluate_events(g, a, u0, m, p, d_doubleprime, params);
    });
    for (std::size_t j = 0; j < batch; ++j) {
      out.attempts.push_back(recs[j]);
      if (recs[j].all()) {
        out.accepted = base + j;
        out.u0 = sample_subset(all, p, derive_seed(params.seed, "U0", out.accepted));
        evaluate_events(g, a, out.u0, m, p, d_doubleprime, params, &out.q, &out.r);
        return out;
      }
      for (std::size_t e = 0; e < 5; ++e)
        if (!recs[j].pass[e]) ++failures[e];
    }
  }
  std::ostringstream diag;
  diag << "{\"attempts\":" << params.retry_max << ",\"event_failures\":[";
  for (std::size_t e = 0; e < 5; ++e) diag << (e ? "," : "") << failures[e];
  diag << "]}";
  throw PipelineFailure("sample_U0", "no sample passed all five events in " + std::to_string(params.retry_max) +
                                         " attempts", diag.str());
}

STX select_STX(const Graph& g, const VertexSet& u0, const std::vector<Unit>& units) {
  if (units.size() < 6) throw PipelineFailure("select_STX", "|R∩Q| = " + std::to_string(units.size()) + " < 6");
  const std::size_t half = (units.size() + 1) / 2;
  STX out;
  std::vector<Unit> y(units.begin(), units.begin() + static_cast<std::ptrdiff_t>(half));
  out.x.assign(units.begin() + static_cast<std::ptrdiff_t>(half), units.end());

  std::vector<std::size_t> deg(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) deg[i] = unit_degree(g, y[i], u0);
  std::vector<std::vector<std::size_t>> adj(y.size());
  for (std::size_t i = 0; i < y.size(); ++i)
    for (std::size_t j = i + 1; j < y.size(); ++j)
      if (deg[i] == deg[j]) {
        adj[i].push_back(j);
        adj[j].push_back(i);
      }
  auto b = turan_independent_set(adj);
  out.b_size = b.size();
  if (b.size() < 3) throw PipelineFailure("select_STX", "|B| = " + std::to_string(b.size()) + " < 3");
  std::sort(b.begin(), b.end(), [&](std::size_t i, std::size_t j) { return deg[i] < deg[j]; });
  const std::size_t third = b.size() / 3;
  for (std::size_t i = 0; i < third; ++i) out.s.push_back(y[b[i]]);
  for (std::size_t i = 0; i < third; ++i) out.t.push_back(y[b[b.size() - 1 - i]]);
  return out;
}

namespace {

Unit map_unit(const Unit& x, const std::vector<Vertex>& orig) {
  if (!x.is_pair()) return Unit::single(orig[x.first]);
  return Unit::pair(orig[x.first], orig[x.second]);
}

std::vector<Unit> map_units(const std::vector<Unit>& xs, const std::vector<Vertex>& orig) {
  std::vector<Unit> out;
  out.reserve(xs.size());
  for (const auto& x : xs) out.push_back(map_unit(x, orig));
  return out;
}

}  // namespace

ConstructionResult construct(const Graph& g, std::int64_t m, const ConstructionParams& params) {
  params.validate();
  const std::size_t n = g.order();
  if (n < 4) throw ContractError("construct needs n >= 4");
  ConstructionResult res;
  res.params = params;
  res.resolved = resolve(params, g);
  const auto& rc = res.resolved;
  const auto nd = static_cast<double>(n);
  if (!(rc.c > 0)) throw ContractError("construct: density constant c is zero (graph has no edges)");
  if (params.density_factor * rc.c * nd * nd > static_cast<double>(g.edge_count()) * (1 + 1e-12))
    throw ContractError("construct: e(G) = " + std::to_string(g.edge_count()) + " is below " +
                        std::to_string(params.density_factor) + "·c·n²");
  if (m < rc.m_min || m > rc.m_max)
    throw ContractError("construct: m = " + std::to_string(m) + " outside [" + std::to_string(rc.m_min) + ", " +
                        std::to_string(rc.m_max) + "]");
  res.m = m;
  res.c = rc.c;
  if (params.C > 0 && n <= kDefaultHomogeneousCap) res.c_ramsey = is_c_ramsey(g, params.C);

  // Richness pre-pass; the rest of the pipeline runs on the extracted set.
  res.working = VertexSet::full(n);
  if (params.rich_extract) {
    AuditParams ap;
    ap.epsilon = params.epsilon;
    ap.delta = params.delta;
    ap.alpha = std::max(ap.alpha, 2 * params.delta);
    ap.sample_budget = params.audit_budget;
    ap.k_rounds = params.audit_rounds;
    ap.seed = derive_seed(params.seed, "construct-audit");
    auto ex = rich_extract(g, ap);
    res.extract_trace = ex.trace;
    if (ex.stop == ExtractStop::rounds_exhausted)
      throw PipelineFailure("rich_extract", "graph not certified rich after " + std::to_string(ap.k_rounds) + " rounds");
    res.working = std::move(ex.u);
  }
  std::optional<InducedSubgraph> sub;
  if (res.working.size() != n) sub = induced_subgraph(g, res.working);
  const Graph& wg = sub ? sub->graph : g;
  std::vector<Vertex> orig(wg.order());
  for (std::size_t i = 0; i < orig.size(); ++i) orig[i] = sub ? sub->original[i] : i;
  if (wg.order() < 4) throw PipelineFailure("rich_extract", "extracted set has fewer than 4 vertices");

  const auto ph = pigeonhole_pairs(wg, rc.bucket_width, params.pair_enum_cap, params.seed);
  res.d_prime = ph.d_prime;
  res.h_size = ph.h.size();
  const auto hf = filter_close_complements(wg, ph.h, rc.theta_compl);
  res.h_filtered_size = hf.size();
  auto dich = star_or_matching(wg, ph.h, hf, ph.d_prime, rc.star_floor, rc.matching_floor);
  res.mode = dich.mode;
  res.anchor = dich.anchor == Unit::kNone ? Unit::kNone : orig[dich.anchor];
  res.d_doubleprime = dich.d_doubleprime;
  res.l_size = dich.l.size();

  auto indep = independent_units(wg, dich.l, rc.theta_conflict);
  res.conflict_edges = indep.conflict_edges;
  auto a = std::move(indep.a);
  if (rc.a_cap > 0 && a.size() > rc.a_cap) a.resize(rc.a_cap);

  const auto ew = static_cast<double>(wg.edge_count());
  res.p = std::sqrt(4 * static_cast<double>(m) / ew);
  auto u0s = sample_U0(wg, a, m, res.p, res.d_doubleprime, params);
  res.attempts = u0s.attempts;
  res.accepted_attempt = u0s.accepted;

  std::vector<Unit> rq;
  {
    std::vector<char> in_q(a.size(), 0);
    for (auto i : u0s.q) in_q[i] = 1;
    for (auto i : u0s.r)
      if (in_q[i]) rq.push_back(a[i]);
  }
  auto stx = select_STX(wg, u0s.u0, rq);
  res.b_size = stx.b_size;
  res.d = res.p * static_cast<double>(res.d_doubleprime);
  res.d_linear = res.d >= params.kappa5 * nd;

  std::int64_t max_s = std::numeric_limits<std::int64_t>::min();
  std::int64_t min_t = std::numeric_limits<std::int64_t>::max();
  for (const auto& x : stx.s) max_s = std::max(max_s, static_cast<std::int64_t>(unit_degree(wg, x, u0s.u0)));
  for (const auto& x : stx.t) min_t = std::min(min_t, static_cast<std::int64_t>(unit_degree(wg, x, u0s.u0)));
  res.gap = min_t - max_s;

  res.a = map_units(a, orig);
  res.s = map_units(stx.s, orig);
  res.t = map_units(stx.t, orig);
  res.x = map_units(stx.x, orig);
  res.u0 = VertexSet(n);
  u0s.u0.for_each([&](Vertex v) { res.u0.insert(orig[v]); });

  const auto check = verify_construction(g, res);
  if (!check.ok())
    throw PipelineFailure("verify", "constructed sets fail the independent property check");
  return res;
}

ConstructionCheck verify_construction(const Graph& g, const ConstructionResult& r) {
  const auto n = static_cast<double>(g.order());
  const double root = std::sqrt(n);
  ConstructionCheck out;

  out.disjoint = true;
  VertexSet seen = r.u0;
  for (const auto* list : {&r.s, &r.t, &r.x})
    for (const auto& x : *list)
      x.for_each_vertex([&](Vertex v) {
        if (seen.contains(v)) out.disjoint = false;
        seen.insert(v);
      });

  out.degree_window = true;
  for (const auto* list : {&r.s, &r.t, &r.x})
    for (const auto& x : *list)
      if (std::abs(static_cast<double>(unit_degree(g, x, r.u0)) - r.d) > r.params.kappa2 * root)
        out.degree_window = false;

  if (!r.s.empty() && !r.t.empty()) {
    std::size_t max_s = 0;
    std::size_t min_t = std::numeric_limits<std::size_t>::max();
    for (const auto& x : r.s) max_s = std::max(max_s, unit_degree(g, x, r.u0));
    for (const auto& x : r.t) min_t = std::min(min_t, unit_degree(g, x, r.u0));
    out.gap = min_t > max_s && static_cast<double>(min_t - max_s) >= static_cast<double>(r.b_size) / 3;
  }

  out.x_symdiff = true;
  for (std::size_t i = 0; i < r.x.size(); ++i)
    for (std::size_t j = i + 1; j < r.x.size(); ++j)
      if (static_cast<double>(symdiff_size(g, r.x[i], r.x[j], r.u0)) < r.params.kappa3 * n) out.x_symdiff = false;

  const std::size_t arity = r.mode == ConstructionMode::star ? 1 : 2;
  out.mode_uniform = true;
  for (const auto* list : {&r.s, &r.t, &r.x})
    for (const auto& x : *list)
      if (x.arity() != arity) out.mode_uniform = false;
  return out;
}

}  // namespace spectra
