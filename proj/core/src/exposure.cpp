#include "spectra/exposure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <tuple>
#include <sstream>

#include "spectra/errors.hpp"
#include "spectra/parallel.hpp"
#include "spectra/random.hpp"

namespace spectra {

void ExposureParams::validate() const {
  if (!(c_prime >= 0)) throw ContractError("exposure: c_prime must be >= 0");
  if (!(M > 0)) throw ContractError("exposure: M must be positive");
  if (!(Q_sqrt > 0 && Q_lin > 0)) throw ContractError("exposure: Q constants must be positive");
  if (beta >= 0 && Q_lin < 3 * beta) throw ContractError("exposure: need Q_lin >= 3*beta");
  if (!(gamma > 0)) throw ContractError("exposure: gamma must be positive");
  if (q_thin < 1) throw ContractError("exposure: q_thin must be >= 1");
  if (!(kprime_sep >= 0 && interval_len >= 0)) throw ContractError("exposure: spacing factors must be >= 0");
  if (!(kappa_gate > 0 && kappa_window > 0)) throw ContractError("exposure: kappa constants must be positive");
  if (!(k_fraction >= 0 && k_fraction <= 1)) throw ContractError("exposure: k_fraction must lie in [0,1]");
  if (exposure_retries < 1) throw ContractError("exposure: exposure_retries must be >= 1");
  if (!(verify_fraction >= 0 && verify_fraction <= 1)) throw ContractError("exposure: verify_fraction must lie in [0,1]");
}

VertexSet z_family(std::size_t n, const std::vector<Unit>& s, const std::vector<Unit>& t, std::size_t k,
                   std::size_t i) {
  if (i > k) throw ContractError("z_family: i = " + std::to_string(i) + " exceeds k = " + std::to_string(k));
  if (k - i > s.size()) throw ContractError("z_family: k - i exceeds |S|");
  if (i > t.size()) throw ContractError("z_family: i exceeds |T|");
  VertexSet z(n);
  for (std::size_t j = 0; j < k - i; ++j) s[j].for_each_vertex([&](Vertex v) { z.insert(v); });
  for (std::size_t j = 0; j < i; ++j) t[j].for_each_vertex([&](Vertex v) { z.insert(v); });
  return z;
}

VertexSet expose(const VertexSet& u0, std::uint64_t seed) {
  if (u0.empty()) throw ContractError("expose: U0 is empty");
  Rng rng(derive_seed(seed, "expose-coins"));
  VertexSet u(u0.universe());
  u0.for_each([&](Vertex v) {
    if (rng.bernoulli(0.5)) u.insert(v);
  });
  return u;
}

namespace {

// e(R ∪ x) − e(R) for a unit x disjoint from R.
std::int64_t unit_gain(const Graph& g, const Unit& x, const VertexSet& r) {
  auto gain = static_cast<std::int64_t>(unit_degree(g, x, r));
  if (x.is_pair() && g.has_edge(x.first, x.second)) ++gain;
  return gain;
}

double expected_e(const Graph& g, const VertexSet& z, const VertexSet& u0) {
  return static_cast<double>(count_edges(g, z)) + static_cast<double>(count_edges(g, z, &u0)) / 2;
}

}  // namespace

ResolvedExposure resolve_exposure(const Graph& g, const ConstructionResult& cr, const ExposureParams& params) {
  params.validate();
  const std::size_t n = g.order();
  const auto nd = static_cast<double>(n);
  const double root = std::sqrt(nd);
  ResolvedExposure rx;
  if (cr.s.empty() || cr.t.empty()) throw ContractError("exposure: S and T must be non-empty");
  if (params.span > 0)
    rx.span = params.span;
  else if (params.c_prime > 0)
    rx.span = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(params.c_prime * root)));
  else
    rx.span = std::max<std::size_t>(1, std::min(cr.s.size() / 2, cr.t.size()));
  if (rx.span > cr.t.size() || rx.span > cr.s.size())
    throw ContractError("exposure: span " + std::to_string(rx.span) + " exceeds |S| or |T|");
  rx.c_prime = params.c_prime > 0 ? params.c_prime : static_cast<double>(rx.span) / root;
  rx.sep_ratio = static_cast<double>(cr.gap) / (8 * root) / rx.c_prime;
  rx.k_lo = rx.span;
  rx.k_hi = std::min(2 * rx.span, cr.s.size());

  double min_drift = std::numeric_limits<double>::infinity();
  for (std::size_t k = rx.k_lo; k <= rx.k_hi; ++k) {
    const double drift = expected_e(g, z_family(n, cr.s, cr.t, k, rx.span), cr.u0) -
                         expected_e(g, z_family(n, cr.s, cr.t, k, 0), cr.u0);
    rx.expected_drift.push_back(drift);
    min_drift = std::min(min_drift, drift);
  }
  rx.min_drift = min_drift;
  if (params.beta >= 0) {
    rx.beta = params.beta;
    rx.Q_lin = params.Q_lin;
  } else {
    rx.beta = 2 * rx.c_prime * rx.c_prime / 3;
    rx.Q_lin = std::max(params.Q_lin, 3 * rx.beta);
  }
  rx.x_lo = static_cast<std::int64_t>(std::ceil(cr.d / 2 - params.Q_sqrt * root));
  rx.x_hi = static_cast<std::int64_t>(std::floor(cr.d / 2 + params.Q_sqrt * root));
  rx.anchor_gap =
      std::max(static_cast<std::int64_t>(std::ceil(2 * params.Q_sqrt * root)), rx.x_hi - rx.x_lo + 1);
  rx.x_min = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(params.gamma * root - 1e-9)));
  rx.i_min = static_cast<std::size_t>(
      std::max(0.0, std::ceil((1 - rx.beta / (2 * params.M)) * static_cast<double>(rx.span) - 1e-9)));
  const auto rows = static_cast<double>(rx.k_hi - rx.k_lo + 1);
  rx.k_min = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(params.k_fraction * rows - 1e-9)));
  return rx;
}

std::vector<PerKRecord> family_table(const Graph& g, const VertexSet& u, const VertexSet& u0,
                                      const std::vector<Unit>& s, const std::vector<Unit>& t,
                                      const ResolvedExposure& rx, double verify_fraction, std::uint64_t seed,
                                      std::size_t workers) {
  const std::size_t n = g.order();
  const std::size_t rows = rx.k_hi - rx.k_lo + 1;
  std::vector<PerKRecord> out(rows);
  parallel_for(rows, workers, [&](std::size_t r) {
    PerKRecord& rec = out[r];
    rec.k = rx.k_lo + r;
    VertexSet z = z_family(n, s, t, rec.k, 0);
    rec.e_hat0 = expected_e(g, z, u0);
    std::int64_t e = count_edges(g, z) + count_edges(g, z, &u);
    rec.e.push_back(e);
    VertexSet zu = z | u;
    for (std::size_t i = 0; i < rx.span; ++i) {
      // i -> i+1 drops the last S unit of Z_{k,i} and adds the next T unit
      const Unit& out_unit = s[rec.k - i - 1];
      const Unit& in_unit = t[i];
      out_unit.for_each_vertex([&](Vertex v) { zu.erase(v); });
      e -= unit_gain(g, out_unit, zu);
      e += unit_gain(g, in_unit, zu);
      in_unit.for_each_vertex([&](Vertex v) { zu.insert(v); });
      rec.e.push_back(e);
      rec.deltas.push_back(rec.e[i + 1] - rec.e[i]);
    }
  });

  // Spot-check the incremental values against direct counts.
  const std::int64_t e_u = count_edges(g, u);
  const std::size_t cells = rows * (rx.span + 1);
  const auto checks = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(verify_fraction * static_cast<double>(cells))));
  Rng rng(derive_seed(seed, "cell-verify"));
  for (std::size_t c = 0; c < checks; ++c) {
    const auto cell = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(cells - 1)));
    const std::size_t r = cell / (rx.span + 1);
    const std::size_t i = cell % (rx.span + 1);
    const VertexSet zu = z_family(n, s, t, out[r].k, i) | u;
    if (count_edges(g, zu) - e_u != out[r].e[i])
      throw PipelineFailure("family_table", "incremental e_{k,i} disagrees with direct count at k=" +
                                                std::to_string(out[r].k) + ", i=" + std::to_string(i));
  }
  for (const auto& rec : out) {
    std::int64_t sum = 0;
    for (auto d : rec.deltas) sum += d;
    if (sum != rec.e.back() - rec.e.front()) throw PipelineFailure("family_table", "deltas do not telescope");
  }
  return out;
}

void per_k_checks(PerKRecord& rec, const Graph& g, const VertexSet& u, const std::vector<Unit>& s,
                  const std::vector<Unit>& t, const std::vector<Unit>& x, const ResolvedExposure& rx,
                  const ExposureParams& params) {
  const std::size_t n = g.order();
  const auto nd = static_cast<double>(n);
  const double root = std::sqrt(nd);
  rec.i_k.clear();
  rec.x_ki.assign(rx.span + 1, {});
  rec.o_ki.assign(rx.span + 1, {});
  for (std::size_t i = 0; i <= rx.span; ++i) {
    const VertexSet zu = z_family(n, s, t, rec.k, i) | u;
    std::map<std::int64_t, std::size_t> first_by_value;
    for (std::size_t j = 0; j < x.size(); ++j) {
      const auto o = unit_gain(g, x[j], zu);
      if (o < rx.x_lo || o > rx.x_hi) continue;
      first_by_value.emplace(o, j);
    }
    for (auto [o, j] : first_by_value) {
      rec.x_ki[i].push_back(j);
      rec.o_ki[i].push_back(o);
    }
    if (rec.x_ki[i].size() >= rx.x_min) rec.i_k.push_back(i);
  }
  rec.checks[0] = rec.i_k.size() >= rx.i_min;
  rec.checks[1] = std::abs(static_cast<double>(rec.e.front()) - rec.e_hat0) <= rx.Q_lin * nd;
  rec.checks[2] = static_cast<double>(rec.e.back() - rec.e.front()) >= 3 * rx.beta * nd;
  double large = 0;
  for (auto d : rec.deltas)
    if (static_cast<double>(std::abs(d)) >= params.M * root) large += static_cast<double>(std::abs(d));
  rec.checks[3] = large <= rx.beta * nd;
}

namespace {

// Smallest stride q ≥ q_min such that every q-th element of `values`
// (starting at the first) has consecutive differences ≥ gap.
template <typename Get>
std::size_t minimal_stride(std::size_t count, std::size_t q_min, double gap, Get value) {
  for (std::size_t q = std::max<std::size_t>(1, q_min);; ++q) {
    bool ok = true;
    for (std::size_t i = q; i < count && ok; i += q) ok = std::abs(value(i) - value(i - q)) >= gap;
    if (ok || q >= count) return q;
  }
}

std::string attempts_json(const std::vector<ExposureAttempt>& attempts) {
  std::ostringstream os;
  os << "{\"attempts\":[";
  for (std::size_t i = 0; i < attempts.size(); ++i)
    os << (i ? "," : "") << "{\"e_U\":" << attempts[i].e_u << ",\"gate\":" << (attempts[i].gate ? "true" : "false")
       << ",\"k_pass\":" << attempts[i].k_pass << "}";
  os << "]}";
  return os.str();
}

}  // namespace

PerMOutcome per_m_from_construction(const Graph& g, ConstructionResult cr, const ExposureParams& params) {
  const std::size_t n = g.order();
  const auto nd = static_cast<double>(n);
  const double root = std::sqrt(nd);
  PerMOutcome out;
  out.m = cr.m;
  out.params = params;
  out.resolved = resolve_exposure(g, cr, params);
  const auto& rx = out.resolved;

  bool accepted = false;
  for (std::size_t a = 0; a < params.exposure_retries && !accepted; ++a) {
    VertexSet u = expose(cr.u0, derive_seed(params.seed, "expose", a));
    ExposureAttempt att;
    att.e_u = count_edges(g, u);
    att.gate = std::abs(static_cast<double>(att.e_u - cr.m)) <= params.kappa_gate * nd * root;
    if (att.gate) {
      auto records =
          family_table(g, u, cr.u0, cr.s, cr.t, rx, params.verify_fraction, derive_seed(params.seed, "verify", a),
                       params.workers);
      for (auto& rec : records) {
        per_k_checks(rec, g, u, cr.s, cr.t, cr.x, rx, params);
        if (rec.all()) ++att.k_pass;
      }
      if (att.k_pass >= rx.k_min) {
        accepted = true;
        out.u = std::move(u);
        out.e_u = att.e_u;
        out.records = std::move(records);
      }
    }
    out.attempts.push_back(att);
  }
  if (!accepted)
    throw PipelineFailure("per_m_run",
                          "no exposure passed the e(U) gate and the row count in " +
                              std::to_string(params.exposure_retries) + " attempts",
                          attempts_json(out.attempts));

  for (std::size_t r = 0; r < out.records.size(); ++r)
    if (out.records[r].all()) out.k_set.push_back(r);
  const double k_gap = params.kprime_sep * rx.Q_lin * nd;
  out.k_stride = minimal_stride(out.k_set.size(), params.q_thin, k_gap,
                                [&](std::size_t j) { return out.records[out.k_set[j]].e_hat0; });
  for (std::size_t j = 0; j < out.k_set.size(); j += out.k_stride) out.k_prime.push_back(out.k_set[j]);

  std::vector<Anchor> candidates;
  for (auto r : out.k_prime) {
    const auto& rec = out.records[r];
    std::vector<std::size_t> reps;
    if (params.interval_len > 0) {
      const double len = params.interval_len * root;
      const auto intervals = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(3 * rx.beta * nd / (1.5 * len))));
      for (std::size_t j = 0; j < intervals; ++j) {
        const double lo = static_cast<double>(rec.e.front()) + 1.5 * len * static_cast<double>(j);
        for (std::size_t i = 0; i < rec.e.size(); ++i) {
          const auto v = static_cast<double>(rec.e[i]);
          if (v >= lo && v <= lo + len) {
            reps.push_back(i);
            break;
          }
        }
      }
    } else {
      for (std::size_t i = 0; i < rec.e.size(); ++i) reps.push_back(i);
    }
    for (auto i : reps)
      if (std::binary_search(rec.i_k.begin(), rec.i_k.end(), i)) candidates.push_back({rec.k, i, rec.e[i]});
  }
  if (candidates.empty()) throw PipelineFailure("per_m_run", "no (k,i) candidates after thinning");
  std::sort(candidates.begin(), candidates.end(), [](const Anchor& a, const Anchor& b) {
    return std::tie(a.value, a.k, a.i) < std::tie(b.value, b.k, b.i);
  });
  if (params.anchor_thinning == ExposureParams::Thinning::stride) {
    out.p_stride = minimal_stride(candidates.size(), params.q_thin, static_cast<double>(rx.anchor_gap),
                                  [&](std::size_t j) { return static_cast<double>(candidates[j].value); });
    for (std::size_t j = 0; j < candidates.size(); j += out.p_stride) out.p_prime.push_back(candidates[j]);
  } else {
    out.p_stride = 0;
    for (const auto& c : candidates)
      if (out.p_prime.empty() || c.value - out.p_prime.back().value >= rx.anchor_gap) out.p_prime.push_back(c);
  }

  std::vector<std::int64_t> sizes;
  for (const auto& an : out.p_prime) {
    const auto& rec = out.records[an.k - rx.k_lo];
    for (std::size_t j = 0; j < rec.x_ki[an.i].size(); ++j) {
      const std::int64_t size = out.e_u + an.value + rec.o_ki[an.i][j];
      out.family.push_back({an.k, an.i, rec.x_ki[an.i][j], size});
      sizes.push_back(size);
      out.window_radius = std::max(out.window_radius, std::abs(size - out.e_u));
    }
  }
  std::sort(sizes.begin(), sizes.end());
  sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
  out.distinct_sizes = SizeSpectrum{n, std::move(sizes)};
  out.window_bound = params.kappa_window * nd * root;
  if (static_cast<double>(out.window_radius) > out.window_bound)
    throw PipelineFailure("per_m_run", "sizes leave the window e(U) ± " + std::to_string(out.window_bound));
  out.construction = std::move(cr);
  return out;
}

PerMOutcome per_m_run(const Graph& g, std::int64_t m, const ConstructionParams& cparams,
                      const ExposureParams& eparams) {
  eparams.validate();
  return per_m_from_construction(g, construct(g, m, cparams), eparams);
}

SeparationCheck verify_separation(const Graph& g, const PerMOutcome& out) {
  const double root = std::sqrt(static_cast<double>(g.order()));
  const double width = 2 * out.params.Q_sqrt * root;
  SeparationCheck sc;
  sc.anchors_spaced = true;
  for (std::size_t j = 1; j < out.p_prime.size(); ++j)
    if (static_cast<double>(out.p_prime[j].value - out.p_prime[j - 1].value) < width) sc.anchors_spaced = false;

  std::map<std::pair<std::size_t, std::size_t>, std::pair<std::int64_t, std::int64_t>> span;
  std::map<std::int64_t, std::pair<std::size_t, std::size_t>> owner;
  sc.no_collisions = true;
  for (const auto& f : out.family) {
    const auto key = std::make_pair(f.k, f.i);
    auto [it, fresh] = span.emplace(key, std::make_pair(f.size, f.size));
    if (!fresh) {
      it->second.first = std::min(it->second.first, f.size);
      it->second.second = std::max(it->second.second, f.size);
    }
    auto [ot, new_size] = owner.emplace(f.size, key);
    if (!new_size && ot->second != key) sc.no_collisions = false;
  }
  sc.clusters_narrow = true;
  for (const auto& [key, lohi] : span)
    if (static_cast<double>(lohi.second - lohi.first) > width) sc.clusters_narrow = false;

  const auto& cr = out.construction;
  sc.sizes_reproduce = out.distinct_sizes.count() == owner.size();
  for (const auto& f : out.family) {
    VertexSet w = z_family(g.order(), cr.s, cr.t, f.k, f.i) | out.u;
    cr.x[f.x].for_each_vertex([&](Vertex v) { w.insert(v); });
    if (count_edges(g, w) != f.size) sc.sizes_reproduce = false;
  }
  sc.window_contained = true;
  for (auto e : out.distinct_sizes.sizes)
    if (static_cast<double>(std::abs(e - out.e_u)) > out.window_bound) sc.window_contained = false;
  return sc;
}

PerKStats per_k_statistics(const Graph& g, const ConstructionResult& cr, const ExposureParams& params) {
  const auto rx = resolve_exposure(g, cr, params);
  PerKStats st;
  st.exposures = params.trials;
  st.rows = rx.k_hi - rx.k_lo + 1;
  std::vector<std::array<std::size_t, 4>> slots(params.trials);
  parallel_for(params.trials, params.workers, [&](std::size_t trial) {
    const VertexSet u = expose(cr.u0, derive_seed(params.seed, "perk-stats", trial));
    auto records = family_table(g, u, cr.u0, cr.s, cr.t, rx, params.verify_fraction,
                                derive_seed(params.seed, "perk-verify", trial));
    for (auto& rec : records) {
      per_k_checks(rec, g, u, cr.s, cr.t, cr.x, rx, params);
      for (std::size_t c = 0; c < 4; ++c) slots[trial][c] += rec.checks[c] ? 1 : 0;
    }
  });
  for (const auto& s : slots)
    for (std::size_t c = 0; c < 4; ++c) st.passes[c] += s[c];
  const auto total = static_cast<double>(st.exposures * st.rows);
  for (std::size_t c = 0; c < 4; ++c) st.rates[c] = total > 0 ? static_cast<double>(st.passes[c]) / total : 0;
  return st;
}

namespace {

TheoremWindow summarize(std::size_t j, std::int64_t m, const PerMOutcome& o) {
  TheoremWindow w;
  w.j = j;
  w.m = m;
  w.ok = true;
  w.e_u = o.e_u;
  w.count = o.distinct_sizes.count();
  w.min_size = o.distinct_sizes.sizes.front();
  w.max_size = o.distinct_sizes.sizes.back();
  w.k_selected = o.k_prime.size();
  w.p_selected = o.p_prime.size();
  w.attempts = o.attempts.size();
  return w;
}

}  // namespace

TheoremOutcome theorem_run(const Graph& g, const ConstructionParams& cparams, const ExposureParams& eparams,
                           const TheoremParams& tparams) {
  cparams.validate();
  eparams.validate();
  if (!(tparams.sigma >= 0)) throw ContractError("theorem: sigma must be >= 0");
  const auto nd = static_cast<double>(g.order());
  const double scale = nd * std::sqrt(nd);
  const auto rc = resolve(cparams, g);

  auto window_params = [&](std::size_t j) {
    auto cp = cparams;
    auto ep = eparams;
    cp.seed = derive_seed(cparams.seed, "theorem-window", j);
    ep.seed = derive_seed(eparams.seed, "theorem-window", j);
    return std::make_pair(cp, ep);
  };

  TheoremOutcome out;
  std::vector<std::optional<PerMOutcome>> results;
  std::vector<TheoremWindow> windows;

  std::optional<PerMOutcome> pilot;
  TheoremWindow pilot_window;
  pilot_window.m = rc.m_min;
  {
    auto [cp, ep] = window_params(0);
    try {
      pilot = per_m_run(g, rc.m_min, cp, ep);
    } catch (const PipelineFailure& f) {
      if (tparams.sigma == 0) throw;
      pilot_window.stage = f.stage();
    }
  }
  if (tparams.sigma > 0) {
    out.sigma = tparams.sigma;
  } else {
    const double gate = eparams.kappa_gate * scale;
    std::int64_t lo = std::numeric_limits<std::int64_t>::max(), hi = std::numeric_limits<std::int64_t>::min();
    for (auto e : pilot->distinct_sizes.sizes) {
      lo = std::min(lo, e - pilot->e_u);
      hi = std::max(hi, e - pilot->e_u);
    }
    out.sigma = 1.25 * (2 * gate + static_cast<double>(hi - lo) + 1) / scale;
  }

  std::vector<std::int64_t> ms{rc.m_min};
  for (std::size_t j = 1; j < tparams.max_windows; ++j) {
    const auto m = rc.m_min + static_cast<std::int64_t>(std::ceil(static_cast<double>(j) * out.sigma * scale));
    if (m > rc.m_max) break;
    ms.push_back(m);
  }
  results.resize(ms.size());
  windows.resize(ms.size());
  results[0] = std::move(pilot);
  windows[0] = results[0] ? summarize(0, ms[0], *results[0]) : pilot_window;
  parallel_for(ms.size() - 1, tparams.workers, [&](std::size_t idx) {
    const std::size_t j = idx + 1;
    auto [cp, ep] = window_params(j);
    try {
      results[j] = per_m_run(g, ms[j], cp, ep);
      windows[j] = summarize(j, ms[j], *results[j]);
    } catch (const PipelineFailure& f) {
      windows[j].j = j;
      windows[j].m = ms[j];
      windows[j].stage = f.stage();
    }
  });

  std::vector<std::int64_t> all;
  std::optional<std::int64_t> last_max;
  for (std::size_t j = 0; j < ms.size(); ++j) {
    auto& w = windows[j];
    if (!w.ok) continue;
    if (last_max && w.min_size <= *last_max) continue;
    w.kept = true;
    last_max = w.max_size;
    out.total += w.count;
    all.insert(all.end(), results[j]->distinct_sizes.sizes.begin(), results[j]->distinct_sizes.sizes.end());
  }
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  out.sizes = SizeSpectrum{g.order(), std::move(all)};
  if (out.sizes.count() != out.total) throw PipelineFailure("theorem_run", "kept windows share a size");
  out.windows = std::move(windows);
  return out;
}

}  // namespace spectra
