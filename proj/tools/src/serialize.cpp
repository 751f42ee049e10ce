#include "spectra/cli/serialize.hpp"

namespace spectra::cli {

json to_json(const VertexSet& s) { return json(s.members()); }

json to_json(const std::vector<Unit>& units) {
  json out = json::array();
  for (const auto& u : units) {
    json e = json::array({u.first});
    if (u.is_pair()) e.push_back(u.second);
    out.push_back(std::move(e));
  }
  return out;
}

json to_json(const ExtractRound& r) {
  return {{"input_size", r.input_size}, {"w_size", r.w_size},         {"y_size", r.y_size},
          {"s_size", r.s_size},         {"dense_side", r.dense_side}, {"output_size", r.output_size},
          {"source", r.source}};
}

json to_json(const std::vector<ExtractRound>& trace) {
  json out = json::array();
  for (const auto& r : trace) out.push_back(to_json(r));
  return out;
}

json to_json(const EventRecord& e) {
  return {{"pass", e.pass},
          {"e_u0", e.e_u0},
          {"q_size", e.q_size},
          {"r_size", e.r_size},
          {"min_symdiff", e.min_symdiff},
          {"equal_degree_pairs", e.equal_degree_pairs}};
}

json to_json(const ResolvedConstruction& r) {
  return {{"n", r.n},
          {"c", r.c},
          {"bucket_width", r.bucket_width},
          {"theta_compl", r.theta_compl},
          {"theta_conflict", r.theta_conflict},
          {"star_floor", r.star_floor},
          {"matching_floor", r.matching_floor},
          {"a_cap", r.a_cap},
          {"m_min", r.m_min},
          {"m_max", r.m_max}};
}

json to_json(const ConstructionResult& r) {
  json attempts = json::array();
  for (const auto& a : r.attempts) attempts.push_back(to_json(a));
  json d;
  d["anchor"] = r.anchor == Unit::kNone ? json(nullptr) : json(r.anchor);
  d["working_size"] = r.working.size();
  d["a_size"] = r.a.size();
  d["b_size"] = r.b_size;
  d["gap"] = r.gap;
  d["h_size"] = r.h_size;
  d["h_filtered_size"] = r.h_filtered_size;
  d["l_size"] = r.l_size;
  d["conflict_edges"] = r.conflict_edges;
  d["d_linear"] = r.d_linear;
  d["c_ramsey"] = r.c_ramsey ? json(*r.c_ramsey) : json(nullptr);
  d["extract_trace"] = to_json(r.extract_trace);
  d["attempts"] = std::move(attempts);
  d["accepted_attempt"] = r.accepted_attempt;
  d["resolved"] = to_json(r.resolved);
  return {{"mode", mode_name(r.mode)},
          {"m", r.m},
          {"c", r.c},
          {"d", r.d},
          {"d_prime", r.d_prime},
          {"d_doubleprime", r.d_doubleprime},
          {"p", r.p},
          {"u0_size", r.u0.size()},
          {"S", to_json(r.s)},
          {"T", to_json(r.t)},
          {"X", to_json(r.x)},
          {"diagnostics", std::move(d)}};
}

json to_json(const ResolvedExposure& r) {
  return {{"span", r.span},
          {"c_prime", r.c_prime},
          {"beta", r.beta},
          {"Q_lin", r.Q_lin},
          {"sep_ratio", r.sep_ratio},
          {"k_lo", r.k_lo},
          {"k_hi", r.k_hi},
          {"x_lo", r.x_lo},
          {"x_hi", r.x_hi},
          {"anchor_gap", r.anchor_gap},
          {"x_min", r.x_min},
          {"i_min", r.i_min},
          {"k_min", r.k_min},
          {"expected_drift", r.expected_drift},
          {"min_drift", r.min_drift}};
}

json to_json(const PerKRecord& r) {
  return {{"k", r.k},         {"e", r.e},       {"deltas", r.deltas}, {"e_hat0", r.e_hat0},
          {"i_k", r.i_k},     {"x_ki", r.x_ki}, {"o_ki", r.o_ki},     {"checks", r.checks}};
}

json to_json(const PerMOutcome& o) {
  json attempts = json::array();
  for (const auto& a : o.attempts) attempts.push_back({{"e_u", a.e_u}, {"gate", a.gate}, {"k_pass", a.k_pass}});
  json records = json::array();
  for (const auto& r : o.records) records.push_back(to_json(r));
  json anchors = json::array();
  for (const auto& a : o.p_prime) anchors.push_back({{"k", a.k}, {"i", a.i}, {"value", a.value}});
  json family = json::array();
  for (const auto& f : o.family) family.push_back({{"k", f.k}, {"i", f.i}, {"x", f.x}, {"size", f.size}});
  return {{"m", o.m},
          {"construction", to_json(o.construction)},
          {"resolved", to_json(o.resolved)},
          {"u", to_json(o.u)},
          {"e_u", o.e_u},
          {"attempts", std::move(attempts)},
          {"records", std::move(records)},
          {"k_set", o.k_set},
          {"k_prime", o.k_prime},
          {"k_stride", o.k_stride},
          {"p_prime", std::move(anchors)},
          {"p_stride", o.p_stride},
          {"family", std::move(family)},
          {"distinct_sizes", o.distinct_sizes.sizes},
          {"window_radius", o.window_radius},
          {"window_bound", o.window_bound}};
}

json to_json(const TheoremWindow& w) {
  return {{"j", w.j},
          {"m", w.m},
          {"ok", w.ok},
          {"stage", w.stage},
          {"kept", w.kept},
          {"e_u", w.e_u},
          {"count", w.count},
          {"min_size", w.min_size},
          {"max_size", w.max_size},
          {"k_selected", w.k_selected},
          {"p_selected", w.p_selected},
          {"attempts", w.attempts}};
}

json to_json(const TheoremOutcome& o) {
  json windows = json::array();
  for (const auto& w : o.windows) windows.push_back(to_json(w));
  return {{"sigma", o.sigma}, {"windows", std::move(windows)}, {"sizes", o.sizes.sizes}, {"total", o.total}};
}

json to_json(const SlopeFit& f) {
  return {{"slope", f.slope},
          {"intercept", f.intercept},
          {"std_error", f.std_error},
          {"ci_low", f.ci_low},
          {"ci_high", f.ci_high}};
}

}  // namespace spectra::cli
