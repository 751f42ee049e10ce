#include <charconv>
#include <cmath>
#include <functional>
#include <string_view>

#include "spectra/cli/cli.hpp"
#include "spectra/errors.hpp"
#include "spectra/random.hpp"

namespace spectra::cli {
namespace {

using json = nlohmann::ordered_json;

template <typename T>
T parse_value(std::string_view key, std::string_view v) {
  T out{};
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc{} || ptr != end || v.empty())
    throw ContractError("override " + std::string(key) + ": cannot parse '" + std::string(v) + "'");
  if constexpr (std::is_floating_point_v<T>)
    if (!std::isfinite(out)) throw ContractError("override " + std::string(key) + ": value must be finite");
  return out;
}

template <>
bool parse_value<bool>(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ContractError("override " + std::string(key) + ": expected true or false, got '" + std::string(v) + "'");
}

template <>
ExposureParams::Thinning parse_value<ExposureParams::Thinning>(std::string_view key, std::string_view v) {
  if (v == "stride") return ExposureParams::Thinning::stride;
  if (v == "sweep") return ExposureParams::Thinning::sweep;
  throw ContractError("override " + std::string(key) + ": expected stride or sweep, got '" + std::string(v) + "'");
}

template <typename T>
json value_json(const T& v) {
  if constexpr (std::is_same_v<T, ExposureParams::Thinning>)
    return v == ExposureParams::Thinning::stride ? "stride" : "sweep";
  else
    return v;
}

struct Knob {
  std::string key;
  std::function<void(Settings&, std::string_view)> set;
  std::function<json(const Settings&)> get;
};

template <typename G, typename T>
Knob knob(std::string key, G Settings::*group, T G::*field) {
  return Knob{key,
              [=](Settings& s, std::string_view v) { (s.*group).*field = parse_value<T>(key, v); },
              [=](const Settings& s) { return value_json((s.*group).*field); }};
}

const std::vector<Knob>& knobs() {
  using C = ConstructionParams;
  using E = ExposureParams;
  using A = AuditParams;
  static const std::vector<Knob> table = [] {
    std::vector<Knob> t;
    auto c = [&](std::string k, auto f) { t.push_back(knob("construct." + k, &Settings::construction, f)); };
    c("C", &C::C);
    c("epsilon", &C::epsilon);
    c("delta", &C::delta);
    c("c", &C::c);
    c("density_factor", &C::density_factor);
    c("bucket_width", &C::bucket_width);
    c("theta_compl", &C::theta_compl);
    c("theta_conflict", &C::theta_conflict);
    c("star_floor", &C::star_floor);
    c("matching_floor", &C::matching_floor);
    c("pair_enum_cap", &C::pair_enum_cap);
    c("a_cap", &C::a_cap);
    c("kappa1", &C::kappa1);
    c("kappa2", &C::kappa2);
    c("kappa3", &C::kappa3);
    c("kappa4", &C::kappa4);
    c("kappa5", &C::kappa5);
    c("retry_max", &C::retry_max);
    c("rich_extract", &C::rich_extract);
    c("audit_budget", &C::audit_budget);
    c("audit_rounds", &C::audit_rounds);
    auto e = [&](std::string k, auto f) { t.push_back(knob("exposure." + k, &Settings::exposure, f)); };
    e("c_prime", &E::c_prime);
    e("span", &E::span);
    e("M", &E::M);
    e("beta", &E::beta);
    e("Q_sqrt", &E::Q_sqrt);
    e("Q_lin", &E::Q_lin);
    e("gamma", &E::gamma);
    e("q_thin", &E::q_thin);
    e("anchor_thinning", &E::anchor_thinning);
    e("kprime_sep", &E::kprime_sep);
    e("interval_len", &E::interval_len);
    e("kappa_gate", &E::kappa_gate);
    e("kappa_window", &E::kappa_window);
    e("k_fraction", &E::k_fraction);
    e("exposure_retries", &E::exposure_retries);
    e("verify_fraction", &E::verify_fraction);
    e("trials", &E::trials);
    auto a = [&](std::string k, auto f) { t.push_back(knob("audit." + k, &Settings::audit, f)); };
    a("epsilon", &A::epsilon);
    a("delta", &A::delta);
    a("c_div", &A::c_div);
    a("alpha", &A::alpha);
    a("sample_budget", &A::sample_budget);
    a("k_rounds", &A::k_rounds);
    t.push_back(knob("theorem.sigma", &Settings::theorem, &TheoremParams::sigma));
    t.push_back(knob("theorem.max_windows", &Settings::theorem, &TheoremParams::max_windows));
    t.push_back(knob("enum.max_n", &Settings::enumeration, &EnumerationOptions::max_n));
    t.push_back(knob("enum.prefix_bits", &Settings::enumeration, &EnumerationOptions::prefix_bits));
    t.push_back(Knob{"lo.range_cap",
                     [](Settings& s, std::string_view v) {
                       s.lo_range_cap = parse_value<std::int64_t>("lo.range_cap", v);
                     },
                     [](const Settings& s) { return json(s.lo_range_cap); }});
    return t;
  }();
  return table;
}

}  // namespace

std::vector<std::string> override_keys() {
  std::vector<std::string> out;
  for (const auto& k : knobs()) out.push_back(k.key);
  return out;
}

Settings make_settings(const RunConfig& config) {
  Settings s;
  for (const auto& kv : config.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) throw ContractError("override '" + kv + "' is not key=value");
    const std::string_view key(kv.data(), eq);
    const std::string_view value(kv.data() + eq + 1, kv.size() - eq - 1);
    const Knob* hit = nullptr;
    for (const auto& k : knobs())
      if (k.key == key) hit = &k;
    if (!hit) throw ContractError("unknown override key '" + std::string(key) + "'");
    hit->set(s, value);
  }
  s.construction.seed = derive_seed(config.seed, "construct");
  s.exposure.seed = derive_seed(config.seed, "exposure");
  s.audit.seed = derive_seed(config.seed, "audit");
  s.construction.workers = config.workers;
  s.exposure.workers = config.workers;
  s.theorem.workers = config.workers;
  s.enumeration.workers = config.workers;
  return s;
}

json settings_json(const Settings& s) {
  json out = json::object();
  for (const auto& k : knobs()) {
    const auto dot = k.key.find('.');
    out[k.key.substr(0, dot)][k.key.substr(dot + 1)] = k.get(s);
  }
  return out;
}

json effective_config(const RunConfig& c, const Settings& s) {
  json graph;
  if (!c.graph_file.empty())
    graph = {{"file", c.graph_file}};
  else
    graph = {{"model", c.model}, {"n", c.n}, {"p", c.p}};
  json out = {{"subcommand", c.subcommand}, {"graph", graph}, {"seed", c.seed}, {"workers", c.workers}};
  if (c.m) out["m"] = *c.m;
  if (c.lo) out["lo"] = *c.lo;
  if (c.hi) out["hi"] = *c.hi;
  if (!c.n_list.empty()) out["n_list"] = c.n_list;
  if (c.subcommand == "lo") {
    out["coefficients"] = c.coefficients;
    out["trials"] = c.trials;
  }
  if (c.subcommand == "sweep") {
    out["target"] = c.target;
    out["reps"] = c.reps;
  }
  out["params"] = settings_json(s);
  return out;
}

}  // namespace spectra::cli
