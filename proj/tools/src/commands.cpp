#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "spectra/anticoncentration.hpp"
#include "spectra/cli/cli.hpp"
#include "spectra/cli/serialize.hpp"
#include "spectra/errors.hpp"
#include "spectra/fit.hpp"
#include "spectra/random.hpp"

namespace spectra::cli {
namespace {

void write_header(std::ostream& os, const RunConfig& c, const Settings& s) {
  os << "# spectra " << kVersion << '\n';
  os << "# config: " << effective_config(c, s).dump() << '\n';
  os << "# seed: " << c.seed << '\n';
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ContractError("cannot open graph file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Graph load_source(const RunConfig& c) {
  if (!c.graph_file.empty()) return load_graph(read_file(c.graph_file));
  if (c.n == 0) throw ContractError("no graph given: pass --graph FILE or --model NAME --n N");
  return generate({parse_model(c.model), c.n, c.p}, derive_seed(c.seed, "graph"));
}

std::int64_t default_m(const Graph& g, const ConstructionParams& cp) { return resolve(cp, g).m_min; }

void write_json(std::ostream& os, const json& j) { os << j.dump(2) << '\n'; }

void write_dump(const std::string& path, const json& j) {
  if (path.empty()) return;
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ContractError("cannot write dump file '" + path + "'");
  write_json(f, j);
}

std::string format_double(double x) {
  std::ostringstream ss;
  ss << std::setprecision(17) << x;
  return ss.str();
}

std::string slope_line(const SlopeFit& f) {
  return "slope=" + format_double(f.slope) + " ci95=[" + format_double(f.ci_low) + "," +
         format_double(f.ci_high) + "]";
}

void cmd_generate(std::ostream& os, const RunConfig& c) {
  if (!c.graph_file.empty()) throw ContractError("generate takes --model/--n, not --graph");
  os << write_graph(load_source(c));
}

void cmd_phi(std::ostream& os, const RunConfig& c, const Settings& s) {
  const Graph g = load_source(c);
  if (c.lo.has_value() != c.hi.has_value()) throw ContractError("--lo and --hi go together");
  const SizeSpectrum spec = c.lo ? phi_window(g, *c.lo, *c.hi, s.enumeration) : phi_exact(g, s.enumeration);
  for (std::size_t i = 0; i < spec.sizes.size(); ++i) os << (i ? "," : "") << spec.sizes[i];
  os << '\n' << "|Phi|=" << spec.count() << " max=" << g.edge_count() << '\n';
}

void cmd_psi(std::ostream& os, const RunConfig& c, const Settings& s) {
  const OrderSizeSpectrum spec = psi_exact(load_source(c), s.enumeration);
  os << "order,size\n";
  for (auto [k, e] : spec.pairs) os << k << ',' << e << '\n';
  os << "|Psi|=" << spec.count() << '\n';
}

void cmd_audit(std::ostream& os, const RunConfig& c, const Settings& s) {
  const Graph g = load_source(c);
  const AuditParams& ap = s.audit;
  ap.validate();
  const auto dens = density_bounds_check(g, ap.epsilon);
  const auto profile = diversity_profile(g, ap.c_div);
  std::size_t max_count = 0;
  for (auto x : profile) max_count = std::max(max_count, x);
  const auto verdict = richness_audit(g, ap);
  json witness = nullptr;
  if (verdict.witness)
    witness = {{"source", verdict.witness->source},
               {"w_size", verdict.witness->w.size()},
               {"y_size", verdict.witness->y.size()}};
  const auto extract = rich_extract(g, ap);
  json report = {
      {"schema_version", kSchemaVersion},
      {"n", g.order()},
      {"edges", g.edge_count()},
      {"density", dens.density},
      {"density_within_bounds", dens.within_bounds},
      {"diversity_max_count", max_count},
      {"diverse", is_diverse(profile, ap.delta)},
      {"close_complement_pairs", close_complement_pair_count(g, ap.epsilon / 2)},
      {"richness_status", verdict.status == RichnessStatus::witness_found ? "witness_found" : "no_witness_in_budget"},
      {"richness_witness", witness},
      {"richness_budget_used", verdict.budget_used},
      {"extract_trace", to_json(extract.trace)},
      {"extract_stop", extract.stop == ExtractStop::rich ? "rich" : "rounds_exhausted"},
      {"extract_size", extract.u.size()}};
  write_json(os, report);
}

void cmd_lo(std::ostream& os, const RunConfig& c, const Settings& s) {
  const auto model = parse_coefficient_model(c.coefficients);
  const std::vector<std::size_t> ns = c.n_list.empty() ? std::vector<std::size_t>{64, 256, 1024, 4096} : c.n_list;
  const auto fit = lo_scaling_fit(ns, model, c.p, c.trials, derive_seed(c.seed, "lo"), c.workers, s.lo_range_cap);
  os << "n,max_prob,method\n";
  for (const auto& pt : fit.points) os << pt.n << ',' << format_double(pt.max_prob) << ',' << (pt.exact ? "exact" : "mc") << '\n';
  os << slope_line(fit.fit) << '\n';
}

void cmd_construct(std::ostream& os, const RunConfig& c, const Settings& s) {
  const Graph g = load_source(c);
  const std::int64_t m = c.m ? *c.m : default_m(g, s.construction);
  const auto r = construct(g, m, s.construction);
  const auto check = verify_construction(g, r);
  json out = {{"schema_version", kSchemaVersion}};
  out.update(to_json(r));
  out["verified"] = {{"disjoint", check.disjoint},
                     {"degree_window", check.degree_window},
                     {"gap", check.gap},
                     {"x_symdiff", check.x_symdiff},
                     {"mode_uniform", check.mode_uniform}};
  write_json(os, out);
}

constexpr const char* kPerMColumns = "m,e_U,distinct_count,k_selected,p_selected,attempts";

void cmd_per_m(std::ostream& os, const RunConfig& c, const Settings& s) {
  const Graph g = load_source(c);
  const std::int64_t m = c.m ? *c.m : default_m(g, s.construction);
  const auto out = per_m_run(g, m, s.construction, s.exposure);
  os << kPerMColumns << '\n';
  os << out.m << ',' << out.e_u << ',' << out.distinct_sizes.count() << ',' << out.k_prime.size() << ','
     << out.p_prime.size() << ',' << out.attempts.size() << '\n';
  json dump = {{"schema_version", kSchemaVersion}};
  dump.update(to_json(out));
  write_dump(c.dump, dump);
}

void cmd_theorem(std::ostream& os, const RunConfig& c, const Settings& s) {
  const Graph g = load_source(c);
  const auto out = theorem_run(g, s.construction, s.exposure, s.theorem);
  os << kPerMColumns << '\n';
  std::size_t kept = 0;
  for (const auto& w : out.windows) {
    os << w.m << ',' << w.e_u << ',' << (w.kept ? w.count : 0) << ',' << w.k_selected << ',' << w.p_selected
       << ',' << w.attempts << '\n';
    kept += w.kept;
  }
  os << "total=" << out.total << " windows=" << out.windows.size() << " kept=" << kept << '\n';
  json dump = {{"schema_version", kSchemaVersion}};
  dump.update(to_json(out));
  write_dump(c.dump, dump);
}

void cmd_sweep(std::ostream& os, const RunConfig& c, const Settings& base) {
  if (c.target != "per-m" && c.target != "theorem") throw ContractError("sweep target must be per-m or theorem");
  if (c.reps == 0) throw ContractError("--reps must be positive");
  const std::vector<std::size_t> ns = c.n_list.empty() ? std::vector<std::size_t>{256, 512, 1024, 2048} : c.n_list;
  const auto model = parse_model(c.model);
  const bool per_m = c.target == "per-m";
  os << (per_m ? "n,rep,m,e_U,distinct_count,k_selected,p_selected,attempts,status\n"
               : "n,rep,windows,kept,distinct_count,status\n");
  std::map<std::size_t, std::pair<double, std::size_t>> totals;  // n -> (sum, ok runs)
  for (std::size_t idx = 0; idx < ns.size(); ++idx) {
    for (std::size_t rep = 0; rep < c.reps; ++rep) {
      const std::uint64_t key = idx * 1000 + rep;
      const Graph g = generate({model, ns[idx], c.p}, derive_seed(c.seed, "sweep-graph", key));
      Settings s = base;
      s.construction.seed = derive_seed(c.seed, "sweep-construct", key);
      s.exposure.seed = derive_seed(c.seed, "sweep-exposure", key);
      os << ns[idx] << ',' << rep << ',';
      try {
        std::size_t count = 0;
        if (per_m) {
          const auto out = per_m_run(g, default_m(g, s.construction), s.construction, s.exposure);
          count = out.distinct_sizes.count();
          os << out.m << ',' << out.e_u << ',' << count << ',' << out.k_prime.size() << ',' << out.p_prime.size()
             << ',' << out.attempts.size() << ",ok\n";
        } else {
          const auto out = theorem_run(g, s.construction, s.exposure, s.theorem);
          std::size_t kept = 0;
          for (const auto& w : out.windows) kept += w.kept;
          count = out.total;
          os << out.windows.size() << ',' << kept << ',' << count << ",ok\n";
        }
        auto& t = totals[ns[idx]];
        t.first += static_cast<double>(count);
        ++t.second;
      } catch (const PipelineFailure& f) {
        os << (per_m ? "0,0,0,0,0,0," : "0,0,0,") << "fail:" << f.stage() << '\n';
      }
    }
  }
  std::vector<std::pair<double, double>> pts;
  for (const auto& [n, t] : totals)
    if (t.second > 0 && t.first > 0) pts.emplace_back(static_cast<double>(n), t.first / static_cast<double>(t.second));
  if (pts.size() < 3) throw PipelineFailure("sweep", "fewer than three sizes produced a positive count");
  os << slope_line(fit_loglog_slope(pts)) << '\n';
}

std::string diagnostics_path(const RunConfig& c) {
  if (!c.diagnostics.empty()) return c.diagnostics;
  if (!c.output.empty()) return c.output + ".diagnostics.json";
  return "spectra-diagnostics.json";
}

void write_diagnostics(const RunConfig& c, const PipelineFailure& f) {
  json detail = json::parse(f.diagnostics(), nullptr, false);
  if (detail.is_discarded()) detail = f.diagnostics();
  json report = {{"schema_version", kSchemaVersion},
                 {"stage", f.stage()},
                 {"what", f.what()},
                 {"diagnostics", detail}};
  std::ofstream out(diagnostics_path(c), std::ios::binary);
  if (out) write_json(out, report);
}

}  // namespace

int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
  std::ostringstream body;
  int code = Exit::ok;
  try {
    const Settings s = make_settings(c);
    if (c.workers == 0) throw ContractError("--workers must be positive");
    write_header(body, c, s);
    if (c.subcommand == "generate") cmd_generate(body, c);
    else if (c.subcommand == "phi") cmd_phi(body, c, s);
    else if (c.subcommand == "psi") cmd_psi(body, c, s);
    else if (c.subcommand == "audit") cmd_audit(body, c, s);
    else if (c.subcommand == "lo") cmd_lo(body, c, s);
    else if (c.subcommand == "construct") cmd_construct(body, c, s);
    else if (c.subcommand == "per-m") cmd_per_m(body, c, s);
    else if (c.subcommand == "theorem") cmd_theorem(body, c, s);
    else if (c.subcommand == "sweep") cmd_sweep(body, c, s);
    else throw ContractError("unknown subcommand '" + c.subcommand + "'");
  } catch (const ContractError& e) {
    err << "error: " << e.what() << '\n';
    return Exit::contract;
  } catch (const CapacityError& e) {
    err << "capacity: " << e.what() << '\n';
    return Exit::capacity;
  } catch (const PipelineFailure& e) {
    err << "pipeline failure in " << e.what() << '\n';
    write_diagnostics(c, e);
    code = Exit::pipeline;
  }
  if (c.output.empty()) {
    out << body.str();
  } else {
    std::ofstream f(c.output, std::ios::binary);
    if (!f) {
      err << "error: cannot write '" << c.output << "'\n";
      return Exit::contract;
    }
    f << body.str();
  }
  return code;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Induced-subgraph size spectra: exact enumeration and constructive lower-bound families", "spectra"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  RunConfig c;

  auto common = [&](CLI::App* sub, bool graph) {
    if (graph) {
      sub->add_option("--graph", c.graph_file, "Edge-list file ('n N' header, then 'u v' lines)");
      sub->add_option("--model", c.model, "Generator: gnp, paley, complete, empty")->capture_default_str();
      sub->add_option("--n", c.n, "Generator vertex count (paley: the prime q)");
    }
    sub->add_option("--p", c.p, "Edge probability (gnp) or Bernoulli rate (lo)")->capture_default_str();
    sub->add_option("--seed", c.seed, "Master seed")->capture_default_str();
    sub->add_option("--workers", c.workers, "Worker threads; results do not depend on it")->capture_default_str();
    sub->add_option("--set", c.overrides, "Parameter override key=value (repeatable)");
    sub->add_option("-o,--output", c.output, "Output file (default stdout)");
    sub->add_option("--diagnostics", c.diagnostics, "Pipeline-failure report path");
  };

  auto* gen = app.add_subcommand("generate", "Write a generated graph as an edge list");
  common(gen, true);
  auto* phi = app.add_subcommand("phi", "Exact size spectrum by Gray-code enumeration");
  common(phi, true);
  phi->add_option("--lo", c.lo, "Window lower bound");
  phi->add_option("--hi", c.hi, "Window upper bound");
  auto* psi = app.add_subcommand("psi", "Exact (order, size) spectrum");
  common(psi, true);
  auto* audit = app.add_subcommand("audit", "Density, diversity and richness report");
  common(audit, true);
  auto* lo = app.add_subcommand("lo", "Max point probability of Bernoulli sums and its scaling in n");
  common(lo, false);
  lo->add_option("--coefficients", c.coefficients, "ones, uniform3, uniform10")->capture_default_str();
  lo->add_option("--n-list", c.n_list, "Comma-separated n values")->delimiter(',');
  lo->add_option("--trials", c.trials, "Monte-Carlo trials where exact DP is out of range")->capture_default_str();
  auto* cons = app.add_subcommand("construct", "Build the S, T, X structure for a target m");
  common(cons, true);
  cons->add_option("--m", c.m, "Target edge count (default ceil(c n^2))");
  auto* perm = app.add_subcommand("per-m", "Distinct sizes near one target m");
  common(perm, true);
  perm->add_option("--m", c.m, "Target edge count (default ceil(c n^2))");
  perm->add_option("--dump", c.dump, "Write the full outcome as JSON");
  auto* thm = app.add_subcommand("theorem", "Union of per-m families over a window grid");
  common(thm, true);
  thm->add_option("--dump", c.dump, "Write the full outcome as JSON");
  auto* sweep = app.add_subcommand("sweep", "Run per-m or theorem over n values and fit a log-log slope");
  common(sweep, false);
  sweep->add_option("--model", c.model, "Generator model")->capture_default_str();
  sweep->add_option("--target", c.target, "per-m or theorem")->capture_default_str();
  sweep->add_option("--n-list", c.n_list, "Comma-separated n values")->delimiter(',');
  sweep->add_option("--reps", c.reps, "Graphs per n; counts are averaged before the fit")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    if (rc == 0) return Exit::ok;
    err << app.help();
    return Exit::contract;
  }
  for (auto* sub : app.get_subcommands()) c.subcommand = sub->get_name();
  return run(c, out, err);
}

}  // namespace spectra::cli
