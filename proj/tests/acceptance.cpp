// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Arguments select criteria by number; none runs all of them.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <sstream>
#include <string>
#include <thread>

#include "oracles.hpp"
#include "spectra/anticoncentration.hpp"
#include "spectra/cli/cli.hpp"
#include "spectra/construct.hpp"
#include "spectra/errors.hpp"
#include "spectra/exposure.hpp"
#include "spectra/random.hpp"
#include "spectra/spectrum.hpp"

using namespace spectra;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::size_t workers() { return std::max(1U, std::thread::hardware_concurrency()); }

int failures = 0;

void report(int id, bool pass, const std::string& detail) {
  std::printf("criterion %d: %s  %s\n", id, pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

struct CliResult {
  int rc = 0;
  std::string out;
};

CliResult cli_run(std::vector<std::string> args) {
  args.insert(args.begin(), "spectra");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int rc = cli::main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  return {rc, out.str()};
}

std::string body(const std::string& text) {
  std::istringstream in(text);
  std::string line, out;
  while (std::getline(in, line))
    if (line.rfind("# ", 0) != 0) out += line + "\n";
  return out;
}

double parse_slope(const std::string& text) {
  const auto pos = text.find("slope=");
  if (pos == std::string::npos) return std::nan("");
  return std::stod(text.substr(pos + 6));
}

// ---------------------------------------------------------------------------

void oracle_equivalence() {
  const auto t0 = Clock::now();
  std::size_t mismatches = 0;
  for (std::uint64_t s = 0; s < 200; ++s) {
    const std::size_t n = 4 + s % 9;
    const Graph g = oracle::random_graph(n, 0.2 + 0.003 * static_cast<double>(s), derive_seed(1, "acc1", s));
    const auto a = oracle::matrix(g);
    if (phi_exact(g) != phi_naive(g)) ++mismatches;
    if (psi_exact(g).count() != oracle::psi(a).size()) ++mismatches;
  }
  const double t = seconds_since(t0);
  report(1, mismatches == 0 && t < 10, fmt("200 graphs, mismatches=%zu, %.2fs (limit 10s)", mismatches, t));
}

void closed_forms() {
  bool ok = true;
  for (std::size_t n = 1; n <= 16; ++n) {
    std::vector<std::int64_t> expect;
    for (std::size_t k = 0; k <= n; ++k) expect.push_back(static_cast<std::int64_t>(k * (k - 1) / 2));
    expect.erase(std::unique(expect.begin(), expect.end()), expect.end());
    ok &= phi_exact(generate({Model::complete, n, 0}, 0)).sizes == expect;
    ok &= phi_exact(Graph(n)).sizes == std::vector<std::int64_t>{0};
  }
  std::size_t psi_bad = 0;
  EnumerationOptions opts;
  opts.workers = workers();
  for (std::uint64_t s = 0; s < 50; ++s) {
    const std::size_t n = 2 + s % 17;
    const Graph g = oracle::random_graph(n, 0.5, derive_seed(2, "acc2", s));
    psi_bad += psi_exact(g, opts).count() != psi_exact(complement(g), opts).count();
  }
  report(2, ok && psi_bad == 0, fmt("K_n/empty n<=16 %s, complement |Psi| mismatches=%zu/50", ok ? "exact" : "WRONG", psi_bad));
}

void anticoncentration() {
  const LOInstance ones{std::vector<std::int64_t>(100, 1), 0, 0.5};
  const double expect =
      std::exp(std::lgamma(101.0) - 2 * std::lgamma(51.0) - 100 * std::log(2.0));
  const double rel = std::abs(lo_exact_distribution(ones).max_mass() / expect - 1);
  bool mc_ok = true;
  double worst_z = 0;
  for (auto model : {CoefficientModel::all_ones, CoefficientModel::uniform_1_3, CoefficientModel::uniform_1_10}) {
    const LOInstance inst{make_coefficients(model, 60, 3), 0, 0.5};
    const Pmf pmf = lo_exact_distribution(inst);
    const auto est = lo_point_prob_mc(inst, pmf.argmax(), 40000, 4);
    const double z = std::abs(est.estimate - pmf.at(pmf.argmax())) / est.std_error;
    worst_z = std::max(worst_z, z);
    mc_ok &= z <= 4;
  }
  std::string slopes;
  bool slope_ok = true;
  for (auto model : {CoefficientModel::all_ones, CoefficientModel::uniform_1_3, CoefficientModel::uniform_1_10}) {
    const auto fit = lo_scaling_fit({64, 256, 1024, 4096}, model, 0.5, 20000, 5, workers());
    slope_ok &= fit.fit.slope >= -0.6 && fit.fit.slope <= -0.4;
    slopes += fmt(" %.3f", fit.fit.slope);
  }
  report(3, rel <= 1e-12 && mc_ok && slope_ok,
         fmt("binomial rel.err=%.2e (limit 1e-12), MC worst |z|=%.2f (limit 4), slopes%s in [-0.6,-0.4]", rel,
             worst_z, slopes.c_str()));
}

void construction_soundness() {
  bool pass = true;
  std::string detail;
  for (std::size_t n : {512u, 1024u}) {
    const auto t0 = Clock::now();
    std::size_t ok = 0, verified = 0;
    for (std::uint64_t s = 0; s < 50; ++s) {
      const Graph g = generate({Model::gnp, n, 0.5}, derive_seed(4, "acc4-graph", s));
      ConstructionParams cp;
      cp.retry_max = 10;
      cp.seed = derive_seed(4, "acc4-construct", s);
      cp.workers = workers();
      try {
        const auto r = construct(g, resolve(cp, g).m_min, cp);
        ++ok;
        verified += verify_construction(g, r).ok();
      } catch (const PipelineFailure&) {
      }
    }
    const double t = seconds_since(t0);
    pass &= ok >= 45 && verified == ok && t < 120;
    detail += fmt("n=%zu: %zu/50 succeeded, %zu verified, %.1fs; ", n, ok, verified, t);
  }
  report(4, pass, detail + "limits >=45/50, all verified, <120s per n");
}

void per_k_stats() {
  const Graph g = generate({Model::gnp, 1024, 0.5}, derive_seed(5, "acc5-graph"));
  ConstructionParams cp;
  cp.seed = derive_seed(5, "acc5-construct");
  cp.workers = workers();
  const auto cr = construct(g, resolve(cp, g).m_min, cp);
  ExposureParams ep;
  ep.seed = derive_seed(5, "acc5-exposure");
  ep.trials = 200;
  ep.workers = workers();
  const auto st = per_k_statistics(g, cr, ep);
  const auto& r = st.rates;
  const bool pass = r[0] >= 0.9 && r[1] >= 0.9 && r[3] >= 0.9 && r[2] >= 0.4;
  report(5, pass,
         fmt("200 exposures x %zu rows: rates %.3f %.3f %.3f %.3f (limits .9 .9 .4 .9)", st.rows, r[0], r[1], r[2],
             r[3]));
}

const std::vector<std::string> kToyOverrides{
    "construct.rich_extract=false", "construct.density_factor=20", "construct.kappa1=0.3",
    "construct.kappa2=3",           "construct.kappa3=0",          "construct.kappa4=1000",
    "construct.retry_max=50",       "exposure.kappa_gate=0.5",     "exposure.exposure_retries=100",
    "exposure.kappa_window=1",      "exposure.beta=0.001",         "exposure.M=10",
    "exposure.Q_lin=1",             "exposure.Q_sqrt=0.25"};

struct ToyRun {
  Graph g;
  std::optional<PerMOutcome> outcome;
};

const std::vector<ToyRun>& toy_runs() {
  static const std::vector<ToyRun> runs = [] {
    std::vector<ToyRun> out;
    for (std::uint64_t s = 1; s <= 20; ++s) {
      cli::RunConfig rc;
      rc.seed = s;
      rc.overrides = kToyOverrides;
      const auto settings = cli::make_settings(rc);
      ToyRun run{generate({Model::gnp, 18, 0.5}, derive_seed(s, "graph")), std::nullopt};
      try {
        run.outcome = per_m_run(run.g, resolve(settings.construction, run.g).m_min, settings.construction,
                                settings.exposure);
      } catch (const PipelineFailure&) {
      }
      out.push_back(std::move(run));
    }
    return out;
  }();
  return runs;
}

void toy_inclusion() {
  std::size_t emitted = 0, outside = 0, runs_ok = 0;
  for (const auto& run : toy_runs()) {
    if (!run.outcome) continue;
    ++runs_ok;
    const auto truth = phi_exact(run.g);
    for (auto e : run.outcome->distinct_sizes.sizes) {
      ++emitted;
      outside += !truth.contains(e);
    }
  }
  report(6, outside == 0 && runs_ok > 0,
         fmt("n=18: %zu/20 runs emitted %zu sizes, %zu outside phi_exact", runs_ok, emitted, outside));
}

void growth_fit() {
  const auto t0 = Clock::now();
  const std::string w = std::to_string(workers());
  const auto pm = cli_run({"sweep", "--target", "per-m", "--n-list", "256,512,1024,2048", "--reps", "12", "--seed",
                           "1", "--workers", w});
  const auto th = cli_run({"sweep", "--target", "theorem", "--n-list", "256,512,1024,2048", "--reps", "4", "--seed",
                           "1", "--workers", w});
  const double s1 = parse_slope(pm.out), s2 = parse_slope(th.out);
  const double t = seconds_since(t0);
  report(7, pm.rc == 0 && th.rc == 0 && s1 >= 1.3 && s2 >= 1.7 && t < 1800,
         fmt("per-m slope=%.3f (limit 1.3, 12 graphs per n), theorem slope=%.3f (limit 1.7, 4 graphs per n), %.0fs",
             s1, s2, t));
}

void separation() {
  std::vector<std::pair<Graph, PerMOutcome>> separation_pool;
  for (const auto& run : toy_runs())
    if (run.outcome) separation_pool.emplace_back(run.g, *run.outcome);
  for (std::size_t n : {256u, 512u, 1024u})
    for (std::uint64_t s = 0; s < 5; ++s) {
      const Graph g = generate({Model::gnp, n, 0.5}, derive_seed(8, "acc8-graph", s * 10000 + n));
      ConstructionParams cp;
      cp.seed = derive_seed(8, "acc8-construct", s);
      cp.workers = workers();
      ExposureParams ep;
      ep.seed = derive_seed(8, "acc8-exposure", s);
      ep.workers = workers();
      try {
        separation_pool.emplace_back(g, per_m_run(g, resolve(cp, g).m_min, cp, ep));
      } catch (const PipelineFailure&) {
      }
    }
  std::size_t spaced = 0, narrow = 0, clean = 0, reproduce = 0;
  for (const auto& [g, o] : separation_pool) {
    const auto sc = verify_separation(g, o);
    spaced += !sc.anchors_spaced;
    narrow += !sc.clusters_narrow;
    clean += !sc.no_collisions;
    reproduce += !sc.sizes_reproduce || !sc.window_contained;
  }
  report(8, !separation_pool.empty() && spaced + narrow + clean + reproduce == 0,
         fmt("%zu outputs (toy + gnp 256..1024): spacing violations=%zu, wide clusters=%zu, collisions=%zu, "
             "unreproduced=%zu",
             separation_pool.size(), spaced, narrow, clean, reproduce));
}

void determinism() {
  const std::vector<std::vector<std::string>> cases{
      {"generate", "--n", "64"},
      {"phi", "--n", "20"},
      {"psi", "--n", "14"},
      {"audit", "--n", "256"},
      {"lo", "--n-list", "64,256,1024,4096", "--coefficients", "uniform10"},
      {"construct", "--n", "512"},
      {"per-m", "--n", "512"},
      {"theorem", "--n", "512"},
      {"sweep", "--n-list", "256,384,512"},
      {"sweep", "--target", "theorem", "--n-list", "256,384,512"},
  };
  std::string bad;
  for (const auto& base : cases) {
    auto a = base, b = base;
    a.insert(a.end(), {"--seed", "9", "--workers", "1"});
    b.insert(b.end(), {"--seed", "9", "--workers", std::to_string(std::max<std::size_t>(2, workers()))});
    const auto ra = cli_run(a), ra2 = cli_run(a), rb = cli_run(b);
    const bool same = ra.rc == rb.rc && ra.out == ra2.out && body(ra.out) == body(rb.out) && !body(ra.out).empty();
    if (!same) bad += " " + base[0];
  }
  report(9, bad.empty(),
         fmt("%zu subcommand runs, repeat and worker-count comparisons%s", cases.size(),
             bad.empty() ? " identical" : (": differs in" + bad).c_str()));
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<void (*)()> criteria{oracle_equivalence, closed_forms, anticoncentration,
                                         construction_soundness, per_k_stats, toy_inclusion,
                                         growth_fit, separation, determinism};
  std::vector<std::size_t> selected;
  for (int i = 1; i < argc; ++i) {
    const auto id = static_cast<std::size_t>(std::atoi(argv[i]));
    if (id < 1 || id > criteria.size()) {
      std::fprintf(stderr, "usage: %s [criterion 1-%zu]...\n", argv[0], criteria.size());
      return 2;
    }
    selected.push_back(id);
  }
  if (selected.empty())
    for (std::size_t id = 1; id <= criteria.size(); ++id) selected.push_back(id);
  for (auto id : selected) criteria[id - 1]();
  return failures == 0 ? 0 : 1;
}
