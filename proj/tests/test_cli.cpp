#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "spectra/cli/cli.hpp"
#include "spectra/errors.hpp"

namespace fs = std::filesystem;
using spectra::cli::main_entry;

namespace {

struct Result {
  int rc = 0;
  std::string out, err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "spectra");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Result r;
  r.rc = main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string body(const std::string& text) {
  std::istringstream in(text);
  std::string line, out;
  while (std::getline(in, line))
    if (line.rfind("# ", 0) != 0) out += line + "\n";
  return out;
}

fs::path temp_path(const std::string& name) { return fs::temp_directory_path() / ("spectra-test-" + name); }

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  return {std::istreambuf_iterator<char>(f), {}};
}

}  // namespace

TEST(Cli, PhiOnCompleteGraph) {
  const auto r = invoke({"phi", "--model", "complete", "--n", "4"});
  ASSERT_EQ(r.rc, 0) << r.err;
  EXPECT_EQ(body(r.out), "0,1,3,6\n|Phi|=4 max=6\n");
  EXPECT_NE(r.out.find("# spectra "), std::string::npos);
  EXPECT_NE(r.out.find("# seed: 0"), std::string::npos);
}

TEST(Cli, PhiWindowAndGraphFile) {
  const auto file = temp_path("c5.txt");
  {
    std::ofstream f(file);
    f << "n 5\n0 1\n1 2\n2 3\n3 4\n4 0\n";
  }
  const auto r = invoke({"phi", "--graph", file.string(), "--lo", "2", "--hi", "5"});
  ASSERT_EQ(r.rc, 0) << r.err;
  EXPECT_EQ(body(r.out), "2,3,5\n|Phi|=3 max=5\n");
  fs::remove(file);
}

TEST(Cli, UsageAndContractErrorsExitOne) {
  EXPECT_EQ(invoke({"phi", "--bogus"}).rc, 1);
  EXPECT_EQ(invoke({}).rc, 1);
  const auto r = invoke({"phi", "--model", "complete", "--n", "4", "--set", "no.such=1"});
  EXPECT_EQ(r.rc, 1);
  EXPECT_NE(r.err.find("unknown override key"), std::string::npos);
  EXPECT_EQ(invoke({"phi", "--model", "paley", "--n", "9"}).rc, 1);
  EXPECT_EQ(invoke({"lo", "--coefficients", "twos", "--n-list", "10,20,40"}).rc, 1);
}

TEST(Cli, CapacityExitsTwo) { EXPECT_EQ(invoke({"phi", "--model", "gnp", "--n", "40"}).rc, 2); }

TEST(Cli, PipelineFailureExitsThreeWithDiagnostics) {
  const auto diag = temp_path("diag.json");
  fs::remove(diag);
  const auto r = invoke({"construct", "--n", "256", "--set", "construct.kappa1=1e-9", "--set",
                         "construct.retry_max=3", "--diagnostics", diag.string()});
  EXPECT_EQ(r.rc, 3);
  ASSERT_TRUE(fs::exists(diag));
  const auto j = nlohmann::json::parse(slurp(diag));
  EXPECT_EQ(j.at("stage"), "sample_U0");
  EXPECT_TRUE(j.at("diagnostics").contains("event_failures"));
  fs::remove(diag);
}

TEST(Cli, OutputFileAndDump) {
  const auto out = temp_path("perm.csv"), dump = temp_path("perm.json");
  const auto r = invoke({"per-m", "--n", "256", "--seed", "3", "-o", out.string(), "--dump", dump.string()});
  ASSERT_EQ(r.rc, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  const auto text = body(slurp(out));
  EXPECT_EQ(text.rfind("m,e_U,distinct_count,k_selected,p_selected,attempts\n", 0), 0u);
  const auto j = nlohmann::json::parse(slurp(dump));
  EXPECT_TRUE(j.contains("distinct_sizes"));
  fs::remove(out);
  fs::remove(dump);
}

TEST(Cli, OutputIndependentOfWorkers) {
  const std::vector<std::vector<std::string>> cases{
      {"generate", "--n", "30"},
      {"phi", "--n", "14"},
      {"psi", "--n", "12"},
      {"audit", "--n", "128"},
      {"lo", "--n-list", "64,256,1024,4096", "--coefficients", "uniform3"},
      {"construct", "--n", "256"},
      {"per-m", "--n", "256"},
      {"theorem", "--n", "256", "--set", "theorem.max_windows=3"},
      {"sweep", "--n-list", "256,320,384"},
  };
  for (const auto& base : cases) {
    auto a = base, b = base;
    a.insert(a.end(), {"--seed", "11", "--workers", "1"});
    b.insert(b.end(), {"--seed", "11", "--workers", "3"});
    const auto ra = invoke(a), rb = invoke(b);
    EXPECT_EQ(ra.rc, rb.rc) << base[0];
    EXPECT_FALSE(body(ra.out).empty()) << base[0];
    EXPECT_EQ(body(ra.out), body(rb.out)) << base[0];
    EXPECT_EQ(ra.out, invoke(a).out) << base[0];
  }
}

TEST(Cli, SweepReportsSlope) {
  const auto r = invoke({"sweep", "--n-list", "256,320,384", "--seed", "2"});
  ASSERT_EQ(r.rc, 0) << r.err;
  const auto text = body(r.out);
  EXPECT_NE(text.find("slope="), std::string::npos);
  std::istringstream in(text);
  std::string line;
  std::size_t rows = 0;
  while (std::getline(in, line))
    if (!line.empty() && std::isdigit(static_cast<unsigned char>(line[0]))) ++rows;
  EXPECT_EQ(rows, 3u);
}

TEST(Cli, OverrideKeysAreListed) {
  const auto keys = spectra::cli::override_keys();
  EXPECT_NE(std::find(keys.begin(), keys.end(), "construct.kappa1"), keys.end());
  EXPECT_NE(std::find(keys.begin(), keys.end(), "exposure.Q_sqrt"), keys.end());
  spectra::cli::RunConfig c;
  c.overrides = {"exposure.Q_sqrt=0.2", "audit.delta=0.3"};
  const auto s = spectra::cli::make_settings(c);
  EXPECT_DOUBLE_EQ(s.exposure.Q_sqrt, 0.2);
  EXPECT_DOUBLE_EQ(s.audit.delta, 0.3);
  c.overrides = {"exposure.Q_sqrt=abc"};
  EXPECT_THROW(spectra::cli::make_settings(c), spectra::ContractError);
}
