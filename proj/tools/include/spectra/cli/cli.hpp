#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "spectra/anticoncentration.hpp"
#include "spectra/audit.hpp"
#include "spectra/construct.hpp"
#include "spectra/exposure.hpp"
#include "spectra/spectrum.hpp"

namespace spectra::cli {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

enum Exit : int { ok = 0, contract = 1, capacity = 2, pipeline = 3 };

struct RunConfig {
  std::string subcommand;
  // Graph source: a file, or a generator spec.
  std::string graph_file;
  std::string model = "gnp";
  std::size_t n = 0;
  double p = 0.5;
  std::vector<std::string> overrides;  // key=value
  std::uint64_t seed = 0;
  std::size_t workers = 1;
  std::string output;       // empty = stdout
  std::string dump;         // per-m / theorem JSON dump
  std::string diagnostics;  // pipeline-failure report; empty = <output>.diagnostics.json
  // Subcommand options.
  std::optional<std::int64_t> m;
  std::optional<std::int64_t> lo, hi;  // phi window
  std::vector<std::size_t> n_list;     // lo, sweep
  std::string coefficients = "ones";
  std::uint64_t trials = 20000;
  std::string target = "per-m";  // sweep
  std::size_t reps = 1;          // sweep
};

// Pipeline constants after applying overrides. Seeds and worker counts are
// filled from the RunConfig, never from overrides.
struct Settings {
  ConstructionParams construction;
  ExposureParams exposure;
  AuditParams audit;
  TheoremParams theorem;
  EnumerationOptions enumeration;
  std::int64_t lo_range_cap = kDefaultRangeCap;
};

// Applies `key=value` overrides. Unknown keys and unparsable values throw
// ContractError.
Settings make_settings(const RunConfig& config);
std::vector<std::string> override_keys();
nlohmann::ordered_json settings_json(const Settings& s);

// Effective configuration as echoed into output headers.
nlohmann::ordered_json effective_config(const RunConfig& config, const Settings& s);

// Executes one subcommand, writing artifacts to config.output (or `out`).
// Errors map to exit codes; messages go to `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

// Parses argv into a RunConfig and runs it. Usage errors exit 1.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace spectra::cli
