#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "spectra/fit.hpp"

namespace spectra {

// X = a_1 ξ_1 + ... + a_n ξ_n + offset, ξ_i iid Bernoulli(p), every a_i ≠ 0.
struct LOInstance {
  std::vector<std::int64_t> coefficients;
  std::int64_t offset = 0;
  double p = 0.5;

  void validate() const;
};

// Point masses over the contiguous support [min_value, min_value + mass.size()).
struct Pmf {
  std::int64_t min_value = 0;
  std::vector<double> mass;

  std::int64_t max_value() const { return min_value + static_cast<std::int64_t>(mass.size()) - 1; }
  double at(std::int64_t x) const;
  double max_mass() const;
  std::int64_t argmax() const;  // smallest x attaining max_mass
  double total() const;         // compensated sum
};

inline constexpr std::int64_t kDefaultRangeCap = 1'000'000;

Pmf lo_exact_distribution(const LOInstance& inst, std::int64_t range_cap = kDefaultRangeCap);

struct PointEstimate {
  double estimate = 0;
  double std_error = 0;
  std::uint64_t hits = 0;
  std::uint64_t trials = 0;
};

// Trials are split into fixed chunks, each with its own derived RNG stream,
// so the estimate depends on (seed, trials) only, never on `workers`.
PointEstimate lo_point_prob_mc(const LOInstance& inst, std::int64_t x, std::uint64_t trials, std::uint64_t seed,
                               std::size_t workers = 1);

// Monte-Carlo estimate of max_x Pr(X = x) via an empirical histogram.
PointEstimate lo_max_prob_mc(const LOInstance& inst, std::uint64_t trials, std::uint64_t seed,
                             std::size_t workers = 1);

enum class CoefficientModel { all_ones, uniform_1_3, uniform_1_10 };
CoefficientModel parse_coefficient_model(std::string_view name);
std::string_view coefficient_model_name(CoefficientModel m);
std::vector<std::int64_t> make_coefficients(CoefficientModel model, std::size_t n, std::uint64_t seed);

struct ScalingPoint {
  std::size_t n = 0;
  double max_prob = 0;
  bool exact = true;
};

struct ScalingFit {
  std::vector<ScalingPoint> points;
  SlopeFit fit;
};

// Max point probability for each n (exact where the DP range fits, MC
// otherwise) and the log-log slope against n.
ScalingFit lo_scaling_fit(const std::vector<std::size_t>& n_values, CoefficientModel model, double p,
                          std::uint64_t trials, std::uint64_t seed, std::size_t workers = 1,
                          std::int64_t range_cap = kDefaultRangeCap);

}  // namespace spectra
