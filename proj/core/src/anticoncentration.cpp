#include "spectra/anticoncentration.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <unordered_map>

#include "spectra/errors.hpp"
#include "spectra/parallel.hpp"
#include "spectra/random.hpp"

namespace spectra {

void LOInstance::validate() const {
  if (!(p > 0.0 && p < 1.0)) throw ContractError("Littlewood-Offord instance needs 0 < p < 1");
  for (auto a : coefficients)
    if (a == 0) throw ContractError("Littlewood-Offord coefficients must be nonzero");
}

double Pmf::at(std::int64_t x) const {
  if (x < min_value || x > max_value()) return 0.0;
  return mass[static_cast<std::size_t>(x - min_value)];
}

double Pmf::max_mass() const { return mass.empty() ? 0.0 : *std::max_element(mass.begin(), mass.end()); }

std::int64_t Pmf::argmax() const {
  return min_value + static_cast<std::int64_t>(std::max_element(mass.begin(), mass.end()) - mass.begin());
}

double Pmf::total() const {
  double sum = 0, comp = 0;  // Neumaier
  for (double m : mass) {
    const double t = sum + m;
    comp += std::abs(sum) >= std::abs(m) ? (sum - t) + m : (m - t) + sum;
    sum = t;
  }
  return sum + comp;
}

Pmf lo_exact_distribution(const LOInstance& inst, std::int64_t range_cap) {
  inst.validate();
  std::int64_t neg = 0, pos = 0;
  for (auto a : inst.coefficients) (a < 0 ? neg : pos) += std::abs(a);
  if (neg + pos > range_cap)
    throw CapacityError("value range " + std::to_string(neg + pos) + " exceeds DP cap " + std::to_string(range_cap));

  // DP over partial sums, indexed from the most negative reachable value.
  const auto width = static_cast<std::size_t>(neg + pos + 1);
  std::vector<double> cur(width, 0.0), next(width, 0.0);
  const auto origin = static_cast<std::size_t>(neg);
  cur[origin] = 1.0;
  std::size_t lo = origin, hi = origin;  // current nonzero span
  const double p = inst.p, q = 1.0 - inst.p;
  for (auto a : inst.coefficients) {
    const std::size_t nlo = a < 0 ? lo - static_cast<std::size_t>(-a) : lo;
    const std::size_t nhi = a > 0 ? hi + static_cast<std::size_t>(a) : hi;
    std::fill(next.begin() + static_cast<std::ptrdiff_t>(nlo), next.begin() + static_cast<std::ptrdiff_t>(nhi) + 1,
              0.0);
    for (std::size_t j = lo; j <= hi; ++j) {
      const double m = cur[j];
      if (m == 0.0) continue;
      next[j] += q * m;
      next[static_cast<std::size_t>(static_cast<std::int64_t>(j) + a)] += p * m;
    }
    std::swap(cur, next);
    lo = nlo;
    hi = nhi;
  }
  Pmf pmf;
  pmf.min_value = inst.offset - neg;
  pmf.mass = std::move(cur);
  return pmf;
}

namespace {

constexpr std::uint64_t kChunks = 64;

std::int64_t sample(const LOInstance& inst, Rng& rng) {
  std::int64_t x = inst.offset;
  for (auto a : inst.coefficients)
    if (rng.bernoulli(inst.p)) x += a;
  return x;
}

std::uint64_t chunk_trials(std::uint64_t trials, std::uint64_t c) {
  return trials / kChunks + (c < trials % kChunks ? 1 : 0);
}

void check_trials(std::uint64_t trials) {
  if (trials < 1000) throw ContractError("Monte-Carlo estimate needs at least 1000 trials");
}

PointEstimate make_estimate(std::uint64_t hits, std::uint64_t trials) {
  PointEstimate est;
  est.hits = hits;
  est.trials = trials;
  est.estimate = static_cast<double>(hits) / static_cast<double>(trials);
  est.std_error = std::sqrt(est.estimate * (1 - est.estimate) / static_cast<double>(trials));
  return est;
}

}  // namespace

PointEstimate lo_point_prob_mc(const LOInstance& inst, std::int64_t x, std::uint64_t trials, std::uint64_t seed,
                               std::size_t workers) {
  inst.validate();
  check_trials(trials);
  std::vector<std::uint64_t> hits(kChunks, 0);
  parallel_for(kChunks, workers, [&](std::size_t c) {
    Rng rng(derive_seed(seed, "lo-mc", c));
    const auto t = chunk_trials(trials, c);
    for (std::uint64_t i = 0; i < t; ++i)
      if (sample(inst, rng) == x) ++hits[c];
  });
  std::uint64_t total = 0;
  for (auto h : hits) total += h;
  return make_estimate(total, trials);
}

PointEstimate lo_max_prob_mc(const LOInstance& inst, std::uint64_t trials, std::uint64_t seed, std::size_t workers) {
  inst.validate();
  check_trials(trials);
  std::vector<std::unordered_map<std::int64_t, std::uint64_t>> hist(kChunks);
  parallel_for(kChunks, workers, [&](std::size_t c) {
    Rng rng(derive_seed(seed, "lo-mc-max", c));
    const auto t = chunk_trials(trials, c);
    for (std::uint64_t i = 0; i < t; ++i) ++hist[c][sample(inst, rng)];
  });
  std::unordered_map<std::int64_t, std::uint64_t> merged;
  for (const auto& h : hist)
    for (auto [x, k] : h) merged[x] += k;
  std::uint64_t best = 0;
  for (auto [x, k] : merged) best = std::max(best, k);
  return make_estimate(best, trials);
}

CoefficientModel parse_coefficient_model(std::string_view name) {
  if (name == "ones" || name == "all-ones") return CoefficientModel::all_ones;
  if (name == "uniform3" || name == "uniform-1-3") return CoefficientModel::uniform_1_3;
  if (name == "uniform10" || name == "uniform-1-10") return CoefficientModel::uniform_1_10;
  throw ContractError("unknown coefficient model '" + std::string(name) + "' (ones|uniform3|uniform10)");
}

std::string_view coefficient_model_name(CoefficientModel m) {
  switch (m) {
    case CoefficientModel::all_ones: return "ones";
    case CoefficientModel::uniform_1_3: return "uniform3";
    case CoefficientModel::uniform_1_10: return "uniform10";
  }
  return "?";
}

std::vector<std::int64_t> make_coefficients(CoefficientModel model, std::size_t n, std::uint64_t seed) {
  std::vector<std::int64_t> a(n, 1);
  if (model == CoefficientModel::all_ones) return a;
  const std::int64_t top = model == CoefficientModel::uniform_1_3 ? 3 : 10;
  Rng rng(derive_seed(seed, "lo-coefficients", n));
  for (auto& x : a) x = rng.uniform_int(1, top);
  return a;
}

ScalingFit lo_scaling_fit(const std::vector<std::size_t>& n_values, CoefficientModel model, double p,
                          std::uint64_t trials, std::uint64_t seed, std::size_t workers, std::int64_t range_cap) {
  const std::set<std::size_t> distinct(n_values.begin(), n_values.end());
  if (n_values.size() < 4 || distinct.size() != n_values.size())
    throw ContractError("scaling fit needs at least 4 distinct values of n");
  const auto [mn, mx] = std::minmax_element(n_values.begin(), n_values.end());
  if (*mx < 4 * *mn) throw ContractError("scaling fit needs n values spanning at least two octaves");

  ScalingFit out;
  std::vector<std::pair<double, double>> pts;
  for (auto n : n_values) {
    LOInstance inst{make_coefficients(model, n, seed), 0, p};
    ScalingPoint pt{n, 0, true};
    std::int64_t range = 0;
    for (auto a : inst.coefficients) range += std::abs(a);
    if (range <= range_cap) {
      pt.max_prob = lo_exact_distribution(inst, range_cap).max_mass();
    } else {
      pt.exact = false;
      pt.max_prob = lo_max_prob_mc(inst, trials, derive_seed(seed, "lo-scaling", n), workers).estimate;
    }
    out.points.push_back(pt);
    pts.emplace_back(static_cast<double>(n), pt.max_prob);
  }
  out.fit = fit_loglog_slope(pts);
  return out;
}

}  // namespace spectra
