#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "spectra/graph.hpp"

namespace spectra {

// Distinct induced-subgraph edge counts, strictly increasing.
struct SizeSpectrum {
  std::size_t n = 0;
  std::vector<std::int64_t> sizes;

  std::size_t count() const noexcept { return sizes.size(); }
  bool contains(std::int64_t e) const;
  SizeSpectrum window(std::int64_t lo, std::int64_t hi) const;
  friend bool operator==(const SizeSpectrum&, const SizeSpectrum&) = default;
};

// Distinct (order, size) pairs, lexicographically sorted.
struct OrderSizeSpectrum {
  std::size_t n = 0;
  std::vector<std::pair<std::size_t, std::int64_t>> pairs;

  std::size_t count() const noexcept { return pairs.size(); }
  friend bool operator==(const OrderSizeSpectrum&, const OrderSizeSpectrum&) = default;
};

struct EnumerationOptions {
  std::size_t max_n = 30;
  std::size_t workers = 1;
  // Number of top vertices whose membership is fixed per independent
  // sub-walk (2^prefix_bits jobs). Zero picks ceil(log2(workers)).
  std::size_t prefix_bits = 0;
};

struct PhiRun {
  SizeSpectrum spectrum;
  std::uint64_t subsets_visited = 0;
};

// Gray-code walk over all 2^n subsets; each step toggles one vertex and adjusts
// the running edge count by |N(v) ∩ current|.
PhiRun phi_enumerate(const Graph& g, const EnumerationOptions& opts = {});
SizeSpectrum phi_exact(const Graph& g, const EnumerationOptions& opts = {});

// Independent reference: recounts every subset from scratch.
SizeSpectrum phi_naive(const Graph& g, std::size_t max_n = 20);

OrderSizeSpectrum psi_exact(const Graph& g, const EnumerationOptions& opts = {});

SizeSpectrum phi_window(const Graph& g, std::int64_t lo, std::int64_t hi, const EnumerationOptions& opts = {});

}  // namespace spectra
