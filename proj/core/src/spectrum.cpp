#include "spectra/spectrum.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "spectra/errors.hpp"
#include "spectra/parallel.hpp"

namespace spectra {

bool SizeSpectrum::contains(std::int64_t e) const { return std::binary_search(sizes.begin(), sizes.end(), e); }

SizeSpectrum SizeSpectrum::window(std::int64_t lo, std::int64_t hi) const {
  SizeSpectrum out{n, {}};
  for (auto e : sizes)
    if (e >= lo && e <= hi) out.sizes.push_back(e);
  return out;
}

namespace {

constexpr std::size_t kMaskBits = 63;

void check_enumeration_cap(const Graph& g, std::size_t max_n) {
  const std::size_t n = g.order();
  if (n > max_n || n > kMaskBits)
    throw CapacityError("exhaustive enumeration capped at n=" + std::to_string(std::min(max_n, kMaskBits)) +
                        ", got n=" + std::to_string(n) + " (would visit 2^" + std::to_string(n) + " subsets)");
}

std::vector<std::uint64_t> row_masks(const Graph& g) {
  std::vector<std::uint64_t> rows(g.order());
  for (Vertex v = 0; v < g.order(); ++v) rows[v] = g.row(v).empty() ? 0 : g.row(v)[0];
  return rows;
}

std::int64_t edges_in(const std::vector<std::uint64_t>& rows, std::uint64_t set) {
  std::int64_t twice = 0;
  for (std::uint64_t s = set; s; s &= s - 1) {
    const auto v = static_cast<std::size_t>(std::countr_zero(s));
    twice += std::popcount(rows[v] & set);
  }
  return twice / 2;
}

std::size_t prefix_bits_for(const EnumerationOptions& opts, std::size_t n) {
  std::size_t t = opts.prefix_bits;
  if (t == 0 && opts.workers > 1) t = static_cast<std::size_t>(std::bit_width(opts.workers - 1));
  return std::min(t, n);
}

// Walks every subset whose top `t` bits equal `prefix`, calling visit(set_size, edges).
template <typename Visit>
std::uint64_t gray_walk(const std::vector<std::uint64_t>& rows, std::size_t n, std::size_t t, std::uint64_t prefix,
                        Visit&& visit) {
  const std::size_t low = n - t;
  std::uint64_t cur = prefix << low;
  std::int64_t edges = edges_in(rows, cur);
  std::size_t size = static_cast<std::size_t>(std::popcount(cur));
  visit(size, edges);
  const std::uint64_t steps = std::uint64_t{1} << low;
  for (std::uint64_t j = 1; j < steps; ++j) {
    const auto v = static_cast<std::size_t>(std::countr_zero(j));
    const std::uint64_t bit = std::uint64_t{1} << v;
    if (cur & bit) {
      cur ^= bit;
      edges -= std::popcount(rows[v] & cur);
      --size;
    } else {
      edges += std::popcount(rows[v] & cur);
      cur ^= bit;
      ++size;
    }
    visit(size, edges);
  }
  return steps;
}

std::int64_t max_edges(std::size_t n) { return static_cast<std::int64_t>(n * (n - (n > 0 ? 1 : 0)) / 2); }

}  // namespace

PhiRun phi_enumerate(const Graph& g, const EnumerationOptions& opts) {
  check_enumeration_cap(g, opts.max_n);
  const std::size_t n = g.order();
  const auto rows = row_masks(g);
  const std::size_t t = prefix_bits_for(opts, n);
  const std::size_t jobs = std::size_t{1} << t;
  const std::size_t slots = static_cast<std::size_t>(max_edges(n)) + 1;

  std::vector<std::vector<bool>> seen(jobs, std::vector<bool>(slots, false));
  std::vector<std::uint64_t> visited(jobs, 0);
  parallel_for(jobs, opts.workers, [&](std::size_t job) {
    auto& acc = seen[job];
    visited[job] = gray_walk(rows, n, t, job, [&](std::size_t, std::int64_t e) { acc[static_cast<std::size_t>(e)] = true; });
  });

  PhiRun run;
  run.spectrum.n = n;
  for (std::size_t e = 0; e < slots; ++e) {
    bool any = false;
    for (const auto& acc : seen) any = any || acc[e];
    if (any) run.spectrum.sizes.push_back(static_cast<std::int64_t>(e));
  }
  for (auto v : visited) run.subsets_visited += v;
  return run;
}

SizeSpectrum phi_exact(const Graph& g, const EnumerationOptions& opts) { return phi_enumerate(g, opts).spectrum; }

SizeSpectrum phi_naive(const Graph& g, std::size_t max_n) {
  check_enumeration_cap(g, max_n);
  const std::size_t n = g.order();
  std::vector<bool> seen(static_cast<std::size_t>(max_edges(n)) + 1, false);
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t set = 0; set < total; ++set) {
    std::int64_t e = 0;
    for (Vertex u = 0; u < n; ++u) {
      if (!((set >> u) & 1U)) continue;
      for (Vertex v = u + 1; v < n; ++v)
        if (((set >> v) & 1U) && g.has_edge(u, v)) ++e;
    }
    seen[static_cast<std::size_t>(e)] = true;
  }
  SizeSpectrum out{n, {}};
  for (std::size_t e = 0; e < seen.size(); ++e)
    if (seen[e]) out.sizes.push_back(static_cast<std::int64_t>(e));
  return out;
}

OrderSizeSpectrum psi_exact(const Graph& g, const EnumerationOptions& opts) {
  check_enumeration_cap(g, opts.max_n);
  const std::size_t n = g.order();
  const auto rows = row_masks(g);
  const std::size_t t = prefix_bits_for(opts, n);
  const std::size_t jobs = std::size_t{1} << t;
  const std::size_t stride = static_cast<std::size_t>(max_edges(n)) + 1;

  std::vector<std::vector<bool>> seen(jobs, std::vector<bool>((n + 1) * stride, false));
  parallel_for(jobs, opts.workers, [&](std::size_t job) {
    auto& acc = seen[job];
    gray_walk(rows, n, t, job,
              [&](std::size_t size, std::int64_t e) { acc[size * stride + static_cast<std::size_t>(e)] = true; });
  });

  OrderSizeSpectrum out;
  out.n = n;
  for (std::size_t v = 0; v <= n; ++v)
    for (std::size_t e = 0; e < stride; ++e) {
      bool any = false;
      for (const auto& acc : seen) any = any || acc[v * stride + e];
      if (any) out.pairs.emplace_back(v, static_cast<std::int64_t>(e));
    }
  return out;
}

SizeSpectrum phi_window(const Graph& g, std::int64_t lo, std::int64_t hi, const EnumerationOptions& opts) {
  if (lo > hi) throw ContractError("phi_window: lo > hi");
  return phi_exact(g, opts).window(lo, hi);
}

}  // namespace spectra
