#include <algorithm>
#include <cmath>
#include <string>

#include "spectra/errors.hpp"
#include "spectra/graph.hpp"

namespace spectra {
namespace {

// Tomita-style maximum clique: candidates are greedily coloured and a branch
// is cut when |current| + colours cannot beat the incumbent.
class CliqueSearch {
 public:
  explicit CliqueSearch(const Graph& g) : g_(g) {}

  std::size_t run() {
    VertexSet all = VertexSet::full(g_.order());
    expand(0, all);
    return best_;
  }

 private:
  void expand(std::size_t depth, VertexSet candidates) {
    std::vector<Vertex> order;
    std::vector<std::size_t> bound;
    colour_sort(candidates, order, bound);
    for (std::size_t idx = order.size(); idx-- > 0;) {
      if (depth + bound[idx] <= best_) return;
      const Vertex v = order[idx];
      VertexSet next = candidates;
      auto nw = next.words();
      const auto row = g_.row(v);
      for (std::size_t w = 0; w < nw.size(); ++w) nw[w] &= row[w];
      if (next.empty()) {
        best_ = std::max(best_, depth + 1);
      } else {
        expand(depth + 1, std::move(next));
      }
      candidates.erase(v);
    }
  }

  void colour_sort(const VertexSet& candidates, std::vector<Vertex>& order, std::vector<std::size_t>& bound) const {
    VertexSet uncoloured = candidates;
    std::size_t colour = 0;
    while (!uncoloured.empty()) {
      ++colour;
      VertexSet q = uncoloured;
      while (!q.empty()) {
        const Vertex v = q.first();
        uncoloured.erase(v);
        q.erase(v);
        auto qw = q.words();
        const auto row = g_.row(v);
        for (std::size_t w = 0; w < qw.size(); ++w) qw[w] &= ~row[w];
        order.push_back(v);
        bound.push_back(colour);
      }
    }
  }

  const Graph& g_;
  std::size_t best_ = 0;
};

void check_cap(const Graph& g, std::size_t cap) {
  if (g.order() > cap)
    throw CapacityError("exact clique/independence computation capped at n=" + std::to_string(cap) + ", got n=" +
                        std::to_string(g.order()));
}

}  // namespace

std::size_t clique_number(const Graph& g, std::size_t cap) {
  check_cap(g, cap);
  if (g.order() == 0) return 0;
  return CliqueSearch(g).run();
}

Homogeneous homogeneous_number(const Graph& g, std::size_t cap) {
  check_cap(g, cap);
  return {clique_number(g, cap), clique_number(complement(g), cap)};
}

bool is_c_ramsey(const Graph& g, double c, std::size_t cap) {
  const auto h = homogeneous_number(g, cap);
  const double limit = c * std::log2(static_cast<double>(g.order()));
  return static_cast<double>(std::max(h.clique, h.independence)) < limit;
}

}  // namespace spectra
