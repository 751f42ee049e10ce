#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "spectra/bitset.hpp"

namespace spectra {

using Vertex = std::size_t;
using Edge = std::pair<Vertex, Vertex>;

// Simple undirected graph stored as one packed bit row per vertex.
// Immutable once built; every counting kernel is a popcount over rows.
class Graph {
 public:
  Graph() = default;
  explicit Graph(std::size_t n);  // empty graph on n vertices

  // Duplicate edges are idempotent. Throws ContractError on self-loops or
  // out-of-range endpoints.
  static Graph from_edges(std::size_t n, std::span<const Edge> edges);

  std::size_t order() const noexcept { return n_; }
  std::size_t words_per_row() const noexcept { return stride_; }
  std::span<const Word> row(Vertex v) const { return {bits_.data() + v * stride_, stride_}; }

  bool has_edge(Vertex u, Vertex v) const { return (row(u)[v / kWordBits] >> (v % kWordBits)) & 1U; }
  std::size_t degree(Vertex v) const { return degrees_[v]; }
  std::int64_t edge_count() const noexcept { return edge_count_; }

  // Edges with u < v in lexicographic order.
  std::vector<Edge> edges() const;
  VertexSet neighbourhood(Vertex v) const;

  friend bool operator==(const Graph& a, const Graph& b) { return a.n_ == b.n_ && a.bits_ == b.bits_; }

 private:
  friend class GraphBuilder;
  void finalize();

  std::size_t n_ = 0;
  std::size_t stride_ = 0;
  std::vector<Word> bits_;
  std::vector<std::size_t> degrees_;
  std::int64_t edge_count_ = 0;
};

class GraphBuilder {
 public:
  explicit GraphBuilder(std::size_t n);
  GraphBuilder& add_edge(Vertex u, Vertex v);
  Graph build() &&;

 private:
  Graph g_;
};

// A single vertex or an unordered pair of distinct vertices. The neighbourhood
// of a pair is the multiset union of its endpoints' neighbourhoods.
struct Unit {
  static constexpr Vertex kNone = static_cast<Vertex>(-1);
  Vertex first = kNone;
  Vertex second = kNone;

  static Unit single(Vertex v) { return Unit{v, kNone}; }
  static Unit pair(Vertex a, Vertex b);

  bool is_pair() const noexcept { return second != kNone; }
  std::size_t arity() const noexcept { return is_pair() ? 2 : 1; }
  template <typename Fn>
  void for_each_vertex(Fn&& fn) const {
    fn(first);
    if (is_pair()) fn(second);
  }
  friend auto operator<=>(const Unit&, const Unit&) = default;
};

std::string to_string(const Unit& u);

// ---- text format ---------------------------------------------------------

// "n <N>" then one "u v" per line. Blank lines and lines starting with '#'
// are skipped.
Graph load_graph(std::string_view text);
// Canonical form: "n <N>\n" followed by sorted "u v\n" lines, u < v.
std::string write_graph(const Graph& g);

// ---- generators ----------------------------------------------------------

enum class Model { gnp, paley, complete, empty };

struct GeneratorSpec {
  Model model = Model::gnp;
  std::size_t n = 0;  // vertex count; for paley, the prime q
  double p = 0.5;     // gnp only
};

Model parse_model(std::string_view name);
std::string_view model_name(Model m);
bool is_prime(std::size_t q);
Graph generate(const GeneratorSpec& spec, std::uint64_t seed);

// ---- operations ----------------------------------------------------------

Graph complement(const Graph& g);

// Graph induced on `keep`, relabelled 0..|keep|-1 in increasing order.
struct InducedSubgraph {
  Graph graph;
  std::vector<Vertex> original;  // new index -> old index
};
InducedSubgraph induced_subgraph(const Graph& g, const VertexSet& keep);

// e(A), or e(A,B) when B is given. A and B must be disjoint.
std::int64_t count_edges(const Graph& g, const VertexSet& a, const VertexSet* b = nullptr);
double density(const Graph& g, const VertexSet& a);
double density(const Graph& g, const VertexSet& a, const VertexSet& b);

VertexSet unit_vertices(std::size_t n, std::span<const Unit> units);

// d_U(x), counting multiplicity for pairs.
std::size_t unit_degree(const Graph& g, const Unit& x, const VertexSet& u);

enum class SymdiffCount {
  summed_gap,          // sum over v of |mult_x(v) - mult_y(v)|
  differing_elements,  // number of v whose multiplicities differ
};

// |N_U(x) △ N_U(y)| for multiset neighbourhoods. When `complement_y` is set,
// y's neighbourhood is replaced by its complement inside U (excluding y's own
// vertices), as in |N(x1) △ N̄(x2)|.
std::size_t symdiff_size(const Graph& g, const Unit& x, const Unit& y, const VertexSet& u,
                         bool complement_y = false,
                         SymdiffCount mode = SymdiffCount::summed_gap);

// Clique number and independence number by branch and bound.
struct Homogeneous {
  std::size_t clique = 0;
  std::size_t independence = 0;
  friend bool operator==(const Homogeneous&, const Homogeneous&) = default;
};
inline constexpr std::size_t kDefaultHomogeneousCap = 64;
Homogeneous homogeneous_number(const Graph& g, std::size_t cap = kDefaultHomogeneousCap);
std::size_t clique_number(const Graph& g, std::size_t cap = kDefaultHomogeneousCap);
// max(ω, α) < C·log2(n)
bool is_c_ramsey(const Graph& g, double c, std::size_t cap = kDefaultHomogeneousCap);

}  // namespace spectra
