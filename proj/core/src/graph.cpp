#include "spectra/graph.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "spectra/errors.hpp"

namespace spectra {

Graph::Graph(std::size_t n) : n_(n), stride_(words_for(n)), bits_(n * stride_, 0), degrees_(n, 0) {}

void Graph::finalize() {
  std::int64_t twice = 0;
  for (Vertex v = 0; v < n_; ++v) {
    degrees_[v] = popcount(row(v));
    twice += static_cast<std::int64_t>(degrees_[v]);
  }
  edge_count_ = twice / 2;
}

Graph Graph::from_edges(std::size_t n, std::span<const Edge> edges) {
  GraphBuilder b(n);
  for (auto [u, v] : edges) b.add_edge(u, v);
  return std::move(b).build();
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(static_cast<std::size_t>(edge_count_));
  for (Vertex u = 0; u < n_; ++u)
    for (Vertex v = u + 1; v < n_; ++v)
      if (has_edge(u, v)) out.emplace_back(u, v);
  return out;
}

VertexSet Graph::neighbourhood(Vertex v) const {
  VertexSet s(n_);
  std::copy(row(v).begin(), row(v).end(), s.words().begin());
  return s;
}

GraphBuilder::GraphBuilder(std::size_t n) : g_(n) {}

GraphBuilder& GraphBuilder::add_edge(Vertex u, Vertex v) {
  if (u >= g_.n_ || v >= g_.n_)
    throw ContractError("edge (" + std::to_string(u) + "," + std::to_string(v) + ") out of range for n=" +
                        std::to_string(g_.n_));
  if (u == v) throw ContractError("self-loop at vertex " + std::to_string(u));
  g_.bits_[u * g_.stride_ + v / kWordBits] |= Word{1} << (v % kWordBits);
  g_.bits_[v * g_.stride_ + u / kWordBits] |= Word{1} << (u % kWordBits);
  return *this;
}

Graph GraphBuilder::build() && {
  g_.finalize();
  return std::move(g_);
}

Unit Unit::pair(Vertex a, Vertex b) {
  if (a == b) throw ContractError("pair unit needs distinct vertices, got " + std::to_string(a) + " twice");
  return a < b ? Unit{a, b} : Unit{b, a};
}

std::string to_string(const Unit& u) {
  if (!u.is_pair()) return std::to_string(u.first);
  return "{" + std::to_string(u.first) + "," + std::to_string(u.second) + "}";
}

// ---- text format ---------------------------------------------------------

namespace {

bool parse_index(std::string_view tok, std::size_t& out) {
  if (tok.empty()) return false;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return ec == std::errc{} && ptr == tok.data() + tok.size();
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> toks;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) toks.push_back(line.substr(i, j - i));
    i = j;
  }
  return toks;
}

}  // namespace

Graph load_graph(std::string_view text) {
  std::optional<GraphBuilder> builder;
  std::size_t n = 0;
  std::size_t lineno = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++lineno;
    const auto toks = split_ws(line);
    if (toks.empty() || toks[0].front() == '#') continue;
    if (!builder) {
      if (toks.size() != 2 || toks[0] != "n" || !parse_index(toks[1], n))
        throw ParseError(lineno, "expected header 'n <N>'");
      builder.emplace(n);
      continue;
    }
    std::size_t u = 0, v = 0;
    if (toks.size() != 2 || !parse_index(toks[0], u) || !parse_index(toks[1], v))
      throw ParseError(lineno, "malformed edge line '" + std::string(line) + "'");
    if (u >= n || v >= n) throw ParseError(lineno, "vertex index out of range (n=" + std::to_string(n) + ")");
    if (u == v) throw ParseError(lineno, "self-loop at vertex " + std::to_string(u));
    builder->add_edge(u, v);
  }
  if (!builder) throw ParseError(lineno, "missing header 'n <N>'");
  return std::move(*builder).build();
}

std::string write_graph(const Graph& g) {
  std::ostringstream os;
  os << "n " << g.order() << '\n';
  for (auto [u, v] : g.edges()) os << u << ' ' << v << '\n';
  return os.str();
}

// ---- operations ----------------------------------------------------------

Graph complement(const Graph& g) {
  const std::size_t n = g.order();
  GraphBuilder b(n);
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v)
      if (!g.has_edge(u, v)) b.add_edge(u, v);
  return std::move(b).build();
}

InducedSubgraph induced_subgraph(const Graph& g, const VertexSet& keep) {
  InducedSubgraph out;
  out.original = keep.members();
  const std::size_t m = out.original.size();
  GraphBuilder b(m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      if (g.has_edge(out.original[i], out.original[j])) b.add_edge(i, j);
  out.graph = std::move(b).build();
  return out;
}

std::int64_t count_edges(const Graph& g, const VertexSet& a, const VertexSet* b) {
  if (b == nullptr) {
    std::int64_t twice = 0;
    a.for_each([&](Vertex v) { twice += static_cast<std::int64_t>(popcount_and(g.row(v), a.words())); });
    return twice / 2;
  }
  if (a.intersects(*b)) throw ContractError("count_edges: A and B overlap");
  std::int64_t cross = 0;
  a.for_each([&](Vertex v) { cross += static_cast<std::int64_t>(popcount_and(g.row(v), b->words())); });
  return cross;
}

double density(const Graph& g, const VertexSet& a) {
  const auto k = static_cast<double>(a.size());
  if (k < 2) return 0.0;
  return static_cast<double>(count_edges(g, a)) / (k * (k - 1) / 2);
}

double density(const Graph& g, const VertexSet& a, const VertexSet& b) {
  const auto denom = static_cast<double>(a.size()) * static_cast<double>(b.size());
  if (denom == 0) return 0.0;
  return static_cast<double>(count_edges(g, a, &b)) / denom;
}

VertexSet unit_vertices(std::size_t n, std::span<const Unit> units) {
  VertexSet s(n);
  for (const auto& x : units) x.for_each_vertex([&](Vertex v) { s.insert(v); });
  return s;
}

std::size_t unit_degree(const Graph& g, const Unit& x, const VertexSet& u) {
  std::size_t d = popcount_and(g.row(x.first), u.words());
  if (x.is_pair()) d += popcount_and(g.row(x.second), u.words());
  return d;
}

std::size_t symdiff_size(const Graph& g, const Unit& x, const Unit& y, const VertexSet& u, bool complement_y,
                         SymdiffCount mode) {
  const std::size_t words = g.words_per_row();
  const auto uw = u.words();
  // Multiplicity m in {0,1,2} is held bit-sliced as (lo, hi) with m = lo + 2*hi.
  std::size_t differing = 0;
  std::size_t double_gap = 0;
  for (std::size_t w = 0; w < words; ++w) {
    const Word mask = uw[w];
    const Word x1 = g.row(x.first)[w] & mask;
    const Word x2 = x.is_pair() ? g.row(x.second)[w] & mask : Word{0};
    Word y1 = g.row(y.first)[w];
    Word y2 = y.is_pair() ? g.row(y.second)[w] : Word{0};
    if (complement_y) {
      y1 = ~y1;
      if (y.first / kWordBits == w) y1 &= ~(Word{1} << (y.first % kWordBits));
      if (y.is_pair()) {
        y2 = ~y2;
        if (y.second / kWordBits == w) y2 &= ~(Word{1} << (y.second % kWordBits));
      }
    }
    y1 &= mask;
    y2 &= mask;
    const Word xlo = x1 ^ x2, xhi = x1 & x2;
    const Word ylo = y1 ^ y2, yhi = y1 & y2;
    differing += static_cast<std::size_t>(std::popcount((xlo ^ ylo) | (xhi ^ yhi)));
    double_gap += static_cast<std::size_t>(std::popcount((xhi & ~(ylo | yhi)) | (yhi & ~(xlo | xhi))));
  }
  return mode == SymdiffCount::summed_gap ? differing + double_gap : differing;
}

}  // namespace spectra
