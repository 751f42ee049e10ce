#include <string>

#include "spectra/errors.hpp"
#include "spectra/graph.hpp"
#include "spectra/random.hpp"

namespace spectra {

Model parse_model(std::string_view name) {
  if (name == "gnp") return Model::gnp;
  if (name == "paley") return Model::paley;
  if (name == "complete") return Model::complete;
  if (name == "empty") return Model::empty;
  throw ContractError("unknown graph model '" + std::string(name) + "'");
}

std::string_view model_name(Model m) {
  switch (m) {
    case Model::gnp: return "gnp";
    case Model::paley: return "paley";
    case Model::complete: return "complete";
    case Model::empty: return "empty";
  }
  return "?";
}

bool is_prime(std::size_t q) {
  if (q < 2) return false;
  for (std::size_t d = 2; d * d <= q; ++d)
    if (q % d == 0) return false;
  return true;
}

Graph generate(const GeneratorSpec& spec, std::uint64_t seed) {
  const std::size_t n = spec.n;
  switch (spec.model) {
    case Model::empty:
      return Graph(n);
    case Model::complete: {
      GraphBuilder b(n);
      for (Vertex u = 0; u < n; ++u)
        for (Vertex v = u + 1; v < n; ++v) b.add_edge(u, v);
      return std::move(b).build();
    }
    case Model::gnp: {
      if (n < 1) throw ContractError("gnp needs n >= 1");
      if (!(spec.p >= 0.0 && spec.p <= 1.0)) throw ContractError("gnp needs 0 <= p <= 1");
      Rng rng(derive_seed(seed, "gnp"));
      GraphBuilder b(n);
      for (Vertex u = 0; u < n; ++u)
        for (Vertex v = u + 1; v < n; ++v)
          if (rng.bernoulli(spec.p)) b.add_edge(u, v);
      return std::move(b).build();
    }
    case Model::paley: {
      const std::size_t q = n;
      if (!is_prime(q) || q % 4 != 1)
        throw ContractError("paley needs a prime q = 1 (mod 4), got " + std::to_string(q));
      std::vector<bool> residue(q, false);
      for (std::size_t x = 1; x < q; ++x) residue[(x * x) % q] = true;
      GraphBuilder b(q);
      for (Vertex u = 0; u < q; ++u)
        for (Vertex v = u + 1; v < q; ++v)
          if (residue[(v - u) % q]) b.add_edge(u, v);
      return std::move(b).build();
    }
  }
  throw ContractError("unhandled model");
}

}  // namespace spectra
