#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "graphemb/bindings.hpp"
#include "graphemb/codes.hpp"

namespace graphemb {

/// Directed multigraph over string vertex ids. Vertex i is embedded with
/// codebook entry i.
struct GraphSpec {
  std::vector<std::string> vertices;
  std::vector<std::pair<std::string, std::string>> edges;

  std::optional<std::size_t> index_of(std::string_view id) const;
  /// Adds the vertex if it is new; returns its index.
  std::size_t add_vertex(std::string id);
  /// Adds both endpoints as needed.
  void add_edge(std::string domain, std::string codomain);
};

/// One `domain codomain` pair per line. Blank lines and lines starting with
/// '#' are skipped; vertices are numbered in order of first appearance.
GraphSpec parse_edge_list(std::istream& in);
GraphSpec read_edge_list(const std::string& path);

class GraphEmbedding {
 public:
  /// Zero embedding with no edges.
  GraphEmbedding(BindingScheme scheme, CodeScheme code_scheme, std::size_t dim);

  const BindingScheme& scheme() const noexcept { return scheme_; }
  CodeScheme code_scheme() const noexcept { return code_scheme_; }
  std::size_t dim() const noexcept { return dim_; }
  const Payload& payload() const noexcept { return payload_; }
  std::size_t edge_count() const noexcept { return edge_count_; }
  bool composed() const noexcept { return composed_; }

  void add_edge(const CodeVector& domain, const CodeVector& codomain);

  GraphEmbedding& operator+=(const GraphEmbedding& other);

 private:
  friend GraphEmbedding edge_compose(const GraphEmbedding& g);

  BindingScheme scheme_;
  CodeScheme code_scheme_;
  std::size_t dim_;
  Payload payload_;
  std::size_t edge_count_ = 0;
  bool composed_ = false;
};

GraphEmbedding embed_graph(const GraphSpec& g, const Codebook& cb, const BindingScheme& scheme);

/// Superposition of the codomains of edges leaving v (Side::Left), or of the
/// domains of edges entering v (Side::Right). No cleanup is applied.
CodeVector vertex_query(const CodeVector& v, const GraphEmbedding& g, Side side = Side::Left);

struct QueryOutcome {
  /// (candidate index, Re <candidate, output>)
  std::vector<std::pair<std::size_t, double>> scores;
  std::size_t winner = 0;
  std::optional<bool> correct;
};

/// Argmax similarity over candidates; ties go to the lowest index.
QueryOutcome cleanup(const CodeVector& output, std::span<const CodeVector> candidates,
                     std::optional<std::size_t> truth = std::nullopt);

/// Tensor: G G. Hadamard with Rademacher codes: G . G.
GraphEmbedding edge_compose(const GraphEmbedding& g);

/// Tensor: s^T G t. Hadamard: sum(s . t . G) / d, or the raw sum when `raw`.
double edge_query(const CodeVector& s, const CodeVector& t, const GraphEmbedding& g, bool raw = false);

/// Largest number of incident edges (in + out) over all vertices.
std::size_t max_connectivity(const GraphSpec& g);

}  // namespace graphemb
