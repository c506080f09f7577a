#include "graphemb/graphs.hpp"

#include <fstream>
#include <istream>
#include <map>
#include <sstream>

#include "graphemb/error.hpp"

namespace graphemb {

namespace {

void require_same_dim(std::size_t a, std::size_t b) {
  if (a != b) throw Error(Errc::DimensionMismatch, std::to_string(a) + " vs " + std::to_string(b));
}

void require_code_scheme(const CodeVector& v, const GraphEmbedding& g) {
  if (v.scheme() != g.code_scheme()) {
    throw Error(Errc::InvalidArgument, "scheme mismatch: " + std::string(to_string(v.scheme())) + " code against " +
                                           std::string(to_string(g.code_scheme())) + " embedding");
  }
  require_same_dim(v.dim(), g.dim());
}

template <class T>
Complex contract(const Matrix<T>& m, std::span<const Complex> s, std::span<const Complex> t) {
  Complex acc{};
  for (std::size_t i = 0; i < m.rows; ++i) {
    Complex row{};
    for (std::size_t j = 0; j < m.cols; ++j) row += m(i, j) * t[j];
    acc += s[i] * row;
  }
  return acc;
}

Entries vector_entries(const Payload& p) {
  if (const auto* v = std::get_if<RealVector>(&p)) return *v;
  if (const auto* v = std::get_if<ComplexVector>(&p)) return *v;
  throw Error(Errc::InvalidArgument, "vector payload expected");
}

}  // namespace

std::optional<std::size_t> GraphSpec::index_of(std::string_view id) const {
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    if (vertices[i] == id) return i;
  }
  return std::nullopt;
}

std::size_t GraphSpec::add_vertex(std::string id) {
  if (auto i = index_of(id)) return *i;
  vertices.push_back(std::move(id));
  return vertices.size() - 1;
}

void GraphSpec::add_edge(std::string domain, std::string codomain) {
  add_vertex(domain);
  add_vertex(codomain);
  edges.emplace_back(std::move(domain), std::move(codomain));
}

GraphSpec parse_edge_list(std::istream& in) {
  GraphSpec g;
  std::map<std::string, std::size_t, std::less<>> seen;
  auto intern = [&](const std::string& id) {
    if (seen.try_emplace(id, g.vertices.size()).second) g.vertices.push_back(id);
  };
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream fields(line);
    std::string domain;
    std::string codomain;
    std::string extra;
    if (!(fields >> domain) || domain.front() == '#') continue;
    if (!(fields >> codomain) || (fields >> extra)) {
      throw Error(Errc::ParseError, "line " + std::to_string(lineno) + ": expected 'domain codomain'");
    }
    intern(domain);
    intern(codomain);
    g.edges.emplace_back(std::move(domain), std::move(codomain));
  }
  return g;
}

GraphSpec read_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::ParseError, "cannot open " + path);
  return parse_edge_list(in);
}

GraphEmbedding::GraphEmbedding(BindingScheme scheme, CodeScheme code_scheme, std::size_t dim)
    : scheme_(std::move(scheme)),
      code_scheme_(code_scheme),
      dim_(dim),
      payload_(zero_payload(scheme_.has_matrix_payload(), is_complex_scheme(code_scheme), dim)) {
  if (dim == 0) throw Error(Errc::InvalidDimension, "embedding dimension must be positive");
  if (const auto* p = scheme_.permutation()) require_same_dim(p->size(), dim);
}

void GraphEmbedding::add_edge(const CodeVector& domain, const CodeVector& codomain) {
  require_same_dim(domain.dim(), dim_);
  accumulate(payload_, bind(scheme_, domain, codomain).payload());
  ++edge_count_;
}

GraphEmbedding& GraphEmbedding::operator+=(const GraphEmbedding& other) {
  if (!(scheme_ == other.scheme_) || code_scheme_ != other.code_scheme_) {
    throw Error(Errc::InvalidArgument, "scheme mismatch");
  }
  accumulate(payload_, other.payload_);
  edge_count_ += other.edge_count_;
  return *this;
}

GraphEmbedding embed_graph(const GraphSpec& g, const Codebook& cb, const BindingScheme& scheme) {
  GraphEmbedding out(scheme, cb.scheme(), cb.dim());
  auto code_for = [&](const std::string& id) -> const CodeVector& {
    const auto i = g.index_of(id);
    if (!i) throw Error(Errc::UnknownVertex, "vertex '" + id + "' is not in the graph");
    return cb.at(*i);
  };
  for (const auto& [domain, codomain] : g.edges) out.add_edge(code_for(domain), code_for(codomain));
  return out;
}

CodeVector vertex_query(const CodeVector& v, const GraphEmbedding& g, Side side) {
  require_code_scheme(v, g);
  switch (g.scheme().kind()) {
    case BindingKind::Tensor:
      return unbind(g.scheme(), v, EdgeEmbedding(g.scheme(), g.payload()), side);
    case BindingKind::Hadamard:
    case BindingKind::PermutedHadamard:
      if (v.scheme() == CodeScheme::Phasor) {
        throw Error(Errc::UnsupportedScheme, "phasor codes have no one-sided vertex query");
      }
      return unbind(g.scheme(), v, EdgeEmbedding(g.scheme(), g.payload()),
                    g.scheme().kind() == BindingKind::Hadamard ? Side::Left : side);
    default:
      throw Error(Errc::UnsupportedScheme,
                  "vertex queries are defined for tensor and Hadamard bindings, not " +
                      std::string(to_string(g.scheme().kind())));
  }
}

QueryOutcome cleanup(const CodeVector& output, std::span<const CodeVector> candidates,
                     std::optional<std::size_t> truth) {
  if (candidates.empty()) throw Error(Errc::EmptyCandidates, "cleanup needs at least one candidate");
  if (truth && *truth >= candidates.size()) throw Error(Errc::InvalidArgument, "truth index out of range");
  QueryOutcome out;
  out.scores.reserve(candidates.size());
  double best = 0.0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const double s = similarity(candidates[i], output);
    out.scores.emplace_back(i, s);
    if (i == 0 || s > best) {
      best = s;
      out.winner = i;
    }
  }
  if (truth) out.correct = out.winner == *truth;
  return out;
}

GraphEmbedding edge_compose(const GraphEmbedding& g) {
  const BindingKind kind = g.scheme().kind();
  if (kind == BindingKind::Hadamard && g.code_scheme() != CodeScheme::Rademacher) {
    throw Error(Errc::UnsupportedComposition,
                "Hadamard composition needs Rademacher codes, not " + std::string(to_string(g.code_scheme())));
  }
  const EdgeEmbedding e(g.scheme(), g.payload());
  GraphEmbedding out = g;
  out.payload_ = compose_edges(e, e).payload();
  out.composed_ = true;
  return out;
}

double edge_query(const CodeVector& s, const CodeVector& t, const GraphEmbedding& g, bool raw) {
  require_code_scheme(s, g);
  require_code_scheme(t, g);
  switch (g.scheme().kind()) {
    case BindingKind::Tensor: {
      if (const auto* m = std::get_if<RealMatrix>(&g.payload()); m && !s.is_complex() && !t.is_complex()) {
        const auto x = s.real();
        const auto y = t.real();
        double acc = 0.0;
        for (std::size_t i = 0; i < m->rows; ++i) {
          if (x[i] == 0.0) continue;
          double row = 0.0;
          const double* mrow = &m->data[i * m->cols];
          for (std::size_t j = 0; j < m->cols; ++j) row += mrow[j] * y[j];
          acc += x[i] * row;
        }
        return acc;
      }
      const auto sc = s.to_complex();
      const auto tc = t.to_complex();
      return std::visit(
          [&](const auto& p) -> double {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, RealMatrix> || std::is_same_v<P, ComplexMatrix>) {
              return contract(p, sc, tc).real();
            } else {
              throw Error(Errc::InvalidArgument, "tensor embedding without matrix payload");
            }
          },
          g.payload());
    }
    case BindingKind::Hadamard:
    case BindingKind::PermutedHadamard: {
      const auto key = bind(g.scheme(), s, t);
      const double total =
          similarity(CodeVector(s.scheme(), vector_entries(key.payload())), CodeVector(s.scheme(), vector_entries(g.payload())));
      return raw ? total : total / static_cast<double>(g.dim());
    }
    default:
      throw Error(Errc::UnsupportedScheme,
                  "edge queries are defined for tensor and Hadamard bindings, not " +
                      std::string(to_string(g.scheme().kind())));
  }
}

std::size_t max_connectivity(const GraphSpec& g) {
  std::map<std::string_view, std::size_t> degree;
  std::size_t best = 0;
  for (const auto& [domain, codomain] : g.edges) {
    best = std::max(best, ++degree[domain]);
    best = std::max(best, ++degree[codomain]);
  }
  return best;
}

}  // namespace graphemb
