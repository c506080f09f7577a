#include "graphemb/trials.hpp"

#include "graphemb/error.hpp"
#include "graphemb/graphs.hpp"
#include "graphemb/parallel.hpp"

namespace graphemb {

namespace {

Payload as_payload(const CodeVector& v) {
  return std::visit([](const auto& e) { return Payload(e); }, v.entries());
}

double squared_distance(const CodeVector& a, const CodeVector& b) {
  Payload diff = as_payload(a);
  accumulate(diff, as_payload(b), -1.0);
  return squared_norm(diff);
}

CodeVector as_code(CodeScheme scheme, const EdgeEmbedding& e) {
  if (const auto* v = std::get_if<RealVector>(&e.payload())) return {scheme, *v};
  if (const auto* v = std::get_if<ComplexVector>(&e.payload())) return {scheme, *v};
  throw Error(Errc::InvalidArgument, "vector payload expected");
}

CodeVector conjugate(const CodeVector& v) {
  ComplexVector out = v.to_complex();
  for (Complex& z : out) z = std::conj(z);
  return {v.scheme(), std::move(out)};
}

}  // namespace

std::string_view to_string(SchemeFamily f) noexcept {
  return f == SchemeFamily::TensorSpherical ? "tensor" : "hadamard";
}

SchemeFamily parse_scheme_family(std::string_view name) {
  if (name == "tensor" || name == "tensor-spherical") return SchemeFamily::TensorSpherical;
  if (name == "hadamard" || name == "hadamard-rademacher") return SchemeFamily::HadamardRademacher;
  throw Error(Errc::UnsupportedScheme, "unknown scheme '" + std::string(name) + "'");
}

CodeScheme code_scheme_of(SchemeFamily f) noexcept {
  return f == SchemeFamily::TensorSpherical ? CodeScheme::Spherical : CodeScheme::Rademacher;
}

BindingScheme binding_scheme_of(SchemeFamily f) {
  return f == SchemeFamily::TensorSpherical ? BindingScheme::tensor() : BindingScheme::hadamard();
}

TrialRecord vertex_query_trial(SchemeFamily family, std::size_t dim, std::size_t k, std::size_t distractors,
                               Rng& rng) {
  const CodeScheme code = code_scheme_of(family);
  const CodeVector v = sample_code(code, dim, rng);
  const CodeVector u = sample_code(code, dim, rng);
  GraphEmbedding g(binding_scheme_of(family), code, dim);
  g.add_edge(v, u);
  for (std::size_t i = 0; i < k; ++i) {
    const CodeVector q = sample_code(code, dim, rng);
    g.add_edge(q, sample_code(code, dim, rng));
  }
  const CodeVector out = vertex_query(v, g);

  TrialRecord rec;
  rec.signal_sq = dot(u, u).real();
  rec.noise_sq = squared_distance(out, u);

  // The true answer goes last so a tie counts against it.
  std::vector<CodeVector> candidates;
  candidates.reserve(distractors + 1);
  for (std::size_t i = 0; i < distractors; ++i) candidates.push_back(sample_code(code, dim, rng));
  candidates.push_back(u);
  const QueryOutcome q = cleanup(out, candidates, distractors);
  rec.correct = q.correct;
  rec.present_score = q.scores.back().second / rec.signal_sq;
  rec.absent_score = distractors > 0 ? q.scores.front().second / rec.signal_sq : 0.0;
  return rec;
}

TrialRecord edge_composition_trial(SchemeFamily family, std::size_t dim, std::size_t k, std::size_t distractors,
                                   Rng& rng) {
  if (k == 0) throw Error(Errc::DomainError, "edge composition needs k >= 1");
  const CodeScheme code = code_scheme_of(family);
  const BindingScheme scheme = binding_scheme_of(family);
  const CodeVector u = sample_code(code, dim, rng);
  const CodeVector v = sample_code(code, dim, rng);
  const CodeVector w = sample_code(code, dim, rng);
  GraphEmbedding g(scheme, code, dim);
  g.add_edge(u, v);
  g.add_edge(v, w);
  for (std::size_t i = 0; i + 1 < k; ++i) {
    const CodeVector q = sample_code(code, dim, rng);
    g.add_edge(q, sample_code(code, dim, rng));
  }
  const GraphEmbedding composed = edge_compose(g);
  const Payload signal = bind(scheme, u, w).payload();

  TrialRecord rec;
  rec.signal_sq = squared_norm(signal);
  Payload noise = composed.payload();
  accumulate(noise, signal, -1.0);
  rec.noise_sq = squared_norm(noise);

  rec.present_score = edge_query(u, w, composed);
  bool correct = true;
  for (std::size_t i = 0; i < distractors; ++i) {
    const CodeVector s = sample_code(code, dim, rng);
    const CodeVector t = sample_code(code, dim, rng);
    const double f = edge_query(s, t, composed);
    if (i == 0) rec.absent_score = f;
    if (f >= rec.present_score) correct = false;
  }
  rec.correct = correct;
  return rec;
}

DefectSample composition_defect_trial(std::size_t dim, Rng& rng) {
  const BindingScheme h = BindingScheme::hadamard();
  const BindingScheme ph = BindingScheme::permuted_hadamard(dim);
  const double d = static_cast<double>(dim);
  DefectSample out{};

  const CodeVector a = sample_code(CodeScheme::Rademacher, dim, rng);
  const CodeVector b = sample_code(CodeScheme::Rademacher, dim, rng);
  const CodeVector c = sample_code(CodeScheme::Rademacher, dim, rng);
  // The library refuses to compose these; build the products explicitly.
  auto chained = [&](const BindingScheme& s) {
    return as_code(CodeScheme::Rademacher,
                   bind(h, as_code(CodeScheme::Rademacher, bind(s, a, b)), as_code(CodeScheme::Rademacher, bind(s, b, c))));
  };
  out.hadamard = similarity(as_code(CodeScheme::Rademacher, bind(h, a, c)), chained(h)) / d;
  out.permuted_hadamard = similarity(as_code(CodeScheme::Rademacher, bind(ph, a, c)), chained(ph)) / d;

  const CodeVector x = sample_code(CodeScheme::Phasor, dim, rng);
  const CodeVector y = sample_code(CodeScheme::Phasor, dim, rng);
  const CodeVector z = sample_code(CodeScheme::Phasor, dim, rng);
  const CodeVector composed =
      as_code(CodeScheme::Phasor, bind(h, as_code(CodeScheme::Phasor, bind(h, x, y)),
                                       conjugate(as_code(CodeScheme::Phasor, bind(h, y, z)))));
  out.phasor = std::abs(dot(as_code(CodeScheme::Phasor, bind(h, x, z)), composed)) / d;
  return out;
}

std::vector<DefectSample> run_defect_trials(std::size_t dim, std::size_t trials, std::uint64_t seed,
                                            std::size_t workers) {
  std::vector<DefectSample> out(trials);
  parallel_for(trials, workers, [&](std::size_t i) {
    Rng rng = make_rng(seed, dim, i);
    out[i] = composition_defect_trial(dim, rng);
  });
  return out;
}

std::vector<TrialRecord> run_trials(TrialKind kind, SchemeFamily family, std::size_t dim, std::size_t k,
                                    std::size_t distractors, std::size_t trials, std::uint64_t seed,
                                    std::size_t workers) {
  std::vector<TrialRecord> out(trials);
  parallel_for(trials, workers, [&](std::size_t i) {
    Rng rng = make_rng(seed, static_cast<unsigned>(kind), static_cast<unsigned>(family), dim, k, i);
    out[i] = kind == TrialKind::VertexQuery ? vertex_query_trial(family, dim, k, distractors, rng)
                                            : edge_composition_trial(family, dim, k, distractors, rng);
  });
  return out;
}

}  // namespace graphemb
