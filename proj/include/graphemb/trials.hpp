#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "graphemb/bindings.hpp"
#include "graphemb/codes.hpp"
#include "graphemb/random.hpp"

namespace graphemb {

/// The two schemes compared throughout: tensor binding with spherical codes
/// and Hadamard binding with Rademacher codes.
enum class SchemeFamily { TensorSpherical, HadamardRademacher };

std::string_view to_string(SchemeFamily f) noexcept;
SchemeFamily parse_scheme_family(std::string_view name);
CodeScheme code_scheme_of(SchemeFamily f) noexcept;
BindingScheme binding_scheme_of(SchemeFamily f);

/// One Monte Carlo trial of a theory experiment.
struct TrialRecord {
  double signal_sq = 0.0;
  double noise_sq = 0.0;
  /// Set when the trial ran a recovery against distractors.
  std::optional<bool> correct;
  /// Normalised similarity of the true answer (ideal 1).
  double present_score = 0.0;
  /// Normalised similarity of the first distractor (ideal 0).
  double absent_score = 0.0;
};

/// Fresh independent codes: G = bind(v, u) + sum_{i<k} bind(q_i, r_i).
/// Queries v, measures ||u||^2 and ||Q(v, G) - u||^2, then cleans up against
/// u and `distractors` fresh codes.
TrialRecord vertex_query_trial(SchemeFamily family, std::size_t dim, std::size_t k, std::size_t distractors,
                               Rng& rng);

/// Fresh independent codes: G = bind(u, v) + bind(v, w) + k - 1 distractor
/// edges. Composes, measures ||bind(u, w)||^2 and ||compose(G) - bind(u, w)||^2,
/// then edge-queries (u, w) against `distractors` fresh (s, t) pairs.
TrialRecord edge_composition_trial(SchemeFamily family, std::size_t dim, std::size_t k,
                                   std::size_t distractors, Rng& rng);

enum class TrialKind { VertexQuery, EdgeComposition };

/// Runs `trials` independent trials; trial i uses stream (seed, dim, k, i).
std::vector<TrialRecord> run_trials(TrialKind kind, SchemeFamily family, std::size_t dim, std::size_t k,
                                    std::size_t distractors, std::size_t trials, std::uint64_t seed,
                                    std::size_t workers);

/// Normalised similarity between bind(a, c) and an attempted composition of
/// bind(a, b) with bind(b, c), for fresh codes a, b, c.
struct DefectSample {
  /// Rademacher codes, plain Hadamard: (a.b).(b.c) = a.c, so exactly 1.
  double hadamard;
  /// Rademacher codes, permuted Hadamard with the default cyclic shift:
  /// Re <Pa.c, (Pa.b).(Pb.c)> / d = mean(b . Pb).
  double permuted_hadamard;
  /// Phasor codes, plain Hadamard, composing with the conjugate of the
  /// second edge (the unbinding map): |<a.c, (a.b).conj(b.c)>| / d.
  double phasor;
};

DefectSample composition_defect_trial(std::size_t dim, Rng& rng);

/// Trial i uses stream (seed, dim, i).
std::vector<DefectSample> run_defect_trials(std::size_t dim, std::size_t trials, std::uint64_t seed,
                                            std::size_t workers);

}  // namespace graphemb
