#pragma once

#include <cstddef>
#include <span>
#include <string>

#include "graphemb/trials.hpp"

namespace graphemb {

enum class Operation { VertexQuery, EdgeComposition, GeneralOrder };

struct SchemeOp {
  SchemeFamily scheme;
  Operation op;
  /// Only read for GeneralOrder.
  unsigned order = 1;

  static SchemeOp vertex_query(SchemeFamily s) { return {s, Operation::VertexQuery, 1}; }
  static SchemeOp edge_composition(SchemeFamily s) { return {s, Operation::EdgeComposition, 2}; }
  static SchemeOp general(SchemeFamily s, unsigned n) { return {s, Operation::GeneralOrder, n}; }

  /// 1 for vertex queries, 2 for edge composition, `order` otherwise.
  unsigned effective_order() const;
};

struct SnrTheory {
  double signal_sq;
  double noise_sq;
  double snr;
};

/// Published signal and noise norms.
///  HR-VQ (d, kd, 1/k)          TS-VQ (1, k/d, d/k)
///  HR-EC (d, (k^2+2k)d, ..)    TS-EC (1, (k^2-2k)/d, ..)
SnrTheory snr_theory(SchemeOp so, std::size_t dim, std::size_t k);

/// Expected norms of the quantity edge_composition_trial actually measures
/// (the k+1 edge graph, every term of the product kept):
///  TS-EC noise ((k+1)^2 - 1)/d; HR-EC noise d(3k^2 + 4k - 2), which counts
///  the k+1 all-ones self-pair terms and the doubled cross pairs.
/// Vertex queries coincide with snr_theory.
SnrTheory snr_full_expansion(SchemeOp so, std::size_t dim, std::size_t k);

struct ConnectivityReport {
  SnrTheory values;
  /// The ratio as printed alongside the corollary, 1/(4 L^2 k d).
  double stated_snr;
  bool ratio_discrepancy;
  std::string note;
};

/// Hadamard/Rademacher vertex-query noise bound for a graph of maximum
/// connectivity L. The returned snr is derived from the returned norms.
ConnectivityReport snr_theory_connectivity(std::size_t dim, std::size_t k, std::size_t max_connectivity);

struct TailBounds {
  /// P(F > E T) upper bound.
  double false_exceeds_signal;
  /// P(T < 0) upper bound.
  double true_below_zero;
};

TailBounds tail_bounds(SchemeOp so, std::size_t dim, std::size_t k);

/// Lower bound on P(true answer beats M wrong candidates), clamped to [0, 1].
double recovery_lower_bound(SchemeOp so, std::size_t dim, std::size_t k, std::size_t distractors);

/// Exponent num/den, kept rational so equal exponents are bit-identical.
struct Exponent {
  long long num;
  long long den;
};

struct CapacityRatio {
  double capacity;
  double memory;
  double ratio;
  Exponent ratio_exponent;
};

/// Capacity d^{1/n} over memory d (HR) or d^{(n+1)/n} over d^2 (TS); both
/// reduce to d^{-(n-1)/n}.
CapacityRatio capacity_memory_ratio(SchemeFamily scheme, unsigned order, double dim);

struct TheoryReport {
  SchemeOp so;
  std::size_t dim;
  std::size_t k;
  std::size_t distractors;
  double snr;
  double signal_sq_norm;
  double noise_sq_norm;
  double false_positive_bound;
  double true_negative_bound;
  double recovery_lower_bound;
};

TheoryReport theory_report(SchemeOp so, std::size_t dim, std::size_t k, std::size_t distractors);
std::string to_json(const TheoryReport& r);
std::string csv_header_theory();
std::string to_csv_row(const TheoryReport& r);

struct EmpiricalSnr {
  double signal_sq_mean;
  double noise_sq_mean;
  double snr;
  double signal_sq_se;
  double noise_sq_se;
  /// Delta-method standard error of the ratio.
  double snr_se;
};

EmpiricalSnr empirical_snr(std::span<const TrialRecord> records);

struct RecoveryEstimate {
  double rate;
  double wilson_lower;
  double wilson_upper;
  std::size_t trials;
};

/// Uses only records with ground truth; throws if there are none.
RecoveryEstimate empirical_recovery_rate(std::span<const TrialRecord> records);

}  // namespace graphemb
