#include "graphemb/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <vector>

#include <json.hpp>

#include "graphemb/error.hpp"
#include "graphemb/stats.hpp"

namespace graphemb {

namespace {

struct Params {
  bool tensor;
  unsigned order;
  double d;
  double k;
};

Params validate(SchemeOp so, std::size_t dim, std::size_t k) {
  const unsigned order = so.effective_order();
  if (order != 1 && order != 2) {
    throw Error(Errc::DomainError, "closed forms exist for first and second order operations only");
  }
  if (dim == 0) throw Error(Errc::DomainError, "dimension must be positive");
  if (k == 0) throw Error(Errc::DomainError, "need at least one noise edge");
  if (order == 2 && k < 3) throw Error(Errc::DomainError, "edge composition formulas need k >= 3");
  return {so.scheme == SchemeFamily::TensorSpherical, order, static_cast<double>(dim), static_cast<double>(k)};
}

double clamp01(double p) { return std::clamp(p, 0.0, 1.0); }

std::string op_name(SchemeOp so) {
  std::string s(to_string(so.scheme));
  switch (so.op) {
    case Operation::VertexQuery: return s + "/vertex-query";
    case Operation::EdgeComposition: return s + "/edge-composition";
    case Operation::GeneralOrder: return s + "/order-" + std::to_string(so.order);
  }
  return s;
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

}  // namespace

unsigned SchemeOp::effective_order() const {
  switch (op) {
    case Operation::VertexQuery: return 1;
    case Operation::EdgeComposition: return 2;
    case Operation::GeneralOrder:
      if (order == 0) throw Error(Errc::DomainError, "operation order must be at least 1");
      return order;
  }
  return order;
}

SnrTheory snr_theory(SchemeOp so, std::size_t dim, std::size_t k) {
  const auto [tensor, order, d, kk] = validate(so, dim, k);
  if (order == 1) {
    if (tensor) return {1.0, kk / d, d / kk};
    return {d, kk * d, 1.0 / kk};
  }
  if (tensor) {
    const double terms = kk * kk - 2.0 * kk;
    return {1.0, terms / d, d / terms};
  }
  const double terms = kk * kk + 2.0 * kk;
  return {d, terms * d, 1.0 / terms};
}

SnrTheory snr_full_expansion(SchemeOp so, std::size_t dim, std::size_t k) {
  const unsigned order = so.effective_order();
  if (order == 1) return snr_theory(so, dim, k);
  if (order != 2) throw Error(Errc::DomainError, "closed forms exist for first and second order operations only");
  if (dim == 0 || k == 0) throw Error(Errc::DomainError, "dimension and k must be positive");
  const auto d = static_cast<double>(dim);
  const auto kk = static_cast<double>(k);
  if (so.scheme == SchemeFamily::TensorSpherical) {
    // (k+1)^2 - 1 products, each weighted by a dot product of variance 1/d;
    // cross terms are O(1/d^2) and dropped.
    const double noise = (kk * kk + 2.0 * kk) / d;
    return {1.0, noise, 1.0 / noise};
  }
  // G.G = (k+1) 1 + 2 u.w + 2 sum over the other k(k+1)/2 - 1 pairs.
  const double noise = d * (3.0 * kk * kk + 4.0 * kk - 2.0);
  return {d, noise, d / noise};
}

ConnectivityReport snr_theory_connectivity(std::size_t dim, std::size_t k, std::size_t max_connectivity) {
  if (max_connectivity == 0) throw Error(Errc::DomainError, "maximum connectivity must be at least 1");
  if (dim == 0 || k == 0) throw Error(Errc::DomainError, "dimension and k must be positive");
  const auto d = static_cast<double>(dim);
  const auto kk = static_cast<double>(k);
  const auto l = static_cast<double>(max_connectivity);
  const double noise = 4.0 * l * l * kk * d;
  ConnectivityReport r;
  r.values = {d, noise, d / noise};
  r.stated_snr = 1.0 / noise;
  r.ratio_discrepancy = true;
  r.note = "stated ratio 1/(4L^2kd) is not signal/noise = 1/(4L^2k); snr is derived from the norms";
  return r;
}

TailBounds tail_bounds(SchemeOp so, std::size_t dim, std::size_t k) {
  const auto [tensor, order, d, kk] = validate(so, dim, k);
  if (order == 1) {
    if (tensor) return {std::exp(-d * d / (2.0 * kk)), std::exp(-d * d / kk)};
    return {std::exp(-d / (2.0 * (kk + 1.0))), std::exp(-d / (2.0 * kk))};
  }
  if (tensor) {
    const double b = std::exp(-d * d * d / (2.0 * kk * kk));
    return {b, b};
  }
  return {std::exp(-d / (2.0 * (kk + 1.0) * (kk + 1.0))), std::exp(-d / (2.0 * (kk * kk - 2.0 * kk)))};
}

double recovery_lower_bound(SchemeOp so, std::size_t dim, std::size_t k, std::size_t distractors) {
  const auto [tensor, order, d, kk] = validate(so, dim, k);
  if (distractors == 0) return 1.0;
  const auto m = static_cast<double>(distractors);
  double exponent = 0.0;
  if (order == 1) {
    exponent = tensor ? d * d / kk : d / (2.0 * (2.0 * kk + 1.0));
  } else {
    exponent = tensor ? d * d * d / (kk * kk) : d / (4.0 * (kk + 1.0) * (kk + 1.0) - 2.0);
  }
  return clamp01(1.0 - m * std::exp(-exponent));
}

CapacityRatio capacity_memory_ratio(SchemeFamily scheme, unsigned order, double dim) {
  if (order == 0) throw Error(Errc::DomainError, "operation order must be at least 1");
  if (!(dim > 0.0)) throw Error(Errc::DomainError, "dimension must be positive");
  const auto n = static_cast<long long>(order);
  CapacityRatio r;
  if (scheme == SchemeFamily::HadamardRademacher) {
    // d^{1/n} edges in d numbers.
    r.capacity = std::pow(dim, 1.0 / static_cast<double>(n));
    r.memory = dim;
    r.ratio_exponent = {1 - n, n};
  } else {
    // k^n nuisance terms of variance d^{-(n+1)} give d^{(n+1)/n} edges in d^2 numbers.
    r.capacity = std::pow(dim, static_cast<double>(n + 1) / static_cast<double>(n));
    r.memory = dim * dim;
    r.ratio_exponent = {(n + 1) - 2 * n, n};
  }
  r.ratio = std::pow(dim, static_cast<double>(r.ratio_exponent.num) / static_cast<double>(r.ratio_exponent.den));
  return r;
}

TheoryReport theory_report(SchemeOp so, std::size_t dim, std::size_t k, std::size_t distractors) {
  const SnrTheory snr = snr_theory(so, dim, k);
  const TailBounds tails = tail_bounds(so, dim, k);
  return {so,
          dim,
          k,
          distractors,
          snr.snr,
          snr.signal_sq,
          snr.noise_sq,
          clamp01(tails.false_exceeds_signal),
          clamp01(tails.true_below_zero),
          recovery_lower_bound(so, dim, k, distractors)};
}

std::string to_json(const TheoryReport& r) {
  nlohmann::ordered_json j;
  j["operation"] = op_name(r.so);
  j["dim"] = r.dim;
  j["k"] = r.k;
  j["distractors"] = r.distractors;
  j["snr"] = r.snr;
  j["signal_sq_norm"] = r.signal_sq_norm;
  j["noise_sq_norm"] = r.noise_sq_norm;
  j["false_positive_bound"] = r.false_positive_bound;
  j["true_negative_bound"] = r.true_negative_bound;
  j["recovery_lower_bound"] = r.recovery_lower_bound;
  return j.dump(2);
}

std::string csv_header_theory() {
  return "operation,dim,k,distractors,snr,signal_sq_norm,noise_sq_norm,false_positive_bound,true_negative_bound,"
         "recovery_lower_bound";
}

std::string to_csv_row(const TheoryReport& r) {
  return op_name(r.so) + ',' + std::to_string(r.dim) + ',' + std::to_string(r.k) + ',' +
         std::to_string(r.distractors) + ',' + fmt(r.snr) + ',' + fmt(r.signal_sq_norm) + ',' +
         fmt(r.noise_sq_norm) + ',' + fmt(r.false_positive_bound) + ',' + fmt(r.true_negative_bound) + ',' +
         fmt(r.recovery_lower_bound);
}

EmpiricalSnr empirical_snr(std::span<const TrialRecord> records) {
  if (records.size() < 2) throw Error(Errc::InvalidArgument, "empirical SNR needs at least two records");
  std::vector<double> sig;
  std::vector<double> noise;
  sig.reserve(records.size());
  noise.reserve(records.size());
  for (const auto& r : records) {
    sig.push_back(r.signal_sq);
    noise.push_back(r.noise_sq);
  }
  EmpiricalSnr e;
  e.signal_sq_mean = stats::mean(sig);
  e.noise_sq_mean = stats::mean(noise);
  e.signal_sq_se = stats::standard_error(sig);
  e.noise_sq_se = stats::standard_error(noise);
  e.snr = e.signal_sq_mean / e.noise_sq_mean;
  const double rs = e.signal_sq_mean != 0.0 ? e.signal_sq_se / e.signal_sq_mean : 0.0;
  const double rn = e.noise_sq_mean != 0.0 ? e.noise_sq_se / e.noise_sq_mean : 0.0;
  e.snr_se = std::abs(e.snr) * std::sqrt(rs * rs + rn * rn);
  return e;
}

RecoveryEstimate empirical_recovery_rate(std::span<const TrialRecord> records) {
  std::size_t n = 0;
  std::size_t hits = 0;
  for (const auto& r : records) {
    if (!r.correct) continue;
    ++n;
    hits += *r.correct ? 1 : 0;
  }
  if (n == 0) throw Error(Errc::InvalidArgument, "no records carry ground truth");
  const auto ci = stats::wilson_interval(hits, n);
  return {static_cast<double>(hits) / static_cast<double>(n), ci.lower, ci.upper, n};
}

}  // namespace graphemb
