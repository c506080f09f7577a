#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "graphemb/trials.hpp"

namespace graphemb {

enum class SweepOp { EdgeQuery, EdgeComposition };
enum class SamplingMode { FreshCodes, FixedCodebook };

std::string_view to_string(SweepOp op) noexcept;
std::string_view to_string(SamplingMode m) noexcept;
SweepOp parse_sweep_op(std::string_view name);
SamplingMode parse_sampling_mode(std::string_view name);

struct SweepConfig {
  SchemeFamily scheme = SchemeFamily::TensorSpherical;
  SweepOp op = SweepOp::EdgeQuery;
  std::size_t dim = 32;
  /// Total edges in each generated graph.
  std::vector<std::size_t> k_grid;
  std::size_t trials = 200;
  std::size_t codebook_size = 1024;
  SamplingMode sampling = SamplingMode::FixedCodebook;
  std::uint64_t seed = 0;
  /// Absent-edge candidates per trial for the recovery rate.
  std::size_t distractors = 31;
  /// Unnormalised Hadamard edge-query scores.
  bool raw = false;

  void validate() const;
};

struct SweepRow {
  std::size_t k;
  double mean_present;
  double sd_present;
  double mean_absent;
  double sd_absent;
  double recovery_rate;
  /// Empty where the matching theorem does not apply (too few edges).
  std::optional<double> theory_snr;
  std::optional<double> theory_recovery_bound;
};

/// For each k: `trials` graphs of k edges, a planted edge (EdgeQuery) or
/// planted composable pair (EdgeComposition) among them. The present score
/// queries the planted edge (or its composite); absent scores query pairs
/// that are not edges of the graph. Rows come back in k order.
std::vector<SweepRow> run_sweep(const SweepConfig& cfg, std::size_t workers);

inline constexpr std::string_view kSweepCsvHeader =
    "k,mean_present,sd_present,mean_absent,sd_absent,recovery_rate,theory_snr,theory_recovery_bound";

std::string sweep_csv(std::span<const SweepRow> rows);
std::vector<SweepRow> parse_sweep_csv(std::string_view csv);

/// Polyline chart of the present and absent means with ideal reference lines
/// at `present_ideal` and 0.
std::string render_svg(std::span<const SweepRow> rows, std::string_view title, double present_ideal = 1.0);

/// Parses "8..64", "8..500:8", or "4,8,16" (ranges include both ends).
std::vector<std::size_t> parse_k_grid(std::string_view text);

}  // namespace graphemb
