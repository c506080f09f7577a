#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace graphemb {

enum class VerifyGrid { Small, Full };
/// Which closed form the edge-composition SNR rows are checked against.
enum class EcTheory { ClosedForm, Expansion };

VerifyGrid parse_verify_grid(std::string_view name);
EcTheory parse_ec_theory(std::string_view name);

struct VerifyConfig {
  VerifyGrid grid = VerifyGrid::Small;
  std::uint64_t seed = 0;
  EcTheory ec_theory = EcTheory::Expansion;
  /// 0 selects the grid default (200 small, 500 full).
  std::size_t trials = 0;
  std::size_t distractors = 31;
};

struct VerifyRow {
  std::string check;
  std::string point;
  double value;
  double lower;
  double upper;
  bool passed;
};

struct VerifyReport {
  std::vector<VerifyRow> rows;
  bool all_passed() const noexcept;
  std::size_t failures() const noexcept;
};

/// Runs the theory-vs-Monte-Carlo invariants:
///  vq-snr       empirical / theory SNR in [0.75, 1.25]
///  ec-snr       empirical / theory SNR in [0.7, 1.3]
///  vq-recovery  empirical recovery rate >= recovery_lower_bound
///  capacity     both schemes give the same capacity/memory ratio
/// Small grid: d in {32, 64}, k in {4, 8}. Full grid: vertex queries on
/// d in {32, 64, 128} x k in {4, 8, 16, 32}, composition on d in {64, 128} x
/// k in {4, 8, 16}. Output depends only on the config, never on `workers`.
VerifyReport verify_theory(const VerifyConfig& cfg, std::size_t workers);

/// Fixed-width pass/fail table with a trailing summary line.
std::string format_report(const VerifyReport& r);

}  // namespace graphemb
