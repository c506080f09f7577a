#include "graphemb/verify.hpp"

#include <algorithm>
#include <cstdio>

#include "graphemb/analysis.hpp"
#include "graphemb/error.hpp"
#include "graphemb/trials.hpp"

namespace graphemb {

namespace {

constexpr std::uint64_t kVertexStream = 1;
constexpr std::uint64_t kCompositionStream = 2;

std::string point(SchemeFamily f, std::size_t d, std::size_t k) {
  return std::string(to_string(f)) + " d=" + std::to_string(d) + " k=" + std::to_string(k);
}

VerifyRow within(std::string check, std::string where, double value, double lo, double hi) {
  return {std::move(check), std::move(where), value, lo, hi, value >= lo && value <= hi};
}

}  // namespace

VerifyGrid parse_verify_grid(std::string_view name) {
  if (name == "small") return VerifyGrid::Small;
  if (name == "full") return VerifyGrid::Full;
  throw Error(Errc::InvalidArgument, "unknown grid '" + std::string(name) + "' (small|full)");
}

EcTheory parse_ec_theory(std::string_view name) {
  if (name == "closed-form") return EcTheory::ClosedForm;
  if (name == "expansion") return EcTheory::Expansion;
  throw Error(Errc::InvalidArgument, "unknown edge-composition theory '" + std::string(name) + "' (closed-form|expansion)");
}

bool VerifyReport::all_passed() const noexcept { return failures() == 0; }

std::size_t VerifyReport::failures() const noexcept {
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const VerifyRow& r) { return !r.passed; }));
}

VerifyReport verify_theory(const VerifyConfig& cfg, std::size_t workers) {
  const bool full = cfg.grid == VerifyGrid::Full;
  const std::size_t trials = cfg.trials != 0 ? cfg.trials : (full ? 500 : 200);
  const std::vector<std::size_t> vq_dims = full ? std::vector<std::size_t>{32, 64, 128} : std::vector<std::size_t>{32, 64};
  const std::vector<std::size_t> vq_ks = full ? std::vector<std::size_t>{4, 8, 16, 32} : std::vector<std::size_t>{4, 8};
  const std::vector<std::size_t> ec_dims = full ? std::vector<std::size_t>{64, 128} : std::vector<std::size_t>{32, 64};
  const std::vector<std::size_t> ec_ks = full ? std::vector<std::size_t>{4, 8, 16} : std::vector<std::size_t>{4, 8};
  const SchemeFamily families[] = {SchemeFamily::TensorSpherical, SchemeFamily::HadamardRademacher};

  VerifyReport report;
  for (SchemeFamily f : families) {
    const SchemeOp so = SchemeOp::vertex_query(f);
    for (std::size_t d : vq_dims) {
      for (std::size_t k : vq_ks) {
        const auto records = run_trials(TrialKind::VertexQuery, f, d, k, cfg.distractors, trials,
                                        derive_seed(cfg.seed, kVertexStream), workers);
        const double ratio = empirical_snr(records).snr / snr_theory(so, d, k).snr;
        report.rows.push_back(within("vq-snr", point(f, d, k), ratio, 0.75, 1.25));
        const double bound = recovery_lower_bound(so, d, k, cfg.distractors);
        report.rows.push_back(within("vq-recovery", point(f, d, k), empirical_recovery_rate(records).rate, bound, 1.0));
      }
    }
  }
  for (SchemeFamily f : families) {
    const SchemeOp so = SchemeOp::edge_composition(f);
    for (std::size_t d : ec_dims) {
      for (std::size_t k : ec_ks) {
        const auto records = run_trials(TrialKind::EdgeComposition, f, d, k, 0, trials,
                                        derive_seed(cfg.seed, kCompositionStream), workers);
        const SnrTheory theory = cfg.ec_theory == EcTheory::ClosedForm ? snr_theory(so, d, k) : snr_full_expansion(so, d, k);
        report.rows.push_back(within("ec-snr", point(f, d, k), empirical_snr(records).snr / theory.snr, 0.7, 1.3));
      }
    }
  }
  for (unsigned n = 1; n <= 4; ++n) {
    for (std::size_t d : {16u, 64u, 256u, 1024u, 4096u}) {
      const double hr = capacity_memory_ratio(SchemeFamily::HadamardRademacher, n, static_cast<double>(d)).ratio;
      const double ts = capacity_memory_ratio(SchemeFamily::TensorSpherical, n, static_cast<double>(d)).ratio;
      report.rows.push_back({"capacity", "n=" + std::to_string(n) + " d=" + std::to_string(d), ts, hr, hr, ts == hr});
    }
  }
  return report;
}

std::string format_report(const VerifyReport& r) {
  std::string out;
  char line[160];
  std::snprintf(line, sizeof line, "%-12s %-24s %14s %14s %14s  %s\n", "check", "point", "value", "lower", "upper",
                "result");
  out += line;
  for (const auto& row : r.rows) {
    std::snprintf(line, sizeof line, "%-12s %-24s %14.6g %14.6g %14.6g  %s\n", row.check.c_str(), row.point.c_str(),
                  row.value, row.lower, row.upper, row.passed ? "PASS" : "FAIL");
    out += line;
  }
  out += std::to_string(r.rows.size() - r.failures()) + "/" + std::to_string(r.rows.size()) + " checks passed\n";
  return out;
}

}  // namespace graphemb
