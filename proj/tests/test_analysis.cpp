#include <gtest/gtest.h>

#include <cmath>
#include <json.hpp>

#include "graphemb/analysis.hpp"
#include "graphemb/error.hpp"
#include "graphemb/graphs.hpp"
#include "graphemb/stats.hpp"

using namespace graphemb;

namespace {

const SchemeOp hr_vq = SchemeOp::vertex_query(SchemeFamily::HadamardRademacher);
const SchemeOp ts_vq = SchemeOp::vertex_query(SchemeFamily::TensorSpherical);
const SchemeOp hr_ec = SchemeOp::edge_composition(SchemeFamily::HadamardRademacher);
const SchemeOp ts_ec = SchemeOp::edge_composition(SchemeFamily::TensorSpherical);

template <class F>
void expect_errc(Errc code, F&& f) {
  try {
    f();
    ADD_FAILURE() << "expected " << to_string(code);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

}  // namespace

TEST(SnrTheory, VertexQuery) {
  const auto hr = snr_theory(hr_vq, 1024, 16);
  EXPECT_EQ(hr.signal_sq, 1024.0);
  EXPECT_EQ(hr.noise_sq, 16384.0);
  EXPECT_EQ(hr.snr, 0.0625);
  const auto ts = snr_theory(ts_vq, 64, 16);
  EXPECT_EQ(ts.signal_sq, 1.0);
  EXPECT_EQ(ts.noise_sq, 0.25);
  EXPECT_EQ(ts.snr, 4.0);
}

TEST(SnrTheory, EdgeComposition) {
  const auto ts = snr_theory(ts_ec, 64, 8);
  EXPECT_EQ(ts.signal_sq, 1.0);
  EXPECT_DOUBLE_EQ(ts.noise_sq, 0.75);
  EXPECT_DOUBLE_EQ(ts.snr, 64.0 / 48.0);
  const auto hr = snr_theory(hr_ec, 64, 8);
  EXPECT_EQ(hr.signal_sq, 64.0);
  EXPECT_EQ(hr.noise_sq, 80.0 * 64.0);
  EXPECT_DOUBLE_EQ(hr.snr, 1.0 / 80.0);
}

TEST(SnrTheory, GeneralOrderAndDomain) {
  EXPECT_EQ(snr_theory(SchemeOp::general(SchemeFamily::TensorSpherical, 1), 64, 16).snr, 4.0);
  EXPECT_DOUBLE_EQ(snr_theory(SchemeOp::general(SchemeFamily::TensorSpherical, 2), 64, 8).snr, 64.0 / 48.0);
  expect_errc(Errc::DomainError, [] { snr_theory(SchemeOp::general(SchemeFamily::TensorSpherical, 3), 64, 8); });
  expect_errc(Errc::DomainError, [] { snr_theory(ts_ec, 64, 2); });
  expect_errc(Errc::DomainError, [] { snr_theory(ts_vq, 0, 2); });
  expect_errc(Errc::DomainError, [] { snr_theory(ts_vq, 8, 0); });
}

TEST(SnrTheory, FullExpansion) {
  EXPECT_DOUBLE_EQ(snr_full_expansion(ts_ec, 64, 8).noise_sq, 80.0 / 64.0);
  EXPECT_EQ(snr_full_expansion(hr_ec, 64, 4).noise_sq, 64.0 * 62.0);
  EXPECT_EQ(snr_full_expansion(hr_ec, 64, 8).noise_sq, 64.0 * 222.0);
  EXPECT_EQ(snr_full_expansion(hr_ec, 64, 16).noise_sq, 64.0 * 830.0);
  EXPECT_EQ(snr_full_expansion(ts_vq, 64, 16).snr, snr_theory(ts_vq, 64, 16).snr);
}

TEST(SnrTheory, FullExpansionMatchesMonteCarlo) {
  for (std::size_t k : {4u, 8u}) {
    const auto records = run_trials(TrialKind::EdgeComposition, SchemeFamily::HadamardRademacher, 64, k, 0, 1000, 3, 1);
    const auto e = empirical_snr(records);
    EXPECT_EQ(e.signal_sq_mean, 64.0);
    const double expected = snr_full_expansion(hr_ec, 64, k).noise_sq;
    EXPECT_NEAR(e.noise_sq_mean, expected, 0.1 * expected) << "k=" << k;
  }
}

TEST(Connectivity, NoiseBound) {
  const auto r = snr_theory_connectivity(64, 4, 1);
  EXPECT_EQ(r.values.noise_sq, 1024.0);
  EXPECT_EQ(r.values.signal_sq, 64.0);
  EXPECT_DOUBLE_EQ(r.values.snr, 1.0 / 16.0);
  EXPECT_DOUBLE_EQ(r.stated_snr, 1.0 / 1024.0);
  EXPECT_TRUE(r.ratio_discrepancy);
  EXPECT_EQ(snr_theory_connectivity(32, 1, 1).values.noise_sq, 4.0 * 32.0);
  expect_errc(Errc::DomainError, [] { snr_theory_connectivity(32, 1, 0); });
}

TEST(Connectivity, MatchingGraphsStayBelowBound) {
  const auto records = run_trials(TrialKind::VertexQuery, SchemeFamily::HadamardRademacher, 64, 4, 0, 300, 4, 1);
  const auto e = empirical_snr(records);
  EXPECT_LT(e.noise_sq_mean, snr_theory_connectivity(64, 4, 1).values.noise_sq);
}

TEST(TailBounds, ClosedForms) {
  EXPECT_DOUBLE_EQ(tail_bounds(hr_vq, 1024, 15).false_exceeds_signal, std::exp(-32.0));
  EXPECT_DOUBLE_EQ(tail_bounds(ts_vq, 32, 64).false_exceeds_signal, std::exp(-8.0));
  EXPECT_DOUBLE_EQ(tail_bounds(ts_vq, 32, 64).true_below_zero, std::exp(-16.0));
  EXPECT_DOUBLE_EQ(tail_bounds(ts_ec, 16, 64).false_exceeds_signal, std::exp(-0.5));
}

TEST(TailBounds, GrowWithK) {
  for (SchemeOp so : {hr_vq, ts_vq, hr_ec, ts_ec}) {
    for (std::size_t k = 3; k < 60; ++k) {
      EXPECT_GE(tail_bounds(so, 64, k + 1).false_exceeds_signal, tail_bounds(so, 64, k).false_exceeds_signal);
      EXPECT_GE(tail_bounds(so, 64, k + 1).true_below_zero, tail_bounds(so, 64, k).true_below_zero);
    }
  }
}

TEST(RecoveryBound, ClosedForms) {
  EXPECT_DOUBLE_EQ(recovery_lower_bound(hr_vq, 1024, 16, 99), 1.0 - 99.0 * std::exp(-1024.0 / 66.0));
  EXPECT_DOUBLE_EQ(recovery_lower_bound(ts_ec, 16, 64, 1), 1.0 - std::exp(-1.0));
  EXPECT_NEAR(recovery_lower_bound(ts_ec, 16, 64, 1), 0.632, 5e-4);
  EXPECT_EQ(recovery_lower_bound(hr_vq, 16, 16, 0), 1.0);
  EXPECT_EQ(recovery_lower_bound(hr_vq, 16, 16, 1000), 0.0);
}

TEST(CapacityRatio, SchemesAgreeExactly) {
  for (unsigned n = 1; n <= 4; ++n) {
    for (double d = 16; d <= 4096; d += 1) {
      const auto hr = capacity_memory_ratio(SchemeFamily::HadamardRademacher, n, d);
      const auto ts = capacity_memory_ratio(SchemeFamily::TensorSpherical, n, d);
      ASSERT_EQ(hr.ratio, ts.ratio) << "n=" << n << " d=" << d;
    }
  }
}

TEST(CapacityRatio, Values) {
  EXPECT_EQ(capacity_memory_ratio(SchemeFamily::HadamardRademacher, 1, 256).ratio, 1.0);
  EXPECT_EQ(capacity_memory_ratio(SchemeFamily::HadamardRademacher, 2, 256).ratio, 0.0625);
  EXPECT_EQ(capacity_memory_ratio(SchemeFamily::TensorSpherical, 2, 16).ratio, 0.25);
  const auto ts = capacity_memory_ratio(SchemeFamily::TensorSpherical, 3, 64);
  EXPECT_EQ(ts.memory, 4096.0);
  EXPECT_NEAR(ts.capacity, 256.0, 1e-9);
  EXPECT_EQ(ts.ratio_exponent.num, -2);
  EXPECT_EQ(ts.ratio_exponent.den, 3);
  expect_errc(Errc::DomainError, [] { capacity_memory_ratio(SchemeFamily::TensorSpherical, 0, 64); });
}

TEST(TheoryReport, SerialisesConsistently) {
  const auto r = theory_report(hr_vq, 1024, 16, 99);
  const auto j = nlohmann::json::parse(to_json(r));
  EXPECT_EQ(j["operation"], "hadamard/vertex-query");
  EXPECT_EQ(j["dim"], 1024);
  EXPECT_EQ(j["snr"].get<double>(), 0.0625);
  EXPECT_DOUBLE_EQ(j["recovery_lower_bound"].get<double>(), r.recovery_lower_bound);
  const std::string row = to_csv_row(r);
  const std::string header = csv_header_theory();
  EXPECT_EQ(std::count(row.begin(), row.end(), ','), std::count(header.begin(), header.end(), ','));
  EXPECT_EQ(row.substr(0, 28), "hadamard/vertex-query,1024,1");
}

TEST(EmpiricalSnr, ConstantRecords) {
  const std::vector<TrialRecord> rs(5, TrialRecord{2.0, 8.0, true, 1.0, 0.0});
  const auto e = empirical_snr(rs);
  EXPECT_EQ(e.signal_sq_mean, 2.0);
  EXPECT_EQ(e.noise_sq_mean, 8.0);
  EXPECT_EQ(e.snr, 0.25);
  EXPECT_EQ(e.signal_sq_se, 0.0);
  EXPECT_EQ(e.noise_sq_se, 0.0);
  EXPECT_EQ(e.snr_se, 0.0);
  expect_errc(Errc::InvalidArgument, [&] { empirical_snr(std::span(rs).first(1)); });
}

TEST(EmpiricalSnr, MonteCarloWithinQuarterOfTheory) {
  const auto ts = empirical_snr(run_trials(TrialKind::VertexQuery, SchemeFamily::TensorSpherical, 64, 16, 0, 500, 5, 1));
  EXPECT_NEAR(ts.snr / 4.0, 1.0, 0.25);
  const auto hr =
      empirical_snr(run_trials(TrialKind::VertexQuery, SchemeFamily::HadamardRademacher, 1024, 16, 0, 500, 6, 1));
  EXPECT_NEAR(hr.snr / 0.0625, 1.0, 0.25);
}

TEST(RecoveryRate, AllCorrectAndWilson) {
  std::vector<TrialRecord> rs(40, TrialRecord{1.0, 1.0, true, 1.0, 0.0});
  auto est = empirical_recovery_rate(rs);
  EXPECT_EQ(est.rate, 1.0);
  EXPECT_EQ(est.trials, 40u);
  EXPECT_DOUBLE_EQ(est.wilson_upper, 1.0);
  rs[0].correct = false;
  rs[1].correct.reset();
  est = empirical_recovery_rate(rs);
  EXPECT_EQ(est.trials, 39u);
  EXPECT_DOUBLE_EQ(est.rate, 38.0 / 39.0);
  std::vector<TrialRecord> none(3);
  expect_errc(Errc::InvalidArgument, [&] { empirical_recovery_rate(none); });
}

TEST(RecoveryRate, ExceedsBoundOnVertexQueryGrid) {
  for (SchemeFamily f : {SchemeFamily::TensorSpherical, SchemeFamily::HadamardRademacher}) {
    for (std::size_t k : {4u, 8u, 16u}) {
      const auto est = empirical_recovery_rate(run_trials(TrialKind::VertexQuery, f, 128, k, 31, 300, 7, 1));
      EXPECT_GE(est.rate, recovery_lower_bound(SchemeOp::vertex_query(f), 128, k, 31)) << to_string(f) << " k=" << k;
    }
  }
}

TEST(Trials, DeterministicAcrossWorkerCounts) {
  const auto a = run_trials(TrialKind::EdgeComposition, SchemeFamily::TensorSpherical, 16, 5, 3, 40, 77, 1);
  const auto b = run_trials(TrialKind::EdgeComposition, SchemeFamily::TensorSpherical, 16, 5, 3, 40, 77, 8);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].noise_sq, b[i].noise_sq);
    EXPECT_EQ(a[i].present_score, b[i].present_score);
    EXPECT_EQ(a[i].correct, b[i].correct);
  }
}
