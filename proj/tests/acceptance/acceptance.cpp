// Acceptance suite: one PASS/FAIL line per criterion, pinned seeds.
// Usage: acceptance [--cli PATH] [--only N]
// With --cli, criterion 9 also runs the command-line tool and compares bytes.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/distributions/beta.hpp>

#include "graphemb/analysis.hpp"
#include "graphemb/bindings.hpp"
#include "graphemb/codes.hpp"
#include "graphemb/parallel.hpp"
#include "graphemb/stats.hpp"
#include "graphemb/sweep.hpp"
#include "graphemb/trials.hpp"
#include "graphemb/verify.hpp"

using namespace graphemb;

namespace {

struct Outcome {
  bool passed = true;
  std::string detail;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      passed = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

std::string at(SchemeFamily f, std::size_t d, std::size_t k) {
  return std::string(to_string(f)) + " d=" + std::to_string(d) + " k=" + std::to_string(k);
}

constexpr SchemeFamily kFamilies[] = {SchemeFamily::TensorSpherical, SchemeFamily::HadamardRademacher};

// 1. Distributional fits.
Outcome distributional_fits() {
  Outcome o;
  for (std::size_t d : {4u, 16u, 64u}) {
    Rng rng = make_rng(101, d);
    std::vector<double> xs(10000);
    for (double& x : xs) {
      const CodeVector a = sample_code(CodeScheme::Spherical, d, rng);
      x = similarity(a, sample_code(CodeScheme::Spherical, d, rng));
    }
    const double shape = (static_cast<double>(d) - 1.0) / 2.0;
    const boost::math::beta_distribution<double> beta(shape, shape);
    const auto fit = stats::ks_test(std::move(xs), [&](double x) {
      return boost::math::cdf(beta, std::clamp((x + 1.0) / 2.0, 0.0, 1.0));
    });
    o.check(fit.passes(0.01), "spherical d=" + std::to_string(d) + " KS p=" + fmt("%.3g", fit.p_value));
  }
  for (std::size_t d : {8u, 16u}) {
    Rng rng = make_rng(102, d);
    std::vector<std::int64_t> counts(10000);
    for (auto& c : counts) {
      const CodeVector a = sample_code(CodeScheme::Rademacher, d, rng);
      c = (std::lround(similarity(a, sample_code(CodeScheme::Rademacher, d, rng))) + static_cast<long>(d)) / 2;
    }
    const auto fit = stats::chi_square_binomial(counts, d, 0.5);
    o.check(fit.passes(0.01), "rademacher d=" + std::to_string(d) + " chi2 p=" + fmt("%.3g", fit.p_value));
  }
  if (o.passed) o.detail = "KS Beta d in {4,16,64}, chi-square Binomial d in {8,16}";
  return o;
}

struct VqPoint {
  SchemeFamily family;
  std::size_t d;
  std::size_t k;
  std::vector<TrialRecord> records;
};

// Shared by criteria 2 and 4: same grid, same pinned trials.
const std::vector<VqPoint>& vertex_query_grid() {
  static const std::vector<VqPoint> grid = [] {
    std::vector<VqPoint> g;
    for (SchemeFamily f : kFamilies) {
      for (std::size_t d : {32u, 64u, 128u}) {
        for (std::size_t k : {4u, 8u, 16u, 32u}) {
          g.push_back({f, d, k, run_trials(TrialKind::VertexQuery, f, d, k, 31, 500, 202, default_workers())});
        }
      }
    }
    return g;
  }();
  return grid;
}

// 2. Vertex-query SNR.
Outcome vertex_query_snr() {
  Outcome o;
  double lo = 1e9;
  double hi = -1e9;
  for (const auto& p : vertex_query_grid()) {
    const double ratio = empirical_snr(p.records).snr / snr_theory(SchemeOp::vertex_query(p.family), p.d, p.k).snr;
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
    o.check(ratio >= 0.75 && ratio <= 1.25, at(p.family, p.d, p.k) + " ratio " + fmt("%.3f", ratio));
  }
  if (o.passed) o.detail = "24 points, ratio in [" + fmt("%.3f", lo) + ", " + fmt("%.3f", hi) + "]";
  return o;
}

// 3. Edge-composition SNR against the published closed forms.
Outcome edge_composition_snr() {
  Outcome o;
  std::string expansion;
  for (SchemeFamily f : kFamilies) {
    const SchemeOp so = SchemeOp::edge_composition(f);
    for (std::size_t d : {64u, 128u}) {
      for (std::size_t k : {4u, 8u, 16u}) {
        const auto records = run_trials(TrialKind::EdgeComposition, f, d, k, 0, 500, 303, default_workers());
        const double snr = empirical_snr(records).snr;
        const double ratio = snr / snr_theory(so, d, k).snr;
        o.check(ratio >= 0.7 && ratio <= 1.3, at(f, d, k) + " ratio " + fmt("%.3f", ratio));
        const double exact = snr / snr_full_expansion(so, d, k).snr;
        if (exact < 0.7 || exact > 1.3) expansion += " " + at(f, d, k);
      }
    }
  }
  o.detail += expansion.empty() ? " [all points within band of the exact expansion]"
                                : " [exact expansion also off at" + expansion + "]";
  return o;
}

// 4. Recovery bounds on the criterion-2 grid, M = 31.
Outcome recovery_bounds() {
  Outcome o;
  std::size_t high = 0;
  for (const auto& p : vertex_query_grid()) {
    const double rate = empirical_recovery_rate(p.records).rate;
    const double bound = recovery_lower_bound(SchemeOp::vertex_query(p.family), p.d, p.k, 31);
    o.check(rate >= bound, at(p.family, p.d, p.k) + " rate " + fmt("%.4f", rate) + " < bound " + fmt("%.6g", bound));
    if (bound > 0.99) {
      ++high;
      o.check(rate >= 0.99, at(p.family, p.d, p.k) + " rate " + fmt("%.4f", rate) + " < 0.99");
    }
  }
  if (o.passed) o.detail = "24 points; " + std::to_string(high) + " with bound > 0.99";
  return o;
}

// 5. Capacity ordering in the edge sweep.
Outcome capacity_ordering() {
  Outcome o;
  std::vector<std::size_t> grid = parse_k_grid("8..496:8");
  grid.push_back(500);

  SweepConfig ts;
  ts.scheme = SchemeFamily::TensorSpherical;
  ts.op = SweepOp::EdgeQuery;
  ts.dim = 32;
  ts.k_grid = grid;
  ts.trials = 200;
  ts.sampling = SamplingMode::FixedCodebook;
  ts.seed = 505;
  double worst = 0.0;
  for (const auto& r : run_sweep(ts, default_workers())) {
    worst = std::max(worst, std::abs(r.mean_present - 1.0));
    o.check(std::abs(r.mean_present - 1.0) <= 0.25, "tensor k=" + std::to_string(r.k) + " present mean " +
                                                         fmt("%.3f", r.mean_present));
  }

  SweepConfig hr = ts;
  hr.scheme = SchemeFamily::HadamardRademacher;
  hr.op = SweepOp::EdgeComposition;
  hr.dim = 1024;
  std::optional<std::size_t> departs;
  for (const auto& r : run_sweep(hr, default_workers())) {
    if (!departs && std::abs(r.mean_present - 1.0) > 0.25) departs = r.k;
  }
  o.check(departs && *departs < 128, "hadamard composition present mean stays within 0.25 of 1 below k=128");
  if (o.passed) {
    o.detail = "tensor max |mean-1| " + fmt("%.3f", worst) + " through k=500; hadamard departs at k=" +
               std::to_string(*departs);
  }
  return o;
}

// 6. Algebraic identities.
Outcome algebraic_identities() {
  Outcome o;
  constexpr double tol = 1e-8;
  Rng rng = make_rng(606);
  auto vec = [](const EdgeEmbedding& e) { return e.payload(); };
  for (std::size_t d : {1u, 2u, 7u, 16u, 64u, 100u}) {
    for (CodeScheme s : {CodeScheme::Gaussian, CodeScheme::Phasor}) {
      const CodeVector a = sample_code(s, d, rng);
      const CodeVector b = sample_code(s, d, rng);
      const std::string where = std::string(to_string(s)) + " d=" + std::to_string(d);
      for (auto scheme : {BindingScheme::convolution(), BindingScheme::circular_correlation()}) {
        o.check(max_abs_diff(vec(bind_via_fft(scheme, a, b)), vec(bind(scheme, a, b))) < tol,
                "fft vs direct " + std::string(to_string(scheme.kind())) + " " + where);
      }
      if (!a.is_complex()) {
        const CodeVector fa(s, flip(a.real()));
        o.check(max_abs_diff(vec(bind(BindingScheme::circular_correlation(), a, b)),
                             vec(bind(BindingScheme::convolution(), fa, b))) < tol,
                "correlation vs flipped convolution " + where);
      }
      for (BindingKind kind : {BindingKind::Hadamard, BindingKind::Convolution, BindingKind::CircularCorrelation}) {
        const Payload view = std::visit([](const auto& v) { return Payload(v); }, compression_view(kind, a, b));
        o.check(max_abs_diff(view, vec(bind(BindingScheme::of(kind, d), a, b))) < tol,
                "compression view " + std::string(to_string(kind)) + " " + where);
      }
    }
    const CodeVector r1 = sample_code(CodeScheme::Rademacher, d, rng);
    const CodeVector r2 = sample_code(CodeScheme::Rademacher, d, rng);
    o.check(unbind(BindingScheme::hadamard(), r1, bind(BindingScheme::hadamard(), r1, r2)) == r2,
            "hadamard rademacher unbind d=" + std::to_string(d));
    const CodeVector u = sample_code(CodeScheme::Spherical, d, rng);
    const CodeVector v = sample_code(CodeScheme::Spherical, d, rng);
    const CodeVector out = unbind(BindingScheme::tensor(), u, bind(BindingScheme::tensor(), u, v));
    o.check(max_abs_diff(Payload(RealVector(out.real().begin(), out.real().end())),
                         Payload(RealVector(v.real().begin(), v.real().end()))) < tol,
            "tensor unbind d=" + std::to_string(d));

    const CodeVector x = sample_code(CodeScheme::Gaussian, d, rng);
    const CodeVector x2 = sample_code(CodeScheme::Gaussian, d, rng);
    const CodeVector y = sample_code(CodeScheme::Gaussian, d, rng);
    RealVector mix(d);
    for (std::size_t i = 0; i < d; ++i) mix[i] = 2.5 * x.real()[i] - 0.75 * x2.real()[i];
    const CodeVector xm(CodeScheme::Gaussian, mix);
    for (BindingKind kind : {BindingKind::Tensor, BindingKind::Hadamard, BindingKind::PermutedHadamard,
                             BindingKind::Convolution, BindingKind::CircularCorrelation}) {
      const auto scheme = BindingScheme::of(kind, d);
      for (bool first : {true, false}) {
        auto b2 = [&](const CodeVector& p) { return first ? bind(scheme, p, y).payload() : bind(scheme, y, p).payload(); };
        Payload rhs = zero_payload(kind == BindingKind::Tensor, false, d);
        accumulate(rhs, b2(x), 2.5);
        accumulate(rhs, b2(x2), -0.75);
        o.check(max_abs_diff(b2(xm), rhs) < tol, "bilinearity " + std::string(to_string(kind)) + " d=" +
                                                      std::to_string(d));
      }
    }
  }
  if (o.passed) o.detail = "fft/direct, flip, compression views, unbind, bilinearity on d in {1,2,7,16,64,100}";
  return o;
}

// 7. Composition defects and ratio-moment divergence.
Outcome defects() {
  Outcome o;
  const auto samples = run_defect_trials(256, 200, 707, default_workers());
  double ph = 0.0;
  double phasor = 0.0;
  bool exact = true;
  for (const auto& s : samples) {
    exact = exact && s.hadamard == 1.0;
    ph += s.permuted_hadamard;
    phasor += s.phasor;
  }
  ph /= static_cast<double>(samples.size());
  phasor /= static_cast<double>(samples.size());
  o.check(exact, "plain hadamard composition not exactly 1");
  o.check(std::abs(ph) < 0.1, "permuted-hadamard mean " + fmt("%.4f", ph));
  o.check(std::abs(phasor) < 0.1, "phasor mean " + fmt("%.4f", phasor));
  const std::vector<std::size_t> sizes{1000, 10000, 100000};
  for (CodeScheme s : {CodeScheme::Gaussian, CodeScheme::Cauchy, CodeScheme::UniformUnit}) {
    Rng rng = make_rng(708, static_cast<unsigned>(s));
    const auto r = ratio_moment_divergence(s, sizes, rng);
    o.check(r.diverges.value_or(false), std::string(to_string(s)) + " ratio running mean settles");
  }
  if (o.passed) {
    o.detail = "hadamard 1 exactly, permuted " + fmt("%.4f", ph) + ", phasor " + fmt("%.4f", phasor) +
               "; gaussian/cauchy/uniform ratios diverge";
  }
  return o;
}

// 8. Equal capacity/memory ratio.
Outcome equal_ratio() {
  Outcome o;
  std::size_t points = 0;
  for (unsigned n = 1; n <= 4; ++n) {
    for (std::size_t d = 16; d <= 4096; ++d) {
      const auto hr = capacity_memory_ratio(SchemeFamily::HadamardRademacher, n, static_cast<double>(d));
      const auto ts = capacity_memory_ratio(SchemeFamily::TensorSpherical, n, static_cast<double>(d));
      ++points;
      if (hr.ratio != ts.ratio) o.check(false, "n=" + std::to_string(n) + " d=" + std::to_string(d));
    }
  }
  if (o.passed) o.detail = std::to_string(points) + " (n, d) pairs bit-identical";
  return o;
}

std::string capture(const std::string& command) {
  std::string out;
  std::unique_ptr<FILE, int (*)(FILE*)> pipe(popen(command.c_str(), "r"), pclose);
  if (!pipe) return "<popen failed>";
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe.get())) > 0) out.append(buf.data(), n);
  return out;
}

// 9. Determinism across runs and worker counts.
Outcome determinism(const std::string& cli) {
  Outcome o;
  VerifyConfig vc;
  vc.seed = 909;
  const std::string v1 = format_report(verify_theory(vc, 1));
  o.check(v1 == format_report(verify_theory(vc, 1)), "verify-theory differs between runs");
  o.check(v1 == format_report(verify_theory(vc, 8)), "verify-theory differs between 1 and 8 workers");

  for (SweepOp op : {SweepOp::EdgeQuery, SweepOp::EdgeComposition}) {
    SweepConfig sc;
    sc.scheme = op == SweepOp::EdgeQuery ? SchemeFamily::TensorSpherical : SchemeFamily::HadamardRademacher;
    sc.op = op;
    sc.dim = 64;
    sc.k_grid = parse_k_grid("8..64:8");
    sc.trials = 50;
    sc.seed = 910;
    const std::string s1 = sweep_csv(run_sweep(sc, 1));
    o.check(s1 == sweep_csv(run_sweep(sc, 1)), "sweep differs between runs");
    o.check(s1 == sweep_csv(run_sweep(sc, 8)), "sweep differs between 1 and 8 workers");
  }

  std::string how = "library";
  if (!cli.empty()) {
    how += " + cli";
    const std::string sweep = cli + " sweep --scheme tensor --op edge-query --d 32 --k 8..64 --trials 50 --seed 1";
    const std::string verify = cli + " verify-theory --grid small --seed 7";
    for (const std::string& cmd : {sweep, verify}) {
      const std::string a = capture(cmd + " --workers 1 2>&1");
      const std::string b = capture(cmd + " --workers 1 2>&1");
      const std::string c = capture(cmd + " --workers 8 2>&1");
      o.check(!a.empty() && a == b && a == c, "cli output differs: " + cmd);
    }
  }
  if (o.passed) o.detail = "byte-identical across runs and workers {1, 8} (" + how + ")";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli;
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--cli") == 0 && i + 1 < argc) {
      cli = argv[++i];
    } else if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: %s [--cli PATH] [--only N]\n", argv[0]);
      return 2;
    }
  }

  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "distributional fits", 10, distributional_fits},
      {2, "vertex-query SNR", 120, vertex_query_snr},
      {3, "edge-composition SNR", 180, edge_composition_snr},
      {4, "recovery bounds", 120, recovery_bounds},
      {5, "capacity ordering", 600, capacity_ordering},
      {6, "algebraic identities", 5, algebraic_identities},
      {7, "defect demonstrations", 30, defects},
      {8, "equal-ratio theorem", 5, equal_ratio},
      {9, "determinism", 120, [&] { return determinism(cli); }},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    if (only != 0 && c.id != only) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o = c.run();
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > c.budget_s) o.check(false, "runtime " + fmt("%.1f", secs) + " s over budget");
    failed += o.passed ? 0 : 1;
    std::printf("[%s] criterion %d: %s (%.2f s) - %s\n", o.passed ? "PASS" : "FAIL", c.id, c.name, secs,
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
