#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "graphemb/analysis.hpp"
#include "graphemb/error.hpp"
#include "graphemb/parallel.hpp"
#include "graphemb/stats.hpp"
#include "graphemb/sweep.hpp"
#include "graphemb/trials.hpp"
#include "graphemb/verify.hpp"

#include <boost/math/distributions/beta.hpp>

namespace {

using namespace graphemb;

constexpr int kPass = 0;
constexpr int kCheckFailed = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw std::runtime_error("cannot write " + path);
}

std::vector<std::size_t> k_grid_from_json(const nlohmann::json& j) {
  if (j.is_string()) return parse_k_grid(j.get<std::string>());
  if (j.is_array()) return j.get<std::vector<std::size_t>>();
  if (j.is_number_unsigned()) return {j.get<std::size_t>()};
  throw UsageError("config 'k' must be a grid string, an integer or a list");
}

/// Structured config file: the sweep keys as JSON; unknown keys are errors.
void apply_config(SweepConfig& cfg, const std::string& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("bad config " + path + ": " + e.what());
  }
  if (!j.is_object()) throw UsageError("config must be a JSON object");
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "scheme") cfg.scheme = parse_scheme_family(value.get<std::string>());
      else if (key == "op") cfg.op = parse_sweep_op(value.get<std::string>());
      else if (key == "d") cfg.dim = value.get<std::size_t>();
      else if (key == "k") cfg.k_grid = k_grid_from_json(value);
      else if (key == "trials") cfg.trials = value.get<std::size_t>();
      else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
      else if (key == "sampling") cfg.sampling = parse_sampling_mode(value.get<std::string>());
      else if (key == "codebook_size") cfg.codebook_size = value.get<std::size_t>();
      else if (key == "distractors") cfg.distractors = value.get<std::size_t>();
      else if (key == "raw") cfg.raw = value.get<bool>();
      else throw UsageError("unknown config key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("bad config value: " + std::string(e.what()));
  }
}

struct SweepArgs {
  std::string config;
  std::string scheme = "tensor";
  std::string op = "edge-query";
  std::size_t dim = 32;
  std::string k = "8..64";
  std::size_t trials = 200;
  std::uint64_t seed = 0;
  std::string sampling = "fixed";
  std::size_t codebook_size = 1024;
  std::size_t distractors = 31;
  bool raw = false;
  std::string output;
  std::string svg;
};

SweepConfig build_sweep_config(const SweepArgs& a, const CLI::App& sub) {
  SweepConfig cfg;
  cfg.k_grid = parse_k_grid(a.k);
  if (!a.config.empty()) apply_config(cfg, a.config);
  // Flags given on the command line win over the config file.
  auto given = [&](const char* name) { return sub.count(name) > 0; };
  if (a.config.empty() || given("--scheme")) cfg.scheme = parse_scheme_family(a.scheme);
  if (a.config.empty() || given("--op")) cfg.op = parse_sweep_op(a.op);
  if (a.config.empty() || given("--d")) cfg.dim = a.dim;
  if (given("--k")) cfg.k_grid = parse_k_grid(a.k);
  if (a.config.empty() || given("--trials")) cfg.trials = a.trials;
  if (a.config.empty() || given("--seed")) cfg.seed = a.seed;
  if (a.config.empty() || given("--sampling")) cfg.sampling = parse_sampling_mode(a.sampling);
  if (a.config.empty() || given("--codebook-size")) cfg.codebook_size = a.codebook_size;
  if (a.config.empty() || given("--distractors")) cfg.distractors = a.distractors;
  if (a.config.empty() || given("--raw")) cfg.raw = a.raw;
  cfg.validate();
  return cfg;
}

int run_sweep_command(const SweepArgs& a, const CLI::App& sub, std::size_t workers) {
  SweepConfig cfg;
  try {
    cfg = build_sweep_config(a, sub);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }

  const auto rows = run_sweep(cfg, workers);
  const std::string csv = sweep_csv(rows);
  if (a.output.empty() || a.output == "-") {
    std::cout << csv;
  } else {
    write_file(a.output, csv);
  }
  if (!a.svg.empty()) {
    const std::string title = std::string(to_string(cfg.scheme)) + " " + std::string(to_string(cfg.op)) +
                              ", d=" + std::to_string(cfg.dim);
    write_file(a.svg, render_svg(rows, title, cfg.raw && cfg.scheme == SchemeFamily::HadamardRademacher
                                                  ? static_cast<double>(cfg.dim)
                                                  : 1.0));
  }
  return kPass;
}

struct VerifyArgs {
  std::string grid = "small";
  std::uint64_t seed = 0;
  std::string ec_theory = "expansion";
  std::size_t trials = 0;
  std::string output;
};

int run_verify_command(const VerifyArgs& a, std::size_t workers) {
  VerifyConfig cfg;
  try {
    cfg.grid = parse_verify_grid(a.grid);
    cfg.ec_theory = parse_ec_theory(a.ec_theory);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  cfg.seed = a.seed;
  cfg.trials = a.trials;
  const VerifyReport report = verify_theory(cfg, workers);
  const std::string text = format_report(report);
  if (a.output.empty() || a.output == "-") {
    std::cout << text;
  } else {
    write_file(a.output, text);
    std::cout << text.substr(text.rfind('\n', text.size() - 2) + 1);
  }
  return report.all_passed() ? kPass : kCheckFailed;
}

struct CodesArgs {
  std::uint64_t seed = 0;
  std::size_t samples = 10000;
  double alpha = 0.01;
};

int run_codes_stats(const CodesArgs& a) {
  bool ok = true;
  std::printf("%-12s %6s %8s %12s %12s  %s\n", "scheme", "d", "test", "statistic", "p-value", "result");
  for (std::size_t d : {4u, 16u, 64u}) {
    Rng rng = make_rng(a.seed, 1, d);
    std::vector<double> xs(a.samples);
    for (double& x : xs) {
      const CodeVector u = sample_code(CodeScheme::Spherical, d, rng);
      x = similarity(u, sample_code(CodeScheme::Spherical, d, rng));
    }
    const double shape = (static_cast<double>(d) - 1.0) / 2.0;
    const boost::math::beta_distribution<double> beta(shape, shape);
    const auto fit = stats::ks_test(std::move(xs), [&](double x) {
      return boost::math::cdf(beta, std::clamp((x + 1.0) / 2.0, 0.0, 1.0));
    });
    ok = ok && fit.passes(a.alpha);
    std::printf("%-12s %6zu %8s %12.6g %12.6g  %s\n", "spherical", d, "ks-beta", fit.statistic, fit.p_value,
                fit.passes(a.alpha) ? "PASS" : "FAIL");
  }
  for (std::size_t d : {8u, 16u}) {
    Rng rng = make_rng(a.seed, 2, d);
    std::vector<std::int64_t> counts(a.samples);
    for (auto& c : counts) {
      const CodeVector u = sample_code(CodeScheme::Rademacher, d, rng);
      const auto x = std::lround(similarity(u, sample_code(CodeScheme::Rademacher, d, rng)));
      c = (x + static_cast<long>(d)) / 2;
    }
    const auto fit = stats::chi_square_binomial(counts, d, 0.5);
    ok = ok && fit.passes(a.alpha);
    std::printf("%-12s %6zu %8s %12.6g %12.6g  %s\n", "rademacher", d, "chi2-bin", fit.statistic, fit.p_value,
                fit.passes(a.alpha) ? "PASS" : "FAIL");
  }
  return ok ? kPass : kCheckFailed;
}

struct DefectsArgs {
  std::size_t dim = 256;
  std::size_t trials = 200;
  std::uint64_t seed = 0;
};

int run_defects_demo(const DefectsArgs& a, std::size_t workers) {
  if (a.dim < 2) throw UsageError("--d must be at least 2");
  if (a.trials == 0) throw UsageError("--trials must be at least 1");
  const auto samples = run_defect_trials(a.dim, a.trials, a.seed, workers);
  std::vector<double> h;
  std::vector<double> ph;
  std::vector<double> phasor;
  for (const auto& s : samples) {
    h.push_back(s.hadamard);
    ph.push_back(s.permuted_hadamard);
    phasor.push_back(s.phasor);
  }
  bool ok = true;
  std::printf("composition similarity, d=%zu, %zu trials (ideal 1)\n", a.dim, a.trials);
  auto show = [&](const char* name, const std::vector<double>& xs, bool pass) {
    ok = ok && pass;
    std::printf("  %-20s mean %10.6f  sd %10.6f  %s\n", name, stats::mean(xs),
                xs.size() > 1 ? std::sqrt(stats::variance(xs)) : 0.0, pass ? "PASS" : "FAIL");
  };
  show("hadamard", h, std::all_of(h.begin(), h.end(), [](double x) { return x == 1.0; }));
  show("permuted-hadamard", ph, std::abs(stats::mean(ph)) < 0.1);
  show("phasor", phasor, std::abs(stats::mean(phasor)) < 0.1);

  std::printf("ratio t/u running mean of |t/u| (factor %.2f)\n", kDivergenceFactor);
  const std::vector<std::size_t> sizes{1000, 10000, 100000};
  for (CodeScheme s : {CodeScheme::Gaussian, CodeScheme::Cauchy, CodeScheme::UniformUnit}) {
    Rng rng = make_rng(a.seed, 3, static_cast<unsigned>(s));
    const auto r = ratio_moment_divergence(s, sizes, rng);
    const bool diverges = r.diverges.value_or(false);
    ok = ok && diverges;
    std::printf("  %-20s", std::string(to_string(s)).c_str());
    for (std::size_t i = 0; i < r.sample_sizes.size(); ++i) {
      std::printf(" n=%zu:%.4g", r.sample_sizes[i], r.running_mean_abs[i]);
    }
    std::printf("  %s\n", diverges ? "diverges PASS" : "settles FAIL");
  }
  return ok ? kPass : kCheckFailed;
}

struct PlotArgs {
  std::string input;
  std::string output;
  std::string title = "edge sweep";
  double present_ideal = 1.0;
};

int run_plot(const PlotArgs& a) {
  std::vector<SweepRow> rows;
  try {
    rows = parse_sweep_csv(read_file(a.input));
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  const std::string svg = render_svg(rows, a.title, a.present_ideal);
  if (a.output.empty() || a.output == "-") {
    std::cout << svg;
  } else {
    write_file(a.output, svg);
  }
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graph embeddings with bind-and-sum codes: sweeps, theory checks and demos"};
  app.require_subcommand(1);
  app.fallthrough();
  std::size_t workers = 0;
  app.add_option("--workers", workers, "Worker threads (default: GRAPHEMB_WORKERS or hardware concurrency)");

  SweepArgs sweep;
  auto* s = app.add_subcommand("sweep", "Edge-capacity sweep; writes CSV and optionally SVG");
  s->add_option("--config", sweep.config, "JSON file with sweep settings; flags win on conflict");
  s->add_option("--scheme", sweep.scheme, "tensor | hadamard")->capture_default_str();
  s->add_option("--op", sweep.op, "edge-query | edge-composition")->capture_default_str();
  s->add_option("--d", sweep.dim, "Dimension")->capture_default_str()->check(CLI::PositiveNumber);
  s->add_option("--k", sweep.k, "Edge counts: 8..64, 8..500:8 or 4,8,16")->capture_default_str();
  s->add_option("--trials", sweep.trials, "Graphs per grid point")->capture_default_str()->check(CLI::PositiveNumber);
  s->add_option("--seed", sweep.seed, "Seed")->capture_default_str();
  s->add_option("--sampling", sweep.sampling, "fixed | fresh")->capture_default_str();
  s->add_option("--codebook-size", sweep.codebook_size, "Codes in the fixed codebook")->capture_default_str();
  s->add_option("--distractors", sweep.distractors, "Absent pairs per trial for the recovery rate")
      ->capture_default_str();
  s->add_flag("--raw", sweep.raw, "Unnormalised Hadamard edge-query scores");
  s->add_option("-o,--output", sweep.output, "CSV output path (default stdout)");
  s->add_option("--svg", sweep.svg, "SVG output path");

  VerifyArgs verify;
  auto* v = app.add_subcommand("verify-theory", "Check closed-form SNR and recovery results against Monte Carlo");
  v->add_option("--grid", verify.grid, "small | full")->capture_default_str();
  v->add_option("--seed", verify.seed, "Seed")->capture_default_str();
  v->add_option("--ec-theory", verify.ec_theory, "Edge-composition curve: expansion | closed-form")->capture_default_str();
  v->add_option("--trials", verify.trials, "Trials per point (0: grid default)");
  v->add_option("-o,--output", verify.output, "Write the table here instead of stdout");

  CodesArgs codes;
  auto* c = app.add_subcommand("codes-stats", "Goodness-of-fit tests for code dot-product distributions");
  c->add_option("--seed", codes.seed, "Seed")->capture_default_str();
  c->add_option("--samples", codes.samples, "Pairs per test")->capture_default_str()->check(CLI::Range(10, 100000000));
  c->add_option("--alpha", codes.alpha, "Significance level")->capture_default_str()->check(CLI::Range(0.0, 1.0));

  DefectsArgs defects;
  auto* d = app.add_subcommand("defects-demo", "Composition defects of permuted-Hadamard, phasor and continuous codes");
  d->add_option("--d", defects.dim, "Dimension")->capture_default_str();
  d->add_option("--trials", defects.trials, "Trials")->capture_default_str();
  d->add_option("--seed", defects.seed, "Seed")->capture_default_str();

  PlotArgs plot;
  auto* p = app.add_subcommand("plot", "Render a sweep CSV as SVG with ideal reference lines");
  p->add_option("input", plot.input, "Sweep CSV")->required();
  p->add_option("-o,--output", plot.output, "SVG output path (default stdout)");
  p->add_option("--title", plot.title, "Chart title")->capture_default_str();
  p->add_option("--present-ideal", plot.present_ideal, "Ideal present-edge score")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  if (workers == 0) workers = default_workers();
  try {
    if (*s) return run_sweep_command(sweep, *s, workers);
    if (*v) return run_verify_command(verify, workers);
    if (*c) return run_codes_stats(codes);
    if (*d) return run_defects_demo(defects, workers);
    if (*p) return run_plot(plot);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.code() == Errc::InvalidArgument || e.code() == Errc::ParseError ? kUsage : kCheckFailed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kCheckFailed;
  }
  return kUsage;
}
