#include "graphemb/sweep.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>
#include <utility>

#include "graphemb/analysis.hpp"
#include "graphemb/error.hpp"
#include "graphemb/graphs.hpp"
#include "graphemb/parallel.hpp"
#include "graphemb/stats.hpp"

namespace graphemb {

namespace {

// Stream tags keep the codebook and per-trial streams apart.
constexpr std::uint64_t kCodebookStream = 0xC0DEB00C;
constexpr std::uint64_t kTrialStream = 0x7121A1;

struct TrialScores {
  double present;
  double absent;
  bool recovered;
};

using Pair = std::pair<std::size_t, std::size_t>;

/// Vertex indices and their codes for one trial. Fixed mode draws indices
/// from the shared codebook with replacement; fresh mode hands out new
/// indices backed by freshly sampled codes.
class VertexSource {
 public:
  VertexSource(const SweepConfig& cfg, const Codebook* book, Rng& rng)
      : cfg_(cfg), book_(book), rng_(rng), code_(code_scheme_of(cfg.scheme)) {}

  std::size_t draw() {
    if (book_) return std::uniform_int_distribution<std::size_t>(0, book_->size() - 1)(rng_);
    fresh_.push_back(sample_code(code_, cfg_.dim, rng_));
    return fresh_.size() - 1;
  }

  /// Draws an index not in `taken`.
  std::size_t draw_distinct(std::initializer_list<std::size_t> taken) {
    for (;;) {
      const std::size_t i = draw();
      if (std::find(taken.begin(), taken.end(), i) == taken.end()) return i;
    }
  }

  const CodeVector& code(std::size_t i) const { return book_ ? (*book_)[i] : fresh_[i]; }

 private:
  const SweepConfig& cfg_;
  const Codebook* book_;
  Rng& rng_;
  CodeScheme code_;
  std::vector<CodeVector> fresh_;
};

TrialScores sweep_trial(const SweepConfig& cfg, std::size_t k, const Codebook* book, Rng& rng) {
  VertexSource src(cfg, book, rng);
  const CodeScheme code = code_scheme_of(cfg.scheme);
  GraphEmbedding g(binding_scheme_of(cfg.scheme), code, cfg.dim);
  std::set<Pair> edges;
  std::vector<Pair> edge_list;
  auto add = [&](std::size_t a, std::size_t b) {
    g.add_edge(src.code(a), src.code(b));
    edges.emplace(a, b);
    edge_list.emplace_back(a, b);
  };

  Pair target;
  std::size_t planted = 0;
  if (cfg.op == SweepOp::EdgeQuery) {
    const std::size_t s = src.draw();
    const std::size_t t = src.draw_distinct({s});
    add(s, t);
    target = {s, t};
    planted = 1;
  } else {
    const std::size_t u = src.draw();
    const std::size_t v = src.draw_distinct({u});
    const std::size_t w = src.draw_distinct({u, v});
    add(u, v);
    add(v, w);
    target = {u, w};
    planted = 2;
  }
  for (std::size_t i = planted; i < k; ++i) {
    const std::size_t a = src.draw();
    add(a, src.draw());
  }

  // A pair is "present" if the queried structure contains it: an edge for
  // edge queries, a two-step path (or edge) for composed queries.
  std::set<Pair> present = edges;
  if (cfg.op == SweepOp::EdgeComposition) {
    for (const auto& [a, b] : edge_list) {
      for (const auto& [c, e] : edge_list) {
        if (b == c) present.emplace(a, e);
      }
    }
  }

  const GraphEmbedding queried = cfg.op == SweepOp::EdgeComposition ? edge_compose(g) : g;
  auto score = [&](const Pair& p) { return edge_query(src.code(p.first), src.code(p.second), queried, cfg.raw); };

  TrialScores out{score(target), 0.0, true};
  const std::size_t absent_draws = std::max<std::size_t>(cfg.distractors, 1);
  for (std::size_t i = 0; i < absent_draws; ++i) {
    Pair p;
    do {
      p.first = src.draw();
      p.second = src.draw();
    } while (present.count(p) != 0);
    const double f = score(p);
    if (i == 0) out.absent = f;
    if (i < cfg.distractors && f >= out.present) out.recovered = false;
  }
  return out;
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

std::string fmt(const std::optional<double>& x) { return x ? fmt(*x) : std::string(); }

double parse_double(std::string_view s) {
  std::string tmp(s);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(tmp, &used);
  } catch (const std::exception&) {
    throw Error(Errc::ParseError, "not a number: '" + tmp + "'");
  }
  if (used != tmp.size()) throw Error(Errc::ParseError, "not a number: '" + tmp + "'");
  return v;
}

std::size_t parse_size(std::string_view s) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw Error(Errc::ParseError, "not a non-negative integer: '" + std::string(s) + "'");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

std::string_view to_string(SweepOp op) noexcept {
  return op == SweepOp::EdgeQuery ? "edge-query" : "edge-composition";
}

std::string_view to_string(SamplingMode m) noexcept {
  return m == SamplingMode::FreshCodes ? "fresh" : "fixed";
}

SweepOp parse_sweep_op(std::string_view name) {
  if (name == "edge-query") return SweepOp::EdgeQuery;
  if (name == "edge-composition") return SweepOp::EdgeComposition;
  throw Error(Errc::InvalidArgument, "unknown operation '" + std::string(name) + "'");
}

SamplingMode parse_sampling_mode(std::string_view name) {
  if (name == "fresh" || name == "fresh_codes" || name == "fresh-codes") return SamplingMode::FreshCodes;
  if (name == "fixed" || name == "fixed_codebook" || name == "fixed-codebook") return SamplingMode::FixedCodebook;
  throw Error(Errc::InvalidArgument, "unknown sampling mode '" + std::string(name) + "'");
}

void SweepConfig::validate() const {
  if (dim == 0) throw Error(Errc::InvalidDimension, "dimension must be positive");
  if (k_grid.empty()) throw Error(Errc::InvalidArgument, "k grid is empty");
  if (!std::is_sorted(k_grid.begin(), k_grid.end()) ||
      std::adjacent_find(k_grid.begin(), k_grid.end()) != k_grid.end()) {
    throw Error(Errc::InvalidArgument, "k grid must be strictly ascending");
  }
  const std::size_t min_k = op == SweepOp::EdgeQuery ? 1 : 2;
  if (k_grid.front() < min_k) {
    throw Error(Errc::InvalidArgument, std::string(to_string(op)) + " needs k >= " + std::to_string(min_k));
  }
  if (trials == 0) throw Error(Errc::InvalidArgument, "trials must be at least 1");
  if (sampling == SamplingMode::FixedCodebook && codebook_size < 3) {
    throw Error(Errc::InvalidArgument, "codebook needs at least 3 codes");
  }
}

std::vector<SweepRow> run_sweep(const SweepConfig& cfg, std::size_t workers) {
  cfg.validate();
  std::optional<Codebook> book;
  if (cfg.sampling == SamplingMode::FixedCodebook) {
    book.emplace(cfg.codebook_size, cfg.dim, code_scheme_of(cfg.scheme), derive_seed(cfg.seed, kCodebookStream));
  }
  const Codebook* bp = book ? &*book : nullptr;

  const std::size_t points = cfg.k_grid.size();
  std::vector<TrialScores> scores(points * cfg.trials);
  parallel_for(scores.size(), workers, [&](std::size_t job) {
    const std::size_t k = cfg.k_grid[job / cfg.trials];
    const std::size_t trial = job % cfg.trials;
    Rng rng = make_rng(cfg.seed, kTrialStream, static_cast<unsigned>(cfg.scheme), static_cast<unsigned>(cfg.op),
                       k, trial);
    scores[job] = sweep_trial(cfg, k, bp, rng);
  });

  std::vector<SweepRow> rows;
  rows.reserve(points);
  for (std::size_t p = 0; p < points; ++p) {
    const std::size_t k = cfg.k_grid[p];
    std::vector<double> present;
    std::vector<double> absent;
    std::size_t hits = 0;
    for (std::size_t t = 0; t < cfg.trials; ++t) {
      const auto& s = scores[p * cfg.trials + t];
      present.push_back(s.present);
      absent.push_back(s.absent);
      hits += s.recovered ? 1 : 0;
    }
    SweepRow row{};
    row.k = k;
    row.mean_present = stats::mean(present);
    row.mean_absent = stats::mean(absent);
    row.sd_present = present.size() > 1 ? std::sqrt(stats::variance(present)) : 0.0;
    row.sd_absent = absent.size() > 1 ? std::sqrt(stats::variance(absent)) : 0.0;
    row.recovery_rate = static_cast<double>(hits) / static_cast<double>(cfg.trials);

    // The planted structure is the signal; the k - 1 other edges are noise.
    const std::size_t noise_edges = k - 1;
    const SchemeOp op = cfg.op == SweepOp::EdgeQuery ? SchemeOp::vertex_query(cfg.scheme)
                                                     : SchemeOp::edge_composition(cfg.scheme);
    const std::size_t min_noise = cfg.op == SweepOp::EdgeQuery ? 1 : 3;
    if (noise_edges >= min_noise) {
      row.theory_snr = snr_theory(op, cfg.dim, noise_edges).snr;
      row.theory_recovery_bound = recovery_lower_bound(op, cfg.dim, noise_edges, cfg.distractors);
    }
    rows.push_back(row);
  }
  return rows;
}

std::string sweep_csv(std::span<const SweepRow> rows) {
  std::string out(kSweepCsvHeader);
  out += '\n';
  for (const auto& r : rows) {
    out += std::to_string(r.k) + ',' + fmt(r.mean_present) + ',' + fmt(r.sd_present) + ',' + fmt(r.mean_absent) +
           ',' + fmt(r.sd_absent) + ',' + fmt(r.recovery_rate) + ',' + fmt(r.theory_snr) + ',' +
           fmt(r.theory_recovery_bound) + '\n';
  }
  return out;
}

std::vector<SweepRow> parse_sweep_csv(std::string_view csv) {
  std::vector<SweepRow> rows;
  bool header = true;
  std::size_t lineno = 0;
  for (std::string_view line : split(csv, '\n')) {
    ++lineno;
    line = trim(line);
    if (line.empty()) continue;
    if (header) {
      if (line != kSweepCsvHeader) throw Error(Errc::ParseError, "unexpected sweep CSV header");
      header = false;
      continue;
    }
    const auto f = split(line, ',');
    if (f.size() != 8) {
      throw Error(Errc::ParseError, "line " + std::to_string(lineno) + ": expected 8 fields");
    }
    SweepRow r{};
    r.k = parse_size(trim(f[0]));
    r.mean_present = parse_double(trim(f[1]));
    r.sd_present = parse_double(trim(f[2]));
    r.mean_absent = parse_double(trim(f[3]));
    r.sd_absent = parse_double(trim(f[4]));
    r.recovery_rate = parse_double(trim(f[5]));
    if (!trim(f[6]).empty()) r.theory_snr = parse_double(trim(f[6]));
    if (!trim(f[7]).empty()) r.theory_recovery_bound = parse_double(trim(f[7]));
    rows.push_back(r);
  }
  if (header) throw Error(Errc::ParseError, "empty sweep CSV");
  return rows;
}

std::string render_svg(std::span<const SweepRow> rows, std::string_view title, double present_ideal) {
  constexpr double width = 640.0;
  constexpr double height = 400.0;
  constexpr double left = 60.0;
  constexpr double right = 20.0;
  constexpr double top = 40.0;
  constexpr double bottom = 50.0;

  double kmin = 0.0;
  double kmax = 1.0;
  double ymin = std::min(0.0, present_ideal);
  double ymax = std::max(0.0, present_ideal);
  if (!rows.empty()) {
    kmin = static_cast<double>(rows.front().k);
    kmax = static_cast<double>(rows.back().k);
    for (const auto& r : rows) {
      kmin = std::min(kmin, static_cast<double>(r.k));
      kmax = std::max(kmax, static_cast<double>(r.k));
      for (double y : {r.mean_present, r.mean_absent}) {
        if (std::isfinite(y)) {
          ymin = std::min(ymin, y);
          ymax = std::max(ymax, y);
        }
      }
    }
  }
  if (kmax == kmin) kmax = kmin + 1.0;
  const double pad = 0.05 * (ymax - ymin > 0.0 ? ymax - ymin : 1.0);
  ymin -= pad;
  ymax += pad;

  auto x = [&](double k) { return left + (k - kmin) / (kmax - kmin) * (width - left - right); };
  auto y = [&](double v) { return top + (ymax - v) / (ymax - ymin) * (height - top - bottom); };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
      << "font-size=\"16\">" << title << "</text>\n";
  svg << "<line x1=\"" << left << "\" y1=\"" << height - bottom << "\" x2=\"" << width - right << "\" y2=\""
      << height - bottom << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << height - bottom
      << "\" stroke=\"black\"/>\n";
  svg << "<text x=\"" << width / 2 << "\" y=\"" << height - 12
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">edges in superposition (k)</text>\n";
  svg << "<text x=\"" << left << "\" y=\"" << height - bottom + 16
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">" << fmt(kmin) << "</text>\n";
  svg << "<text x=\"" << width - right << "\" y=\"" << height - bottom + 16
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">" << fmt(kmax) << "</text>\n";
  for (double ref : {present_ideal, 0.0}) {
    svg << "<line class=\"ideal\" x1=\"" << left << "\" y1=\"" << y(ref) << "\" x2=\"" << width - right
        << "\" y2=\"" << y(ref) << "\" stroke=\"red\" stroke-dasharray=\"6,4\"/>\n";
    svg << "<text x=\"" << left - 6 << "\" y=\"" << y(ref) + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" << fmt(ref) << "</text>\n";
  }
  auto polyline = [&](const char* cls, const char* colour, double SweepRow::*field) {
    svg << "<polyline class=\"" << cls << "\" fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (const auto& r : rows) {
      if (!std::isfinite(r.*field)) continue;
      svg << (first ? "" : " ") << x(static_cast<double>(r.k)) << ',' << y(r.*field);
      first = false;
    }
    svg << "\"/>\n";
  };
  polyline("present", "steelblue", &SweepRow::mean_present);
  polyline("absent", "darkorange", &SweepRow::mean_absent);
  svg << "</svg>\n";
  return svg.str();
}

std::vector<std::size_t> parse_k_grid(std::string_view text) {
  text = trim(text);
  if (text.empty()) throw Error(Errc::ParseError, "empty k grid");
  std::vector<std::size_t> out;
  if (const auto dots = text.find(".."); dots != std::string_view::npos) {
    const std::size_t lo = parse_size(trim(text.substr(0, dots)));
    std::string_view rest = text.substr(dots + 2);
    std::size_t step = 1;
    if (const auto colon = rest.find(':'); colon != std::string_view::npos) {
      step = parse_size(trim(rest.substr(colon + 1)));
      rest = rest.substr(0, colon);
    }
    const std::size_t hi = parse_size(trim(rest));
    if (step == 0) throw Error(Errc::ParseError, "k grid step must be positive");
    if (hi < lo) throw Error(Errc::ParseError, "k grid range is descending");
    for (std::size_t k = lo; k <= hi; k += step) out.push_back(k);
    return out;
  }
  for (std::string_view field : split(text, ',')) out.push_back(parse_size(trim(field)));
  return out;
}

}  // namespace graphemb
