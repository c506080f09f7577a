#include "graphemb/codes.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>

#include "graphemb/error.hpp"

namespace graphemb {

namespace {

constexpr std::array<std::pair<CodeScheme, std::string_view>, 6> kSchemeNames{{
    {CodeScheme::Spherical, "spherical"},
    {CodeScheme::Rademacher, "rademacher"},
    {CodeScheme::Phasor, "phasor"},
    {CodeScheme::Gaussian, "gaussian"},
    {CodeScheme::Cauchy, "cauchy"},
    {CodeScheme::UniformUnit, "uniform"},
}};

void require_same_dim(std::size_t a, std::size_t b) {
  if (a != b) {
    throw Error(Errc::DimensionMismatch, std::to_string(a) + " vs " + std::to_string(b));
  }
}

template <class T>
void put(std::ostream& out, T value) {
  static_assert(std::endian::native == std::endian::little, "binary codebooks assume little-endian hosts");
  std::array<char, sizeof(T)> bytes;
  std::memcpy(bytes.data(), &value, sizeof(T));
  out.write(bytes.data(), bytes.size());
}

template <class T>
T get(std::istream& in) {
  std::array<char, sizeof(T)> bytes;
  if (!in.read(bytes.data(), bytes.size())) throw Error(Errc::ParseError, "truncated codebook");
  T value;
  std::memcpy(&value, bytes.data(), sizeof(T));
  return value;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

double parse_double(const std::string& s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw Error(Errc::ParseError, "bad number '" + s + "'");
    return v;
  } catch (const std::logic_error&) {
    throw Error(Errc::ParseError, "bad number '" + s + "'");
  }
}

std::uint64_t parse_u64(const std::string& s) {
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(s, &used);
    if (used != s.size()) throw Error(Errc::ParseError, "bad integer '" + s + "'");
    return v;
  } catch (const std::logic_error&) {
    throw Error(Errc::ParseError, "bad integer '" + s + "'");
  }
}

}  // namespace

std::string_view to_string(CodeScheme scheme) noexcept {
  for (auto [s, name] : kSchemeNames) {
    if (s == scheme) return name;
  }
  return "unknown";
}

CodeScheme parse_code_scheme(std::string_view name) {
  for (auto [s, n] : kSchemeNames) {
    if (n == name) return s;
  }
  throw Error(Errc::UnsupportedScheme, "unknown code scheme '" + std::string(name) + "'");
}

CodeVector::CodeVector(CodeScheme scheme, RealVector entries) : scheme_(scheme), entries_(std::move(entries)) {}
CodeVector::CodeVector(CodeScheme scheme, ComplexVector entries)
    : scheme_(scheme), entries_(std::move(entries)) {}
CodeVector::CodeVector(CodeScheme scheme, Entries entries) : scheme_(scheme), entries_(std::move(entries)) {}

std::size_t CodeVector::dim() const noexcept {
  return std::visit([](const auto& v) { return v.size(); }, entries_);
}

std::span<const double> CodeVector::real() const {
  if (const auto* v = std::get_if<RealVector>(&entries_)) return *v;
  throw Error(Errc::InvalidArgument, "complex code accessed as real");
}

std::span<const Complex> CodeVector::complex() const {
  if (const auto* v = std::get_if<ComplexVector>(&entries_)) return *v;
  throw Error(Errc::InvalidArgument, "real code accessed as complex");
}

ComplexVector CodeVector::to_complex() const {
  if (const auto* v = std::get_if<ComplexVector>(&entries_)) return *v;
  const auto& r = std::get<RealVector>(entries_);
  return ComplexVector(r.begin(), r.end());
}

bool CodeVector::conforms(double tol) const {
  if (dim() == 0) return false;
  if (is_complex() != is_complex_scheme(scheme_)) return false;
  switch (scheme_) {
    case CodeScheme::Spherical: {
      double sq = 0.0;
      for (double x : real()) sq += x * x;
      return std::abs(std::sqrt(sq) - 1.0) <= tol;
    }
    case CodeScheme::Rademacher:
      return std::ranges::all_of(real(), [](double x) { return x == 1.0 || x == -1.0; });
    case CodeScheme::Phasor:
      return std::ranges::all_of(complex(), [tol](Complex z) { return std::abs(std::abs(z) - 1.0) <= tol; });
    case CodeScheme::UniformUnit:
      return std::ranges::all_of(real(), [](double x) { return x >= 0.0 && x <= 1.0; });
    case CodeScheme::Gaussian:
    case CodeScheme::Cauchy:
      return std::ranges::all_of(real(), [](double x) { return std::isfinite(x); });
  }
  return false;
}

CodeVector sample_code(CodeScheme scheme, std::size_t dim, Rng& rng) {
  if (dim == 0) throw Error(Errc::InvalidDimension, "code dimension must be positive");
  switch (scheme) {
    case CodeScheme::Spherical: {
      std::normal_distribution<double> normal;
      RealVector x(dim);
      double sq = 0.0;
      do {
        sq = 0.0;
        for (double& v : x) {
          v = normal(rng);
          sq += v * v;
        }
      } while (sq == 0.0);
      const double inv = 1.0 / std::sqrt(sq);
      for (double& v : x) v *= inv;
      return {scheme, std::move(x)};
    }
    case CodeScheme::Rademacher: {
      RealVector x(dim);
      std::uint64_t bits = 0;
      for (std::size_t i = 0; i < dim; ++i) {
        if (i % 64 == 0) bits = rng();
        x[i] = (bits & 1U) ? 1.0 : -1.0;
        bits >>= 1;
      }
      return {scheme, std::move(x)};
    }
    case CodeScheme::Phasor: {
      std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
      ComplexVector x(dim);
      for (Complex& z : x) z = std::polar(1.0, phase(rng));
      return {scheme, std::move(x)};
    }
    case CodeScheme::Gaussian: {
      std::normal_distribution<double> normal;
      RealVector x(dim);
      for (double& v : x) v = normal(rng);
      return {scheme, std::move(x)};
    }
    case CodeScheme::Cauchy: {
      std::cauchy_distribution<double> cauchy;
      RealVector x(dim);
      for (double& v : x) v = cauchy(rng);
      return {scheme, std::move(x)};
    }
    case CodeScheme::UniformUnit: {
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      RealVector x(dim);
      for (double& v : x) v = unit(rng);
      return {scheme, std::move(x)};
    }
  }
  throw Error(Errc::UnsupportedScheme, "unknown code scheme");
}

Complex dot(const CodeVector& a, const CodeVector& b) {
  require_same_dim(a.dim(), b.dim());
  if (!a.is_complex() && !b.is_complex()) {
    const auto x = a.real();
    const auto y = b.real();
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return {s, 0.0};
  }
  const auto x = a.to_complex();
  const auto y = b.to_complex();
  Complex s{};
  for (std::size_t i = 0; i < x.size(); ++i) s += std::conj(x[i]) * y[i];
  return s;
}

double similarity(const CodeVector& a, const CodeVector& b) { return dot(a, b).real(); }

Codebook::Codebook(std::size_t n, std::size_t dim, CodeScheme scheme, std::uint64_t seed)
    : dim_(dim), scheme_(scheme), seed_(seed) {
  if (n == 0) throw Error(Errc::InvalidArgument, "codebook needs at least one code");
  if (dim == 0) throw Error(Errc::InvalidDimension, "code dimension must be positive");
#ifdef GRAPHEMB_REAL_ONLY
  if (is_complex_scheme(scheme)) throw Error(Errc::UnsupportedScheme, "phasor codes need a complex build");
#endif
  codes_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Rng rng = make_rng(seed, i);
    codes_.push_back(sample_code(scheme, dim, rng));
  }
}

Codebook::Codebook(std::size_t dim, CodeScheme scheme, std::uint64_t seed, std::vector<CodeVector> codes)
    : dim_(dim), scheme_(scheme), seed_(seed), codes_(std::move(codes)) {}

const CodeVector& Codebook::at(std::size_t i) const {
  if (i >= codes_.size()) {
    throw Error(Errc::UnknownVertex, "vertex index " + std::to_string(i) + " outside codebook of size " +
                                         std::to_string(codes_.size()));
  }
  return codes_[i];
}

void Codebook::write_binary(std::ostream& out) const {
  out.write("GECB", 4);
  put<std::uint32_t>(out, 1);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(scheme_));
  put<std::uint64_t>(out, dim_);
  put<std::uint64_t>(out, seed_);
  put<std::uint64_t>(out, codes_.size());
  for (const auto& c : codes_) {
    if (c.is_complex()) {
      for (Complex z : c.complex()) {
        put(out, z.real());
        put(out, z.imag());
      }
    } else {
      for (double x : c.real()) put(out, x);
    }
  }
}

Codebook Codebook::read_binary(std::istream& in) {
  std::array<char, 4> magic{};
  if (!in.read(magic.data(), 4) || std::string_view(magic.data(), 4) != "GECB") {
    throw Error(Errc::ParseError, "not a codebook file");
  }
  if (get<std::uint32_t>(in) != 1) throw Error(Errc::ParseError, "unsupported codebook version");
  const auto tag = get<std::uint32_t>(in);
  if (tag > static_cast<std::uint32_t>(CodeScheme::UniformUnit)) throw Error(Errc::ParseError, "bad scheme tag");
  const auto scheme = static_cast<CodeScheme>(tag);
  const auto dim = get<std::uint64_t>(in);
  const auto seed = get<std::uint64_t>(in);
  const auto n = get<std::uint64_t>(in);
  if (dim == 0 || n == 0) throw Error(Errc::ParseError, "empty codebook");
  std::vector<CodeVector> codes;
  codes.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    if (is_complex_scheme(scheme)) {
      ComplexVector v(dim);
      for (auto& z : v) {
        const double re = get<double>(in);
        z = {re, get<double>(in)};
      }
      codes.emplace_back(scheme, std::move(v));
    } else {
      RealVector v(dim);
      for (auto& x : v) x = get<double>(in);
      codes.emplace_back(scheme, std::move(v));
    }
  }
  return Codebook(dim, scheme, seed, std::move(codes));
}

void Codebook::write_csv(std::ostream& out) const {
  out << "dim,scheme,seed,n\n" << dim_ << ',' << to_string(scheme_) << ',' << seed_ << ',' << codes_.size() << '\n';
  char buf[32];
  auto emit = [&](double x, bool first) {
    std::snprintf(buf, sizeof buf, "%.17g", x);
    if (!first) out << ',';
    out << buf;
  };
  for (const auto& c : codes_) {
    bool first = true;
    if (c.is_complex()) {
      for (Complex z : c.complex()) {
        emit(z.real(), first);
        emit(z.imag(), false);
        first = false;
      }
    } else {
      for (double x : c.real()) {
        emit(x, first);
        first = false;
      }
    }
    out << '\n';
  }
}

Codebook Codebook::read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "dim,scheme,seed,n") throw Error(Errc::ParseError, "bad codebook header");
  if (!std::getline(in, line)) throw Error(Errc::ParseError, "missing codebook metadata");
  const auto meta = split_csv(line);
  if (meta.size() != 4) throw Error(Errc::ParseError, "bad codebook metadata");
  const auto dim = parse_u64(meta[0]);
  const auto scheme = parse_code_scheme(meta[1]);
  const auto seed = parse_u64(meta[2]);
  const auto n = parse_u64(meta[3]);
  if (dim == 0 || n == 0) throw Error(Errc::ParseError, "empty codebook");
  const std::size_t width = is_complex_scheme(scheme) ? 2 * dim : dim;
  std::vector<CodeVector> codes;
  codes.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    if (!std::getline(in, line)) throw Error(Errc::ParseError, "truncated codebook");
    const auto cells = split_csv(line);
    if (cells.size() != width) throw Error(Errc::ParseError, "row " + std::to_string(i) + " has wrong width");
    if (is_complex_scheme(scheme)) {
      ComplexVector v(dim);
      for (std::size_t j = 0; j < dim; ++j) v[j] = {parse_double(cells[2 * j]), parse_double(cells[2 * j + 1])};
      codes.emplace_back(scheme, std::move(v));
    } else {
      RealVector v(dim);
      for (std::size_t j = 0; j < dim; ++j) v[j] = parse_double(cells[j]);
      codes.emplace_back(scheme, std::move(v));
    }
  }
  return Codebook(dim, scheme, seed, std::move(codes));
}

Codebook make_codebook(std::size_t n, std::size_t dim, CodeScheme scheme, std::uint64_t seed) {
  return Codebook(n, dim, scheme, seed);
}

DotMoments theoretical_dot_moments(CodeScheme scheme, std::size_t dim) {
  if (dim == 0) throw Error(Errc::InvalidDimension, "code dimension must be positive");
  const auto d = static_cast<double>(dim);
  switch (scheme) {
    case CodeScheme::Spherical: return {0.0, 1.0 / d};
    case CodeScheme::Rademacher: return {0.0, d};
    default:
      throw Error(Errc::UnsupportedScheme,
                  "no closed-form dot moments for " + std::string(to_string(scheme)) + " codes");
  }
}

DivergenceReport ratio_moment_divergence(CodeScheme scheme, std::span<const std::size_t> sample_sizes, Rng& rng,
                                         double factor) {
  if (!is_continuous_scheme(scheme)) {
    throw Error(Errc::UnsupportedScheme, "ratio moments are only examined for continuous codes");
  }
  if (sample_sizes.empty()) throw Error(Errc::InvalidArgument, "need at least one sample size");
  if (sample_sizes.front() == 0 || !std::ranges::is_sorted(sample_sizes, std::less_equal<>{})) {
    throw Error(Errc::InvalidArgument, "sample sizes must be positive and strictly increasing");
  }
  if (!(factor > 1.0)) throw Error(Errc::InvalidArgument, "divergence factor must exceed 1");

  DivergenceReport report{scheme, {sample_sizes.begin(), sample_sizes.end()}, {}, {}, factor, std::nullopt};
  double sum = 0.0;
  std::size_t drawn = 0;
  for (std::size_t target : sample_sizes) {
    for (; drawn < target; ++drawn) {
      const double t = sample_code(scheme, 1, rng).real()[0];
      const double u = sample_code(scheme, 1, rng).real()[0];
      // u == 0 has probability zero; a zero draw yields inf and is kept.
      sum += std::abs(t / u);
    }
    report.running_mean_abs.push_back(sum / static_cast<double>(drawn));
  }
  if (report.running_mean_abs.size() < 2) return report;
  bool diverges = false;
  for (std::size_t j = 0; j + 1 < report.running_mean_abs.size(); ++j) {
    const double r = report.running_mean_abs[j + 1] / report.running_mean_abs[j];
    report.successive_ratios.push_back(r);
    if (!(r <= factor && r >= 1.0 / factor)) diverges = true;
  }
  report.diverges = diverges;
  return report;
}

}  // namespace graphemb
