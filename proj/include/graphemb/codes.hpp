#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "graphemb/random.hpp"

namespace graphemb {

using Complex = std::complex<double>;
using RealVector = std::vector<double>;
using ComplexVector = std::vector<Complex>;
using Entries = std::variant<RealVector, ComplexVector>;

enum class CodeScheme { Spherical, Rademacher, Phasor, Gaussian, Cauchy, UniformUnit };

std::string_view to_string(CodeScheme scheme) noexcept;
CodeScheme parse_code_scheme(std::string_view name);

constexpr bool is_complex_scheme(CodeScheme s) noexcept { return s == CodeScheme::Phasor; }

/// Gaussian, Cauchy and UniformUnit: codes whose Hadamard inverse is a division.
constexpr bool is_continuous_scheme(CodeScheme s) noexcept {
  return s == CodeScheme::Gaussian || s == CodeScheme::Cauchy || s == CodeScheme::UniformUnit;
}

/// One vertex embedding. The scheme tag selects the scalar mode; query
/// outputs reuse the key's tag and are not required to conform to it.
class CodeVector {
 public:
  CodeVector(CodeScheme scheme, RealVector entries);
  CodeVector(CodeScheme scheme, ComplexVector entries);
  CodeVector(CodeScheme scheme, Entries entries);

  std::size_t dim() const noexcept;
  CodeScheme scheme() const noexcept { return scheme_; }
  bool is_complex() const noexcept { return std::holds_alternative<ComplexVector>(entries_); }
  const Entries& entries() const noexcept { return entries_; }

  std::span<const double> real() const;
  std::span<const Complex> complex() const;
  ComplexVector to_complex() const;

  /// True when the entries satisfy the scheme invariants (norms, alphabets).
  bool conforms(double tol = 1e-9) const;

  friend bool operator==(const CodeVector&, const CodeVector&) = default;

 private:
  CodeScheme scheme_;
  Entries entries_;
};

/// Draws one code; advances rng deterministically.
CodeVector sample_code(CodeScheme scheme, std::size_t dim, Rng& rng);

/// Standard inner product, conjugate-linear in the first argument.
Complex dot(const CodeVector& a, const CodeVector& b);

/// Real part of dot(a, b); the similarity used by cleanup.
double similarity(const CodeVector& a, const CodeVector& b);

/// Immutable, reproducible set of codes. Code i is drawn from its own stream
/// keyed by (seed, i), so construction order and threading never matter.
class Codebook {
 public:
  Codebook(std::size_t n, std::size_t dim, CodeScheme scheme, std::uint64_t seed);

  std::size_t size() const noexcept { return codes_.size(); }
  std::size_t dim() const noexcept { return dim_; }
  CodeScheme scheme() const noexcept { return scheme_; }
  std::uint64_t seed() const noexcept { return seed_; }

  const CodeVector& operator[](std::size_t i) const { return codes_[i]; }
  const CodeVector& at(std::size_t i) const;
  std::span<const CodeVector> codes() const noexcept { return codes_; }

  /// Binary layout (little-endian): "GECB", u32 version, u32 scheme, u64 dim,
  /// u64 seed, u64 n, then n*dim f64 (real) or n*dim*(re, im) f64 (complex).
  void write_binary(std::ostream& out) const;
  static Codebook read_binary(std::istream& in);

  /// CSV layout: "dim,scheme,seed,n" header, one values line, then one row per
  /// code; complex entries take two columns (re, im).
  void write_csv(std::ostream& out) const;
  static Codebook read_csv(std::istream& in);

  friend bool operator==(const Codebook&, const Codebook&) = default;

 private:
  Codebook(std::size_t dim, CodeScheme scheme, std::uint64_t seed, std::vector<CodeVector> codes);

  std::size_t dim_;
  CodeScheme scheme_;
  std::uint64_t seed_;
  std::vector<CodeVector> codes_;
};

Codebook make_codebook(std::size_t n, std::size_t dim, CodeScheme scheme, std::uint64_t seed);

struct DotMoments {
  double mean;
  double variance;
};

/// Closed-form moments of the dot product of two independent codes.
DotMoments theoretical_dot_moments(CodeScheme scheme, std::size_t dim);

struct DivergenceReport {
  CodeScheme scheme;
  std::vector<std::size_t> sample_sizes;
  std::vector<double> running_mean_abs;
  /// running_mean_abs[j+1] / running_mean_abs[j]
  std::vector<double> successive_ratios;
  double factor;
  /// Empty when fewer than two checkpoints were requested.
  std::optional<bool> diverges;
};

inline constexpr double kDivergenceFactor = 1.1;

/// Draws ratios t/u of iid entries and tracks the running mean of |t/u| at
/// each checkpoint. Flags non-convergence when two successive running means
/// differ by more than `factor`.
DivergenceReport ratio_moment_divergence(CodeScheme scheme, std::span<const std::size_t> sample_sizes,
                                         Rng& rng, double factor = kDivergenceFactor);

}  // namespace graphemb
