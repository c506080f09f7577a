#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "graphemb/codes.hpp"

namespace graphemb {

/// Dense row-major matrix.
template <class T>
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<T> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, T{}) {}

  T& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

  friend bool operator==(const Matrix&, const Matrix&) = default;
};

using RealMatrix = Matrix<double>;
using ComplexMatrix = Matrix<Complex>;

/// Vector payloads for the compressed bindings, d x d matrices for tensor.
using Payload = std::variant<RealVector, ComplexVector, RealMatrix, ComplexMatrix>;

bool is_matrix(const Payload& p) noexcept;
bool is_complex(const Payload& p) noexcept;
/// Vector length, or matrix row count.
std::size_t payload_dim(const Payload& p) noexcept;
/// Zero payload of the right shape.
Payload zero_payload(bool matrix, bool complex, std::size_t dim);
/// acc += term; promotes acc to complex if term is complex.
void accumulate(Payload& acc, const Payload& term, double scale = 1.0);
/// Squared Euclidean / Frobenius norm.
double squared_norm(const Payload& p);
double max_abs_diff(const Payload& a, const Payload& b);

/// Permutation of {0..d-1}; applying it gives out[i] = in[image[i]].
class Permutation {
 public:
  explicit Permutation(std::vector<std::size_t> image);

  static Permutation identity(std::size_t d);
  /// Rolls entries right by `shift`: out[i] = in[(i - shift) mod d].
  static Permutation cyclic_shift(std::size_t d, std::size_t shift = 1);

  std::size_t size() const noexcept { return image_.size(); }
  bool is_identity() const noexcept;
  const std::vector<std::size_t>& image() const noexcept { return image_; }
  Permutation inverse() const;

  template <class T>
  std::vector<T> apply(std::span<const T> in) const {
    std::vector<T> out(in.size());
    for (std::size_t i = 0; i < image_.size(); ++i) out[i] = in[image_[i]];
    return out;
  }

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  std::vector<std::size_t> image_;
};

enum class BindingKind { Tensor, Hadamard, PermutedHadamard, Convolution, CircularCorrelation };

std::string_view to_string(BindingKind kind) noexcept;

class BindingScheme {
 public:
  static BindingScheme tensor() { return BindingScheme(BindingKind::Tensor); }
  static BindingScheme hadamard() { return BindingScheme(BindingKind::Hadamard); }
  static BindingScheme permuted_hadamard(Permutation p);
  /// Uses the default cyclic shift by one.
  static BindingScheme permuted_hadamard(std::size_t dim);
  static BindingScheme convolution() { return BindingScheme(BindingKind::Convolution); }
  static BindingScheme circular_correlation() { return BindingScheme(BindingKind::CircularCorrelation); }
  static BindingScheme of(BindingKind kind, std::size_t dim);

  BindingKind kind() const noexcept { return kind_; }
  /// Only set for PermutedHadamard.
  const Permutation* permutation() const noexcept { return perm_ ? &*perm_ : nullptr; }
  bool has_matrix_payload() const noexcept { return kind_ == BindingKind::Tensor; }

  friend bool operator==(const BindingScheme&, const BindingScheme&) = default;

 private:
  explicit BindingScheme(BindingKind kind) : kind_(kind) {}

  BindingKind kind_;
  std::optional<Permutation> perm_;
};

class EdgeEmbedding {
 public:
  EdgeEmbedding(BindingScheme scheme, Payload payload);

  const BindingScheme& scheme() const noexcept { return scheme_; }
  const Payload& payload() const noexcept { return payload_; }
  std::size_t dim() const noexcept { return payload_dim(payload_); }
  bool is_matrix() const noexcept { return graphemb::is_matrix(payload_); }
  bool is_complex() const noexcept { return graphemb::is_complex(payload_); }

 private:
  BindingScheme scheme_;
  Payload payload_;
};

enum class Side { Left, Right };

/// Tensor: a b^T (no conjugation, rows index the domain). Hadamard: a . b.
/// PermutedHadamard: (Pa) . b. Convolution: sum_i a_i b_{k-i}.
/// CircularCorrelation: sum_i a_i b_{k+i}. Indices are taken mod d.
EdgeEmbedding bind(const BindingScheme& scheme, const CodeVector& a, const CodeVector& b);

/// Convolution and correlation through the DFT:
/// a * b = F^-1(F a . F b), a (star) b = F^-1(conj(F conj(a)) . F b).
EdgeEmbedding bind_via_fft(const BindingScheme& scheme, const CodeVector& a, const CodeVector& b);

/// Removes `key` from an edge embedding.
///  Hadamard / PermutedHadamard: multiply by the key (Rademacher), by its
///  conjugate (Phasor) or divide by it (everything else).
///  Tensor: key^T M (Left, key is the domain) or M key (Right).
CodeVector unbind(const BindingScheme& scheme, const CodeVector& key, const EdgeEmbedding& e,
                  Side side = Side::Left);

/// Hadamard: e1 . e2. Tensor: matrix product. Other schemes cannot compose
/// and are refused with UnsupportedComposition.
EdgeEmbedding compose_edges(const EdgeEmbedding& e1, const EdgeEmbedding& e2);

/// Reads a compressed binding off the outer product M = a b^T: the diagonal
/// (Hadamard), wrapped diagonals sum_i M_{i,(i+k)} (CircularCorrelation) or
/// wrapped anti-diagonals sum_i M_{i,(k-i)} (Convolution).
Entries compression_view(BindingKind kind, const CodeVector& a, const CodeVector& b);

/// Index negation mod d: out[i] = in[(-i) mod d].
template <class T>
std::vector<T> flip(std::span<const T> in) {
  std::vector<T> out(in.size());
  const std::size_t d = in.size();
  for (std::size_t i = 0; i < d; ++i) out[i] = in[(d - i) % d];
  return out;
}

}  // namespace graphemb
