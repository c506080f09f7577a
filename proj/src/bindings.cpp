#include "graphemb/bindings.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <unsupported/Eigen/FFT>

#include "graphemb/error.hpp"

namespace graphemb {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

void require_same_dim(std::size_t a, std::size_t b) {
  if (a != b) throw Error(Errc::DimensionMismatch, std::to_string(a) + " vs " + std::to_string(b));
}

/// Calls f(span<const T> a, span<const T> b) with T = double when both codes
/// are real and T = Complex otherwise.
template <class F>
decltype(auto) with_common_scalar(const CodeVector& a, const CodeVector& b, F&& f) {
  require_same_dim(a.dim(), b.dim());
  if (!a.is_complex() && !b.is_complex()) return f(a.real(), b.real());
  const ComplexVector ac = a.to_complex();
  const ComplexVector bc = b.to_complex();
  return f(std::span<const Complex>(ac), std::span<const Complex>(bc));
}

template <class T>
Matrix<T> outer(std::span<const T> a, std::span<const T> b) {
  Matrix<T> m(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) m(i, j) = a[i] * b[j];
  }
  return m;
}

template <class T>
std::vector<T> hadamard(std::span<const T> a, std::span<const T> b) {
  std::vector<T> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  return out;
}

template <class T>
std::vector<T> convolve(std::span<const T> a, std::span<const T> b) {
  const std::size_t d = a.size();
  std::vector<T> out(d, T{});
  for (std::size_t k = 0; k < d; ++k) {
    T s{};
    for (std::size_t i = 0; i < d; ++i) s += a[i] * b[(k + d - i) % d];
    out[k] = s;
  }
  return out;
}

template <class T>
std::vector<T> correlate(std::span<const T> a, std::span<const T> b) {
  const std::size_t d = a.size();
  std::vector<T> out(d, T{});
  for (std::size_t k = 0; k < d; ++k) {
    T s{};
    for (std::size_t i = 0; i < d; ++i) s += a[i] * b[(k + i) % d];
    out[k] = s;
  }
  return out;
}

template <class T>
Matrix<T> matmul(const Matrix<T>& x, const Matrix<T>& y) {
  Matrix<T> out(x.rows, y.cols);
  for (std::size_t i = 0; i < x.rows; ++i) {
    for (std::size_t l = 0; l < x.cols; ++l) {
      const T xil = x(i, l);
      if (xil == T{}) continue;
      const T* yrow = &y.data[l * y.cols];
      T* orow = &out.data[i * out.cols];
      for (std::size_t j = 0; j < y.cols; ++j) orow[j] += xil * yrow[j];
    }
  }
  return out;
}

ComplexMatrix to_complex(const RealMatrix& m) {
  ComplexMatrix out(m.rows, m.cols);
  std::ranges::copy(m.data, out.data.begin());
  return out;
}

ComplexVector to_complex(const RealVector& v) { return ComplexVector(v.begin(), v.end()); }

/// Entrywise inverse of a Hadamard key: the key itself for Rademacher codes,
/// its conjugate for phasors, otherwise the reciprocal.
template <class T>
std::vector<T> hadamard_inverse(const CodeVector& key, std::span<const T> entries) {
  std::vector<T> inv(entries.size());
  switch (key.scheme()) {
    case CodeScheme::Rademacher:
      std::ranges::copy(entries, inv.begin());
      return inv;
    case CodeScheme::Phasor:
      if constexpr (std::is_same_v<T, Complex>) {
        std::ranges::transform(entries, inv.begin(), [](Complex z) { return std::conj(z); });
        return inv;
      }
      [[fallthrough]];
    default:
      for (std::size_t i = 0; i < entries.size(); ++i) {
        if (entries[i] == T{}) {
          throw Error(Errc::SingularKey, "key entry " + std::to_string(i) + " is zero");
        }
        inv[i] = T{1} / entries[i];
      }
      return inv;
  }
}

// kissfft cannot plan a length-1 transform; that DFT is the identity.
std::vector<Complex> fft_forward(Eigen::FFT<double>& fft, const ComplexVector& x) {
  if (x.size() == 1) return x;
  std::vector<Complex> out;
  fft.fwd(out, x);
  return out;
}

std::vector<Complex> fft_inverse(Eigen::FFT<double>& fft, const ComplexVector& x) {
  if (x.size() == 1) return x;
  std::vector<Complex> out;
  fft.inv(out, x);
  return out;
}

}  // namespace

bool is_matrix(const Payload& p) noexcept {
  return std::holds_alternative<RealMatrix>(p) || std::holds_alternative<ComplexMatrix>(p);
}

bool is_complex(const Payload& p) noexcept {
  return std::holds_alternative<ComplexVector>(p) || std::holds_alternative<ComplexMatrix>(p);
}

std::size_t payload_dim(const Payload& p) noexcept {
  return std::visit(Overloaded{[](const RealVector& v) { return v.size(); },
                               [](const ComplexVector& v) { return v.size(); },
                               [](const auto& m) { return m.rows; }},
                    p);
}

Payload zero_payload(bool matrix, bool complex, std::size_t dim) {
  if (matrix) {
    if (complex) return ComplexMatrix(dim, dim);
    return RealMatrix(dim, dim);
  }
  if (complex) return ComplexVector(dim);
  return RealVector(dim, 0.0);
}

void accumulate(Payload& acc, const Payload& term, double scale) {
  if (is_matrix(acc) != is_matrix(term)) throw Error(Errc::InvalidArgument, "cannot add vector and matrix payloads");
  require_same_dim(payload_dim(acc), payload_dim(term));
  if (is_complex(term) && !is_complex(acc)) {
    if (auto* v = std::get_if<RealVector>(&acc)) {
      acc = to_complex(*v);
    } else {
      acc = to_complex(std::get<RealMatrix>(acc));
    }
  }
  auto add = [scale](auto& dst, const auto& src) {
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += scale * src[i];
  };
  std::visit(Overloaded{
                 [&](RealVector& a) { add(a, std::get<RealVector>(term)); },
                 [&](ComplexVector& a) {
                   if (const auto* t = std::get_if<RealVector>(&term)) add(a, *t);
                   else add(a, std::get<ComplexVector>(term));
                 },
                 [&](RealMatrix& a) { add(a.data, std::get<RealMatrix>(term).data); },
                 [&](ComplexMatrix& a) {
                   if (const auto* t = std::get_if<RealMatrix>(&term)) add(a.data, t->data);
                   else add(a.data, std::get<ComplexMatrix>(term).data);
                 },
             },
             acc);
}

double squared_norm(const Payload& p) {
  auto sum_sq = [](const auto& xs) {
    double s = 0.0;
    for (const auto& x : xs) s += std::norm(x);
    return s;
  };
  return std::visit(Overloaded{[&](const RealVector& v) { return sum_sq(v); },
                               [&](const ComplexVector& v) { return sum_sq(v); },
                               [&](const auto& m) { return sum_sq(m.data); }},
                    p);
}

double max_abs_diff(const Payload& a, const Payload& b) {
  if (is_matrix(a) != is_matrix(b)) throw Error(Errc::InvalidArgument, "cannot compare vector and matrix payloads");
  require_same_dim(payload_dim(a), payload_dim(b));
  Payload diff = a;
  accumulate(diff, b, -1.0);
  auto max_abs = [](const auto& xs) {
    double m = 0.0;
    for (const auto& x : xs) m = std::max(m, static_cast<double>(std::abs(x)));
    return m;
  };
  return std::visit(Overloaded{[&](const RealVector& v) { return max_abs(v); },
                               [&](const ComplexVector& v) { return max_abs(v); },
                               [&](const auto& m) { return max_abs(m.data); }},
                    diff);
}

Permutation::Permutation(std::vector<std::size_t> image) : image_(std::move(image)) {
  std::vector<bool> seen(image_.size(), false);
  for (std::size_t x : image_) {
    if (x >= image_.size() || seen[x]) throw Error(Errc::InvalidArgument, "not a permutation");
    seen[x] = true;
  }
}

Permutation Permutation::identity(std::size_t d) {
  std::vector<std::size_t> image(d);
  for (std::size_t i = 0; i < d; ++i) image[i] = i;
  return Permutation(std::move(image));
}

Permutation Permutation::cyclic_shift(std::size_t d, std::size_t shift) {
  if (d == 0) throw Error(Errc::InvalidDimension, "permutation size must be positive");
  std::vector<std::size_t> image(d);
  for (std::size_t i = 0; i < d; ++i) image[i] = (i + d - shift % d) % d;
  return Permutation(std::move(image));
}

bool Permutation::is_identity() const noexcept {
  for (std::size_t i = 0; i < image_.size(); ++i) {
    if (image_[i] != i) return false;
  }
  return true;
}

Permutation Permutation::inverse() const {
  std::vector<std::size_t> inv(image_.size());
  for (std::size_t i = 0; i < image_.size(); ++i) inv[image_[i]] = i;
  return Permutation(std::move(inv));
}

std::string_view to_string(BindingKind kind) noexcept {
  switch (kind) {
    case BindingKind::Tensor: return "tensor";
    case BindingKind::Hadamard: return "hadamard";
    case BindingKind::PermutedHadamard: return "permuted-hadamard";
    case BindingKind::Convolution: return "convolution";
    case BindingKind::CircularCorrelation: return "circular-correlation";
  }
  return "unknown";
}

BindingScheme BindingScheme::permuted_hadamard(Permutation p) {
  BindingScheme s(BindingKind::PermutedHadamard);
  s.perm_ = std::move(p);
  return s;
}

BindingScheme BindingScheme::permuted_hadamard(std::size_t dim) {
  return permuted_hadamard(Permutation::cyclic_shift(dim, 1));
}

BindingScheme BindingScheme::of(BindingKind kind, std::size_t dim) {
  if (kind == BindingKind::PermutedHadamard) return permuted_hadamard(dim);
  return BindingScheme(kind);
}

EdgeEmbedding::EdgeEmbedding(BindingScheme scheme, Payload payload)
    : scheme_(std::move(scheme)), payload_(std::move(payload)) {
  if (scheme_.has_matrix_payload() != graphemb::is_matrix(payload_)) {
    throw Error(Errc::InvalidArgument, "tensor bindings carry matrices, all others vectors");
  }
  if (const auto* p = scheme_.permutation(); p != nullptr && p->size() != dim()) {
    throw Error(Errc::DimensionMismatch, "permutation size does not match payload");
  }
}

EdgeEmbedding bind(const BindingScheme& scheme, const CodeVector& a, const CodeVector& b) {
  if (a.dim() == 0) throw Error(Errc::InvalidDimension, "cannot bind empty codes");
  if (const auto* p = scheme.permutation()) require_same_dim(p->size(), a.dim());
  Payload payload = with_common_scalar(a, b, [&](auto x, auto y) -> Payload {
    switch (scheme.kind()) {
      case BindingKind::Tensor: return outer(x, y);
      case BindingKind::Hadamard: return hadamard(x, y);
      case BindingKind::PermutedHadamard: {
        using T = typename decltype(x)::value_type;
        const auto px = scheme.permutation()->apply(x);
        return hadamard(std::span<const T>(px), y);
      }
      case BindingKind::Convolution: return convolve(x, y);
      case BindingKind::CircularCorrelation: return correlate(x, y);
    }
    throw Error(Errc::UnsupportedScheme, "unknown binding");
  });
  return {scheme, std::move(payload)};
}

EdgeEmbedding bind_via_fft(const BindingScheme& scheme, const CodeVector& a, const CodeVector& b) {
  const BindingKind kind = scheme.kind();
  if (kind != BindingKind::Convolution && kind != BindingKind::CircularCorrelation) {
    throw Error(Errc::UnsupportedScheme, "only convolution and correlation have a Fourier route");
  }
  require_same_dim(a.dim(), b.dim());
  if (a.dim() == 0) throw Error(Errc::InvalidDimension, "cannot bind empty codes");
  Eigen::FFT<double> fft;
  ComplexVector ac = a.to_complex();
  if (kind == BindingKind::CircularCorrelation) {
    for (auto& z : ac) z = std::conj(z);
  }
  auto fa = fft_forward(fft, ac);
  const auto fb = fft_forward(fft, b.to_complex());
  for (std::size_t i = 0; i < fa.size(); ++i) {
    if (kind == BindingKind::CircularCorrelation) fa[i] = std::conj(fa[i]);
    fa[i] *= fb[i];
  }
  auto out = fft_inverse(fft, fa);
  if (!a.is_complex() && !b.is_complex()) {
    RealVector re(out.size());
    std::ranges::transform(out, re.begin(), [](Complex z) { return z.real(); });
    return {scheme, std::move(re)};
  }
  return {scheme, ComplexVector(out.begin(), out.end())};
}

CodeVector unbind(const BindingScheme& scheme, const CodeVector& key, const EdgeEmbedding& e, Side side) {
  require_same_dim(key.dim(), e.dim());
  if (scheme.kind() != e.scheme().kind()) throw Error(Errc::InvalidArgument, "scheme mismatch");
  switch (scheme.kind()) {
    case BindingKind::Tensor: {
      auto contract = [&](const auto& m, auto k) {
        using T = std::decay_t<decltype(m.data[0])>;
        const auto& mat = m;
        std::vector<T> out(mat.rows, T{});
        for (std::size_t i = 0; i < mat.rows; ++i) {
          for (std::size_t j = 0; j < mat.cols; ++j) {
            if (side == Side::Left) out[j] += k[i] * mat(i, j);
            else out[i] += mat(i, j) * k[j];
          }
        }
        return out;
      };
      if (const auto* m = std::get_if<RealMatrix>(&e.payload()); m && !key.is_complex()) {
        return {key.scheme(), contract(*m, key.real())};
      }
      const ComplexMatrix cm =
          e.is_complex() ? std::get<ComplexMatrix>(e.payload()) : to_complex(std::get<RealMatrix>(e.payload()));
      const ComplexVector kc = key.to_complex();
      return {key.scheme(), contract(cm, std::span<const Complex>(kc))};
    }
    case BindingKind::Hadamard:
    case BindingKind::PermutedHadamard: {
      if (scheme.kind() == BindingKind::Hadamard && side != Side::Left) {
        throw Error(Errc::InvalidArgument, "Hadamard bindings are symmetric; side must be left");
      }
      const Permutation* perm = scheme.permutation();
      auto apply = [&](auto k, auto payload) {
        using T = typename decltype(payload)::element_type;
        using V = std::remove_const_t<T>;
        if (perm != nullptr && side == Side::Left) {
          // e = (P a) . b; divide out P a.
          const auto pk = perm->apply(k);
          const auto inv = hadamard_inverse<V>(key, std::span<const V>(pk));
          return hadamard(std::span<const V>(inv), payload);
        }
        const auto inv = hadamard_inverse<V>(key, k);
        auto out = hadamard(std::span<const V>(inv), payload);
        if (perm != nullptr) return perm->inverse().apply(std::span<const V>(out));
        return out;
      };
      if (!key.is_complex() && !e.is_complex()) {
        return {key.scheme(), apply(key.real(), std::span<const double>(std::get<RealVector>(e.payload())))};
      }
      const ComplexVector kc = key.to_complex();
      const ComplexVector pc =
          e.is_complex() ? std::get<ComplexVector>(e.payload()) : to_complex(std::get<RealVector>(e.payload()));
      return {key.scheme(), apply(std::span<const Complex>(kc), std::span<const Complex>(pc))};
    }
    case BindingKind::Convolution:
    case BindingKind::CircularCorrelation:
      break;
  }
  throw Error(Errc::UnsupportedScheme, std::string("no unbinding for ") + std::string(to_string(scheme.kind())));
}

EdgeEmbedding compose_edges(const EdgeEmbedding& e1, const EdgeEmbedding& e2) {
  if (!(e1.scheme() == e2.scheme())) throw Error(Errc::InvalidArgument, "scheme mismatch");
  require_same_dim(e1.dim(), e2.dim());
  const BindingKind kind = e1.scheme().kind();
  if (kind != BindingKind::Hadamard && kind != BindingKind::Tensor) {
    throw Error(Errc::UnsupportedComposition,
                std::string(to_string(kind)) + " bindings cannot compose edges");
  }
  const bool complex = e1.is_complex() || e2.is_complex();
  if (kind == BindingKind::Tensor) {
    if (!complex) {
      return {e1.scheme(), matmul(std::get<RealMatrix>(e1.payload()), std::get<RealMatrix>(e2.payload()))};
    }
    auto as_complex = [](const Payload& p) {
      return is_complex(p) ? std::get<ComplexMatrix>(p) : to_complex(std::get<RealMatrix>(p));
    };
    return {e1.scheme(), matmul(as_complex(e1.payload()), as_complex(e2.payload()))};
  }
  if (!complex) {
    const auto& x = std::get<RealVector>(e1.payload());
    const auto& y = std::get<RealVector>(e2.payload());
    return {e1.scheme(), hadamard(std::span<const double>(x), std::span<const double>(y))};
  }
  auto as_complex = [](const Payload& p) {
    return is_complex(p) ? std::get<ComplexVector>(p) : to_complex(std::get<RealVector>(p));
  };
  const auto x = as_complex(e1.payload());
  const auto y = as_complex(e2.payload());
  return {e1.scheme(), hadamard(std::span<const Complex>(x), std::span<const Complex>(y))};
}

Entries compression_view(BindingKind kind, const CodeVector& a, const CodeVector& b) {
  if (kind != BindingKind::Hadamard && kind != BindingKind::Convolution &&
      kind != BindingKind::CircularCorrelation) {
    throw Error(Errc::UnsupportedScheme, "compression views exist for Hadamard, convolution and correlation");
  }
  return with_common_scalar(a, b, [&](auto x, auto y) -> Entries {
    using T = typename decltype(x)::value_type;
    const auto m = outer(x, y);
    const std::size_t d = m.rows;
    std::vector<T> out(d, T{});
    for (std::size_t k = 0; k < d; ++k) {
      switch (kind) {
        case BindingKind::Hadamard: out[k] = m(k, k); break;
        case BindingKind::CircularCorrelation:
          for (std::size_t i = 0; i < d; ++i) out[k] += m(i, (i + k) % d);
          break;
        default:
          for (std::size_t i = 0; i < d; ++i) out[k] += m(i, (k + d - i) % d);
          break;
      }
    }
    return out;
  });
}

}  // namespace graphemb
