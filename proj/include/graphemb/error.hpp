#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace graphemb {

enum class Errc {
  InvalidDimension,
  DimensionMismatch,
  UnsupportedScheme,
  SingularKey,
  UnsupportedComposition,
  UnknownVertex,
  EmptyCandidates,
  DomainError,
  InvalidArgument,
  ParseError,
};

std::string_view to_string(Errc code) noexcept;

/// Every failure raised by the library carries one of the Errc kinds.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace graphemb
