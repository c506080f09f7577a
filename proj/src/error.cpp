#include "graphemb/error.hpp"

namespace graphemb {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::InvalidDimension: return "invalid-dimension";
    case Errc::DimensionMismatch: return "dimension-mismatch";
    case Errc::UnsupportedScheme: return "unsupported-scheme";
    case Errc::SingularKey: return "singular-key";
    case Errc::UnsupportedComposition: return "unsupported-composition";
    case Errc::UnknownVertex: return "unknown-vertex";
    case Errc::EmptyCandidates: return "empty-candidates";
    case Errc::DomainError: return "domain-error";
    case Errc::InvalidArgument: return "invalid-argument";
    case Errc::ParseError: return "parse-error";
  }
  return "unknown";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace graphemb
