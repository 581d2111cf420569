#include "fraclimit/error.hpp"

namespace fraclimit {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Precondition: return "Precondition";
    case ErrorKind::MeanNotZero: return "MeanNotZero";
    case ErrorKind::RankUndetected: return "RankUndetected";
    case ErrorKind::DivergentIntegral: return "DivergentIntegral";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::NotPSD: return "NotPSD";
    case ErrorKind::EmbeddingFailed: return "EmbeddingFailed";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::QuadratureFailed: return "QuadratureFailed";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::WrongRegime: return "WrongRegime";
    case ErrorKind::GridTooShort: return "GridTooShort";
    case ErrorKind::EmptySample: return "EmptySample";
    case ErrorKind::DegenerateSeries: return "DegenerateSeries";
    case ErrorKind::DegeneratePath: return "DegeneratePath";
  }
  return "Unknown";
}

}  // namespace fraclimit
