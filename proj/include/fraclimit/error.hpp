#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fraclimit {

enum class ErrorKind {
  Precondition,
  MeanNotZero,
  RankUndetected,
  DivergentIntegral,
  TooLarge,
  NotPSD,
  EmbeddingFailed,
  Overflow,
  QuadratureFailed,
  DomainError,
  WrongRegime,
  GridTooShort,
  EmptySample,
  DegenerateSeries,
  DegeneratePath,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries a machine-readable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) throw Error(kind, what);
}

}  // namespace fraclimit
