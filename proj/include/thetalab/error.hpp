#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace thetalab {

enum class ErrorKind {
  LevelMismatch,
  DivisionByZero,
  NotCoprime,
  NotDivisible,
  SingularCurve,
  NotMinimalAtPrime,
  BadReduction,
  PrecisionUnreachable,
  LevelTooLarge,
  PrimeDividesLevel,
  NoEigenline,
  AmbiguousEigenline,
  AllTwistsVanish,
  ReconstructionFailed,
  ConductorNotDividing,
  NotSquarefree,
  NotSurjective,
  EvenPrime,
  IndexOutOfRange,
  HypothesisViolated,
  NotCoprimeToLevel,
  ConductorMismatch,
  CharacterDoesNotFactor,
  RankNotZero,
  BoundTooLarge,
  ToleranceUnreachable,
  ChiNotCoprimeToLevel,
  RecognitionFailed,
  ValueVanishes,
  RamifiedCase,
  PrecisionExhausted,
  RamifiedPlace,
  CharacterValueUnavailable,
  ParseError,
  InvalidCurve,
  InvalidFieldSpec,
  InvalidArgument,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries one of the kinds above so
/// callers (and the CLI) can dispatch on it without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace thetalab
