#include "thetalab/error.hpp"

namespace thetalab {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::LevelMismatch: return "LevelMismatch";
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::NotCoprime: return "NotCoprime";
    case ErrorKind::NotDivisible: return "NotDivisible";
    case ErrorKind::SingularCurve: return "SingularCurve";
    case ErrorKind::NotMinimalAtPrime: return "NotMinimalAtPrime";
    case ErrorKind::BadReduction: return "BadReduction";
    case ErrorKind::PrecisionUnreachable: return "PrecisionUnreachable";
    case ErrorKind::LevelTooLarge: return "LevelTooLarge";
    case ErrorKind::PrimeDividesLevel: return "PrimeDividesLevel";
    case ErrorKind::NoEigenline: return "NoEigenline";
    case ErrorKind::AmbiguousEigenline: return "AmbiguousEigenline";
    case ErrorKind::AllTwistsVanish: return "AllTwistsVanish";
    case ErrorKind::ReconstructionFailed: return "ReconstructionFailed";
    case ErrorKind::ConductorNotDividing: return "ConductorNotDividing";
    case ErrorKind::NotSquarefree: return "NotSquarefree";
    case ErrorKind::NotSurjective: return "NotSurjective";
    case ErrorKind::EvenPrime: return "EvenPrime";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::HypothesisViolated: return "HypothesisViolated";
    case ErrorKind::NotCoprimeToLevel: return "NotCoprimeToLevel";
    case ErrorKind::ConductorMismatch: return "ConductorMismatch";
    case ErrorKind::CharacterDoesNotFactor: return "CharacterDoesNotFactor";
    case ErrorKind::RankNotZero: return "RankNotZero";
    case ErrorKind::BoundTooLarge: return "BoundTooLarge";
    case ErrorKind::ToleranceUnreachable: return "ToleranceUnreachable";
    case ErrorKind::ChiNotCoprimeToLevel: return "ChiNotCoprimeToLevel";
    case ErrorKind::RecognitionFailed: return "RecognitionFailed";
    case ErrorKind::ValueVanishes: return "ValueVanishes";
    case ErrorKind::RamifiedCase: return "RamifiedCase";
    case ErrorKind::PrecisionExhausted: return "PrecisionExhausted";
    case ErrorKind::RamifiedPlace: return "RamifiedPlace";
    case ErrorKind::CharacterValueUnavailable: return "CharacterValueUnavailable";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::InvalidCurve: return "InvalidCurve";
    case ErrorKind::InvalidFieldSpec: return "InvalidFieldSpec";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace thetalab
