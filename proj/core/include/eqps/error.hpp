#pragma once

#include <stdexcept>
#include <string>

namespace eqps {

// Error taxonomy shared by all modules. `kind` distinguishes malformed input,
// violated preconditions and algorithmic failures so the CLI can map them to
// distinct exit codes.
enum class ErrorKind { BadInput, Precondition, Algorithm };

enum class ErrorCode {
  GroupTooLarge,
  MalformedAction,
  GroupMismatch,
  NotEffective,
  ZeroExponent,
  NotUnit,
  NonUnitConstant,
  NoConvergence,
  ExponentVanishes,
  NotUnimodular,
  NonIntegerEntry,
  NonIntegralChi,
  InconsistentChain,
  NonAbelianInterior,
  NotASemigroupCharacteristic,
  NotRecognized,
  NonIntegralSolution,
  NoSeparation,
  InconsistentSeparations,
  HypothesisViolated,
  MissingFactor,
  NoSmoothCurvetteFactor,
  UnknownFixture,
  BadFile
};

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, ErrorKind kind, const std::string& msg)
      : std::runtime_error(msg), code_(code), kind_(kind) {}

  ErrorCode code() const { return code_; }
  ErrorKind kind() const { return kind_; }

private:
  ErrorCode code_;
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorCode code, ErrorKind kind, const std::string& msg) {
  throw Error(code, kind, msg);
}

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::GroupTooLarge: return "GroupTooLarge";
    case ErrorCode::MalformedAction: return "MalformedAction";
    case ErrorCode::GroupMismatch: return "GroupMismatch";
    case ErrorCode::NotEffective: return "NotEffective";
    case ErrorCode::ZeroExponent: return "ZeroExponent";
    case ErrorCode::NotUnit: return "NotUnit";
    case ErrorCode::NonUnitConstant: return "NonUnitConstant";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::ExponentVanishes: return "ExponentVanishes";
    case ErrorCode::NotUnimodular: return "NotUnimodular";
    case ErrorCode::NonIntegerEntry: return "NonIntegerEntry";
    case ErrorCode::NonIntegralChi: return "NonIntegralChi";
    case ErrorCode::InconsistentChain: return "InconsistentChain";
    case ErrorCode::NonAbelianInterior: return "NonAbelianInterior";
    case ErrorCode::NotASemigroupCharacteristic: return "NotASemigroupCharacteristic";
    case ErrorCode::NotRecognized: return "NotRecognized";
    case ErrorCode::NonIntegralSolution: return "NonIntegralSolution";
    case ErrorCode::NoSeparation: return "NoSeparation";
    case ErrorCode::InconsistentSeparations: return "InconsistentSeparations";
    case ErrorCode::HypothesisViolated: return "HypothesisViolated";
    case ErrorCode::MissingFactor: return "MissingFactor";
    case ErrorCode::NoSmoothCurvetteFactor: return "NoSmoothCurvetteFactor";
    case ErrorCode::UnknownFixture: return "UnknownFixture";
    case ErrorCode::BadFile: return "BadFile";
  }
  return "Unknown";
}

} // namespace eqps
