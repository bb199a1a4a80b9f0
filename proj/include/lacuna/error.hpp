#pragma once

#include <stdexcept>
#include <string>

namespace lacuna {

enum class Errc {
  TooLarge,
  TooShort,
  TooFewPoints,
  RoundingAmbiguous,
  NonIntegerRecurrence,
  NonPositiveTerm,
  GroundSetMismatch,
  IndexOutOfRange,
  ZeroModulus,
  RootFindingFailed,
  Parse,
};

inline const char* errc_name(Errc code) {
  switch (code) {
    case Errc::TooLarge: return "TooLarge";
    case Errc::TooShort: return "TooShort";
    case Errc::TooFewPoints: return "TooFewPoints";
    case Errc::RoundingAmbiguous: return "RoundingAmbiguous";
    case Errc::NonIntegerRecurrence: return "NonIntegerRecurrence";
    case Errc::NonPositiveTerm: return "NonPositiveTerm";
    case Errc::GroundSetMismatch: return "GroundSetMismatch";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::ZeroModulus: return "ZeroModulus";
    case Errc::RootFindingFailed: return "RootFindingFailed";
    case Errc::Parse: return "Parse";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the Errc kinds.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace lacuna
