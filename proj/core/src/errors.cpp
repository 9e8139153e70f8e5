#include "densecode/errors.hpp"

namespace densecode {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidDimension: return "InvalidDimension";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NotPositiveSemidefinite: return "NotPositiveSemidefinite";
    case ErrorKind::NotUnitary: return "NotUnitary";
    case ErrorKind::NotOrthonormal: return "NotOrthonormal";
    case ErrorKind::InvalidSpectrum: return "InvalidSpectrum";
    case ErrorKind::SpectrumMismatch: return "SpectrumMismatch";
    case ErrorKind::NotPartialEntanglement: return "NotPartialEntanglement";
    case ErrorKind::DegenerateSpectrum: return "DegenerateSpectrum";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace densecode
