#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace densecode {

enum class ErrorKind {
  InvalidDimension,
  InvalidArgument,
  NotHermitian,
  NotPositiveSemidefinite,
  NotUnitary,
  NotOrthonormal,
  InvalidSpectrum,
  SpectrumMismatch,
  NotPartialEntanglement,
  DegenerateSpectrum,
  ParseError,
};

std::string_view to_string(ErrorKind kind) noexcept;

// Every failure raised by the library carries one of the kinds above so
// callers (the CLI in particular) can map them onto exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace densecode
