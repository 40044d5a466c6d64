#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace billspec {

enum class ErrorCode {
  InvalidDomain,
  NotOnBoundary,
  VertexSingular,
  NoIntersection,
  GrazingHit,
  WrongDomain,
  OutOfRange,
  RootNotBracketed,
  InaccessibleLayer,
  SpectrumTruncated,
  NoSurfaceState,
  OutsideZone,
  ExceptionalSet,
  ConfigError,
};

std::string_view to_string(ErrorCode code);

/// Configuration-type errors map to CLI exit code 2, everything else to 3.
inline bool is_config_error(ErrorCode code) {
  return code == ErrorCode::InvalidDomain || code == ErrorCode::ConfigError ||
         code == ErrorCode::WrongDomain;
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace billspec
