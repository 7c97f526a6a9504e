#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace vp4l {

enum class ErrorKind {
  DegenerateLine,
  ParallelLines,
  BehindCamera,
  DegenerateQuad,
  SingularConfiguration,
  NonPositiveVolume,
  HeightMismatch,
  AmbiguousSelection,
  DegenerateObjective,
  ConfigError,
  SamplingExhausted,
  ParseError,
  IoError,
};

/// Stable snake_case name, used in CSV status columns and CLI diagnostics.
std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace vp4l
