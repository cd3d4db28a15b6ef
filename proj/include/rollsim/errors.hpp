#pragma once

#include <stdexcept>
#include <string>

namespace rollsim {

// Invalid physical parameters (non-positive mass/radius, core orbit outside shell, ...).
struct InvalidParams : std::runtime_error {
  explicit InvalidParams(const std::string& what) : std::runtime_error(what) {}
};

// The 2x2 generalized mass matrix lost positive definiteness / invertibility.
struct SingularMassMatrix : std::runtime_error {
  explicit SingularMassMatrix(const std::string& what) : std::runtime_error(what) {}
};

// An integration step produced NaN/Inf state components.
struct NonFiniteState : std::runtime_error {
  explicit NonFiniteState(const std::string& what) : std::runtime_error(what) {}
};

// Config/scenario semantic errors (bad ranges, unknown channels, ...).
struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Structured-text parse failure; message carries file, line and field context.
struct ParseError : std::runtime_error {
  ParseError(const std::string& what, std::string key_, int line_)
      : std::runtime_error(what), key(std::move(key_)), line(line_) {}
  std::string key;  // offending key/field, empty if not applicable
  int line;         // 1-based line number, 0 if not applicable
};

// Analysis window contains no samples.
struct EmptyWindow : std::runtime_error {
  explicit EmptyWindow(const std::string& what) : std::runtime_error(what) {}
};

// Two trajectories share no common time range.
struct NoOverlap : std::runtime_error {
  explicit NoOverlap(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace rollsim
