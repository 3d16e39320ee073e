#pragma once

#include <stdexcept>
#include <string>

namespace twistlab {

/// Failure classes surfaced by the library. Every guard that rejects an
/// input or a degenerate configuration throws an Error carrying one of
/// these codes, so callers (and tests) can dispatch without string
/// matching.
enum class ErrorCode {
  AxisUndefined,
  TraceMismatch,
  DegenerateCenter,
  NotSpecialOrthogonal,
  NotTransitive,
  UnknownName,
  BasepointOutsideCylinder,
  ParseError,
  UnassignedGenerator,
  NoConvergence,
  DegenerateCycle,
  DegenerateSphere,
  CentralHolonomy,
  HypothesisViolation,
  Degenerate,
  UndefinedRatio,
  StepFailure,
  InvalidArgument,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + detail),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& detail) {
  throw Error(code, detail);
}

}  // namespace twistlab
