#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace coarse {

// Every failure the library raises carries one of these codes so callers
// (notably the CLI exit-code contract) can dispatch without string matching.
enum class Errc {
  // metric
  NotSquare,
  NonFinite,
  Asymmetry,
  NegativeDistance,
  NonZeroDiagonal,
  ZeroOffDiagonal,
  TriangleViolation,
  Disconnected,
  MixedArity,
  BadNorm,
  BadPoint,
  EmptySet,
  // simplex
  InvalidWeights,
  NotARetraction,
  SupportEscapes,
  NotACover,
  // verify
  BadMode,
  EmptyMember,
  // covers
  NotTwoSDisjoint,
  NotAGrid,
  ScaleTooSmall,
  BadTree,
  // extend
  PreconditionViolated,
  EmptySubset,
  NotRDisjoint,
  BudgetTooSmall,
  Underflow,
  BadEpsilon,
  ScheduleMismatch,
  VerificationFailed,
  ModulusDomain,
  // io / cli
  BadParams,
  ParseError,
  UnknownPoint,
};

std::string_view to_string(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace coarse
