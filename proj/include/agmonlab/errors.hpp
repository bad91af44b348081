#pragma once

#include <stdexcept>
#include <string>

namespace agmonlab {

// Error codes for every failure mode the library reports. CLI maps these to
// exit codes (hypothesis failures are distinguished from inequality
// violations and from usage problems).
enum class Errc {
  NonPositiveMeasure,
  SelfLoop,
  AsymmetricInput,
  DuplicateEdge,
  SizeOverflow,
  BadParams,
  EmptySubset,
  EmptySet,
  EmptyComplement,
  GraphMismatch,
  NonPositiveWeight,
  NegativeWeight,
  NegativeLength,
  NoOrigin,
  NoBoundary,
  NonPositiveSupersolution,
  BadExponent,
  NonPositiveGap,
  SolverFailure,
  NearSingular,
  SupportViolation,
  EikonalFailed,
  HypothesisFailed,
  InsufficientExhaustion,
  NotNested,
  SizeGuard,
  ParseError,
  ConfigError,
  IOError,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& msg);
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] void fail(Errc code, const std::string& msg);

}  // namespace agmonlab
