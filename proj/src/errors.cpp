#include "agmonlab/errors.hpp"

namespace agmonlab {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::NonPositiveMeasure: return "NonPositiveMeasure";
    case Errc::SelfLoop: return "SelfLoop";
    case Errc::AsymmetricInput: return "AsymmetricInput";
    case Errc::DuplicateEdge: return "DuplicateEdge";
    case Errc::SizeOverflow: return "SizeOverflow";
    case Errc::BadParams: return "BadParams";
    case Errc::EmptySubset: return "EmptySubset";
    case Errc::EmptySet: return "EmptySet";
    case Errc::EmptyComplement: return "EmptyComplement";
    case Errc::GraphMismatch: return "GraphMismatch";
    case Errc::NonPositiveWeight: return "NonPositiveWeight";
    case Errc::NegativeWeight: return "NegativeWeight";
    case Errc::NegativeLength: return "NegativeLength";
    case Errc::NoOrigin: return "NoOrigin";
    case Errc::NoBoundary: return "NoBoundary";
    case Errc::NonPositiveSupersolution: return "NonPositiveSupersolution";
    case Errc::BadExponent: return "BadExponent";
    case Errc::NonPositiveGap: return "NonPositiveGap";
    case Errc::SolverFailure: return "SolverFailure";
    case Errc::NearSingular: return "NearSingular";
    case Errc::SupportViolation: return "SupportViolation";
    case Errc::EikonalFailed: return "EikonalFailed";
    case Errc::HypothesisFailed: return "HypothesisFailed";
    case Errc::InsufficientExhaustion: return "InsufficientExhaustion";
    case Errc::NotNested: return "NotNested";
    case Errc::SizeGuard: return "SizeGuard";
    case Errc::ParseError: return "ParseError";
    case Errc::ConfigError: return "ConfigError";
    case Errc::IOError: return "IOError";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& msg)
    : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}

void fail(Errc code, const std::string& msg) { throw Error(code, msg); }

}  // namespace agmonlab
