#pragma once

#include <stdexcept>
#include <string>

namespace bofc {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Two agents connected by a sensing edge are (numerically) at the same point.
struct CoincidentAgents : Error {
  explicit CoincidentAgents(const std::string& what, int edge = -1, int agent = -1)
      : Error(what), edge_index(edge), agent_index(agent) {}
  int edge_index;   // 0-based edge index, -1 if not applicable
  int agent_index;  // 1-based sensing agent, -1 if not applicable
};

struct ZeroVector : Error {
  using Error::Error;
};

struct DimensionMismatch : Error {
  using Error::Error;
};

/// Sum of projection matrices is not invertible (all bearings parallel).
struct SingularProjectionSum : Error {
  using Error::Error;
};

struct NotOrderedLFF : Error {
  using Error::Error;
};

/// Bearings too close to parallel for the null-space construction.
struct DegenerateBearings : Error {
  using Error::Error;
};

/// Measured equilibrium bearings match neither the target set nor its negation.
struct InconsistentConfiguration : Error {
  using Error::Error;
};

struct EmptyTrajectory : Error {
  using Error::Error;
};

struct UnknownScenario : Error {
  using Error::Error;
};

struct NotSubgraph : Error {
  using Error::Error;
};

struct MismatchedTargets : Error {
  using Error::Error;
};

/// A structural invariant of an input object is violated.
struct ValidationError : Error {
  using Error::Error;
};

/// Malformed input file (syntax, missing field, wrong type).
struct ParseError : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

}  // namespace bofc
