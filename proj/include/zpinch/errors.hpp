#pragma once

#include <stdexcept>
#include <string>

namespace zpinch {

// Base class for everything the toolkit can throw deliberately.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct ConfigError : Error {
  using Error::Error;
};

// -(2/r^2) int_0^r s^2 p' ds came out negative: no real B_theta exists.
struct NonpositiveIntegrand : Error {
  using Error::Error;
};

struct AdmissibilityViolation : Error {
  using Error::Error;
};

struct AxisSingularity : Error {
  using Error::Error;
};

// Sausage criterion scan found no negative value on an admissible profile;
// the grid is too coarse to see the guaranteed sign change.
struct NoWitness : Error {
  using Error::Error;
};

struct QuadratureBlowup : Error {
  using Error::Error;
};

struct ConstraintViolation : Error {
  using Error::Error;
};

struct BVPFailure : Error {
  using Error::Error;
};

struct SolverStall : Error {
  using Error::Error;
};

struct NonConvergedGrid : Error {
  using Error::Error;
};

struct StabilityViolation : Error {
  using Error::Error;
};

struct InsufficientGrowth : Error {
  using Error::Error;
};

struct SupportOverflow : Error {
  using Error::Error;
};

struct SignFlip : Error {
  using Error::Error;
};

struct MissingArtifact : Error {
  using Error::Error;
};

}  // namespace zpinch
