#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace riskcore {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// Base for all library errors. Subclasses name the violated contract.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad user-supplied configuration (CLI exit code 2).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Bad or degenerate data (CLI exit code 3).
class DataError : public Error {
 public:
  using Error::Error;
};

#define RISKCORE_DEFINE_ERROR(NAME, BASE)                \
  class NAME : public BASE {                             \
   public:                                               \
    explicit NAME(const std::string& msg) : BASE(msg) {} \
  }

RISKCORE_DEFINE_ERROR(ShapeMismatch, DataError);
RISKCORE_DEFINE_ERROR(IndexOutOfRange, DataError);
RISKCORE_DEFINE_ERROR(NonFiniteValue, DataError);
RISKCORE_DEFINE_ERROR(EmptyMatrix, DataError);
RISKCORE_DEFINE_ERROR(DimensionMismatch, DataError);
RISKCORE_DEFINE_ERROR(DegenerateSplit, DataError);
RISKCORE_DEFINE_ERROR(MissingClass, DataError);
RISKCORE_DEFINE_ERROR(TooFewSamples, DataError);
RISKCORE_DEFINE_ERROR(EmptyBatch, DataError);
RISKCORE_DEFINE_ERROR(InvalidK, ConfigError);
RISKCORE_DEFINE_ERROR(LengthMismatch, DataError);
RISKCORE_DEFINE_ERROR(NonBinary, DataError);
RISKCORE_DEFINE_ERROR(DegenerateSamples, DataError);
RISKCORE_DEFINE_ERROR(MissingSuspectedColumn, DataError);
RISKCORE_DEFINE_ERROR(InvalidFraction, ConfigError);
RISKCORE_DEFINE_ERROR(InvalidConfig, ConfigError);
RISKCORE_DEFINE_ERROR(MissingArtifacts, DataError);
RISKCORE_DEFINE_ERROR(NonFiniteInput, DataError);

#undef RISKCORE_DEFINE_ERROR

}  // namespace riskcore
