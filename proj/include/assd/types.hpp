#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace assd {

using DenseMatrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;
using IndexList = std::vector<Index>;

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller broke a precondition (dimension mismatch, bad argument).
class ContractError : public Error {
 public:
  using Error::Error;
};

/// Input data is unusable (non-finite entries, out-of-range parameters).
class InputError : public Error {
 public:
  using Error::Error;
};

/// A deflation pivot column is numerically zero.
class DegeneratePivotError : public Error {
 public:
  using Error::Error;
};

/// Every remaining active column is degenerate; decimation cannot continue.
class DeadEndError : public Error {
 public:
  using Error::Error;
};

/// Solver or experiment configuration cannot be resolved.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// File could not be read or written, or its contents could not be parsed.
class IoError : public Error {
 public:
  using Error::Error;
};

/// A metric is undefined for the given arguments (e.g. relative error against zero).
class UndefinedMetricError : public Error {
 public:
  using Error::Error;
};

}  // namespace assd
