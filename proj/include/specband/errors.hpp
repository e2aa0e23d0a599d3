#pragma once

#include <stdexcept>
#include <string>

namespace specband {

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Structural problems with a matrix description.
class StructureError : public Error {
 public:
  using Error::Error;
};

class MissingPivot : public StructureError {
 public:
  using StructureError::StructureError;
};

class PivotViolation : public StructureError {
 public:
  using StructureError::StructureError;
};

class TailUndefined : public StructureError {
 public:
  using StructureError::StructureError;
};

class InconsistentProfile : public StructureError {
 public:
  using StructureError::StructureError;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// Failures of floating point algorithms or singular numerical input.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class NumericalFailure : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class SingularBoundary : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class SingularZerothMoment : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Raised by a pipeline stage; carries the stage name.
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& what, bool numerical)
      : Error("[" + stage + "] " + what), stage_(std::move(stage)), numerical_(numerical) {}

  const std::string& stage() const noexcept { return stage_; }
  bool numerical() const noexcept { return numerical_; }

 private:
  std::string stage_;
  bool numerical_;
};

}  // namespace specband
