#pragma once

#include <stdexcept>
#include <string>

namespace jofc {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Input validation
class NonSquareError : public Error {
 public:
  using Error::Error;
};
class NegativeEntryError : public Error {
 public:
  using Error::Error;
};
class NonZeroDiagonalError : public Error {
 public:
  using Error::Error;
};
class AsymmetryError : public Error {
 public:
  using Error::Error;
};
class AllZeroError : public Error {
 public:
  using Error::Error;
};
class SizeMismatchError : public Error {
 public:
  using Error::Error;
};
class LengthMismatchError : public Error {
 public:
  using Error::Error;
};
class WOutOfRangeError : public Error {
 public:
  using Error::Error;
};
class NonFiniteInputError : public Error {
 public:
  using Error::Error;
};

// CSV ingestion
class ParseError : public Error {
 public:
  using Error::Error;
};
class RaggedRowsError : public Error {
 public:
  using Error::Error;
};

// Solver
class DisconnectedWeightsError : public Error {
 public:
  using Error::Error;
};
class DisconnectedFreePointError : public Error {
 public:
  using Error::Error;
};
class PositiveWeightOnMissingError : public Error {
 public:
  using Error::Error;
};
class NoProgressError : public Error {
 public:
  using Error::Error;
};
class TooFewValuesError : public Error {
 public:
  using Error::Error;
};
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

// Inference
class EmptySampleError : public Error {
 public:
  using Error::Error;
};
class AlphaOutOfRangeError : public Error {
 public:
  using Error::Error;
};
class InvalidRError : public Error {
 public:
  using Error::Error;
};

}  // namespace jofc
