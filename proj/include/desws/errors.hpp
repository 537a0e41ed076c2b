// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace desws {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// -- geometry ---------------------------------------------------------------

class InvalidBox : public Error {
 public:
  using Error::Error;
};

/// Both boxes collapse to the same point; the center-distance penalty of the
/// DIoU loss is undefined.
class DegenerateGeometry : public Error {
 public:
  using Error::Error;
};

// -- distance / warning -----------------------------------------------------

class UnknownClass : public Error {
 public:
  explicit UnknownClass(const std::string& class_label)
      : Error("UnknownClass: no width entry for class '" + class_label + "'"),
        class_label_(class_label) {}
  const std::string& class_label() const { return class_label_; }

 private:
  std::string class_label_;
};

class ZeroPixelWidth : public Error {
 public:
  using Error::Error;
};

class NonPositiveInput : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// -- rank tests -------------------------------------------------------------

class EmptyGroup : public Error {
 public:
  using Error::Error;
};

class ExactTooLarge : public Error {
 public:
  using Error::Error;
};

class FewerThanTwoGroups : public Error {
 public:
  using Error::Error;
};

class FewerThanTwoObservations : public Error {
 public:
  using Error::Error;
};

class DuplicateThreshold : public Error {
 public:
  using Error::Error;
};

// -- evaluation -------------------------------------------------------------

class ZeroGroundTruth : public Error {
 public:
  using Error::Error;
};

class EmptyDataset : public Error {
 public:
  using Error::Error;
};

// -- se block ---------------------------------------------------------------

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

// -- simulator --------------------------------------------------------------

class BehindCamera : public Error {
 public:
  using Error::Error;
};

// -- ingestion --------------------------------------------------------------

/// Base for all file-format errors. Carries the 1-based line number when the
/// format is line-oriented (0 when not applicable).
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line = 0)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + message
                       : message),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class MalformedLine : public ParseError {
 public:
  using ParseError::ParseError;
};

class OutOfRangeField : public ParseError {
 public:
  using ParseError::ParseError;
};

class UnknownClassIndex : public ParseError {
 public:
  using ParseError::ParseError;
};

class MalformedRow : public ParseError {
 public:
  using ParseError::ParseError;
};

/// JSON document does not match the documented schema; the message carries
/// the offending field path.
class SchemaError : public ParseError {
 public:
  using ParseError::ParseError;
};

}  // namespace desws
