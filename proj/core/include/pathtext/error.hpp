#pragma once

#include <stdexcept>
#include <string>

namespace pathtext {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A file could not be read or decoded (missing path, malformed UTF-8, bad manifest row).
class IngestionError : public Error {
 public:
  using Error::Error;
};

/// Input data violates a documented invariant (duplicate id, empty text, bad config).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A model could not be fitted from the given data.
class FitError : public Error {
 public:
  using Error::Error;
};

/// Feature dimensions disagree between data and model.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A persisted artifact does not parse.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace pathtext
