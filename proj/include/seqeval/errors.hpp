#pragma once

#include <stdexcept>
#include <string>

namespace seqeval {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A metric or operation was called outside its domain (too few points,
/// mismatched dimensions, invalid parameter).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// Malformed run configuration. The message names the offending key.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed file content. The message names the file position.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace seqeval
