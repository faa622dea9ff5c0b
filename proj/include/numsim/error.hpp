#pragma once

#include <stdexcept>
#include <string>

namespace numsim {

// Base class for every error the library raises. Callers that only need a
// diagnostic catch this; the subclasses exist for the cases a caller is
// expected to recover from.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class TopologyError : public Error {
 public:
  using Error::Error;
};

// Raised by link_term when flow <= min_rate; the caller switches to the
// buffer-drain branch.
class SaturatedBranch : public Error {
 public:
  using Error::Error;
};

// The least-squares estimator has no usable samples yet.
class InsufficientHistory : public Error {
 public:
  using Error::Error;
};

class CodecError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace numsim
