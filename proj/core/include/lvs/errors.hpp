#pragma once

#include <stdexcept>
#include <string>

namespace lvs {

// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed manifest, RLE data, or log/schedule serialization.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Structurally valid input that violates a dataset invariant
// (out-of-bounds pixel, dangling reference, zero-length tube, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// EngineConfig or ScenarioConfig field out of its documented bounds.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Decision requested for a frame before the previous decision.
class TimelineError : public Error {
 public:
  using Error::Error;
};

// Frame index outside a tube's [0, length) range.
class OutOfRangeError : public Error {
 public:
  using Error::Error;
};

// Exhaustive oracle invoked on a pool above its enumeration bound.
class PoolTooLargeError : public Error {
 public:
  using Error::Error;
};

// Filesystem read/write failure; message carries the path.
class IoError : public Error {
 public:
  using Error::Error;
};

// Metrics requested without a ground-truth entry for a tube.
class MissingGroundTruthError : public Error {
 public:
  using Error::Error;
};

}  // namespace lvs
