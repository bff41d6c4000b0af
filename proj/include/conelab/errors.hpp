#pragma once

#include <stdexcept>
#include <string>

namespace conelab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad parameter value or shape mismatch.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Allocation would exceed the configured memory cap.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// A support, box or Nyquist constraint cannot be met on the given grid.
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// Grid or quadrature too coarse for the requested scale.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

/// Configuration schema violation; the message carries the field path.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace conelab
