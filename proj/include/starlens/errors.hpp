#pragma once

#include <stdexcept>
#include <string>

namespace starlens {

// Base of every error raised by the library. Callers that only care about
// "something went wrong inside starlens" catch this.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class PoleError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class ResourceError : public Error {
 public:
  using Error::Error;
};

class DegreeTooLarge : public Error {
 public:
  using Error::Error;
};

class ParityError : public Error {
 public:
  using Error::Error;
};

class SingularMap : public Error {
 public:
  using Error::Error;
};

class NumericalDegeneracy : public Error {
 public:
  using Error::Error;
};

class ZeroVector : public Error {
 public:
  using Error::Error;
};

// Raised only by operations that require an existing k-intersection body
// (kpz_ratio). k_intersection_body itself reports non-existence as a value.
class NotABody : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace starlens
