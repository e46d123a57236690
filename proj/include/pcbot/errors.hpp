#pragma once

#include <stdexcept>
#include <string>

namespace pcbot {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the operation's physical domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Total force has no sign change on the search bracket.
class NoEquilibriumError : public Error {
 public:
  using Error::Error;
};

class InvalidGeometryError : public Error {
 public:
  using Error::Error;
};

class DegenerateObjectiveError : public Error {
 public:
  using Error::Error;
};

class InfeasibleBoundsError : public Error {
 public:
  using Error::Error;
};

class CalibrationError : public Error {
 public:
  using Error::Error;
};

/// Malformed or invalid configuration input. Maps to CLI exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace pcbot
