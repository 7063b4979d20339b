#pragma once

#include <stdexcept>
#include <string>

namespace hfv {

// All library failures derive from Error so callers can catch one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation (r <= 0, k outside [-1,1], ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Requested value lies outside the achievable range of a monotone branch.
class RangeError : public Error {
 public:
  using Error::Error;
};

// Caller violated a documented precondition (CFL bound, sizes).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Array dimensions of a consistent input set do not match.
class ContractError : public Error {
 public:
  using Error::Error;
};

// NaN or infinity produced during time stepping.
class NumericFault : public Error {
 public:
  using Error::Error;
};

// Model lacks the structure an operation depends on (e.g. unimodal flux for Godunov).
class UnsupportedModel : public Error {
 public:
  using Error::Error;
};

// Fixed-step integrator overshot |u| <= 1 by more than the clamp allowance.
class StepSizeError : public Error {
 public:
  using Error::Error;
};

// Characteristic crossing inside a preset meant to be smooth.
class PresetInvalid : public Error {
 public:
  using Error::Error;
};

// Rejected configuration; names the offending key and, when known, its line.
class ConfigError : public Error {
 public:
  ConfigError(std::string key, int line, const std::string& message)
      : Error((line > 0 ? "line " + std::to_string(line) + ": " : std::string()) + "key '" + key + "': " + message),
        key_(std::move(key)),
        line_(line) {}

  const std::string& key() const { return key_; }
  int line() const { return line_; }

 private:
  std::string key_;
  int line_;
};

}  // namespace hfv
