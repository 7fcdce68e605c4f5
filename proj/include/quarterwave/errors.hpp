#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace quarterwave {

/// Base class of every error thrown by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A function was evaluated outside its real domain, or produced a
/// non-finite value (ln of a non-positive number, division by zero,
/// 0 raised to a negative power, overflow, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Wave speed must satisfy a > 0.
class NonPositiveSpeed : public Error {
 public:
  using Error::Error;
};

/// A function handle was built or called with the wrong number of arguments.
class ArityMismatch : public Error {
 public:
  using Error::Error;
};

/// The power-law exponent must lie strictly between 0 and 1.
class AlphaOutOfRange : public Error {
 public:
  using Error::Error;
};

/// Grid violates the stability bound a*dt/dx <= 1.
class CflViolation : public Error {
 public:
  CflViolation(double nu, const std::string& what) : Error(what), nu_(nu) {}
  double nu() const noexcept { return nu_; }

 private:
  double nu_;
};

/// Adaptive quadrature hit its recursion limit before reaching the
/// requested tolerance.  best_estimate() is the value accumulated so far.
class MaxDepthExceeded : public Error {
 public:
  MaxDepthExceeded(double best, const std::string& what)
      : Error(what), best_(best) {}
  double best_estimate() const noexcept { return best_; }

 private:
  double best_;
};

/// Syntax or resolution error in an expression.  position() is the
/// 0-based character offset of the offending token.
class ParseError : public Error {
 public:
  ParseError(std::size_t position, const std::string& what)
      : Error(what), position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// Invalid or incomplete run configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace quarterwave
