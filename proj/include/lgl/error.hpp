#pragma once

#include <stdexcept>
#include <string>

namespace lgl {

/// Base of every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical solver could not produce a result (no bracket, no
/// convergence, total internal reflection on a required path, ...).
class SolverError : public Error {
 public:
  using Error::Error;
};

class TotalInternalReflection : public SolverError {
 public:
  TotalInternalReflection(int interface_index, const std::string& what)
      : SolverError(what), interface_index_(interface_index) {}
  [[nodiscard]] int interface_index() const { return interface_index_; }

 private:
  int interface_index_;
};

/// Two level curves of a stack cross by more than the allowed tolerance.
class NestingError : public Error {
 public:
  NestingError(double lower, double upper, const std::string& what)
      : Error(what), lower_level_(lower), upper_level_(upper) {}
  [[nodiscard]] double lower_level() const { return lower_level_; }
  [[nodiscard]] double upper_level() const { return upper_level_; }

 private:
  double lower_level_;
  double upper_level_;
};

/// Malformed configuration or command-line input.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace lgl
