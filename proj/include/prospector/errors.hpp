#pragma once

#include <stdexcept>
#include <string>

namespace prospector {

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A table or argument breaks a documented invariant.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Some evidence-state pair has zero probability, so conditioning on it is undefined.
class ZeroMarginal : public Error {
 public:
  using Error::Error;
};

/// An evidence base rate is 0 or 1; PROSPECTOR link parameters do not exist.
class DegenerateBaseRate : public Error {
 public:
  using Error::Error;
};

/// An iterative scaling loop hit its iteration cap.
class NoConvergence : public Error {
 public:
  NoConvergence(const std::string& what, double deviation, int iterations)
      : Error(what), deviation_(deviation), iterations_(iterations) {}

  double deviation() const noexcept { return deviation_; }
  int iterations() const noexcept { return iterations_; }

 private:
  double deviation_;
  int iterations_;
};

/// The requested evidence marginals cannot be met given the table's zero cells.
class Infeasible : public Error {
 public:
  using Error::Error;
};

/// The closed-form mixture was asked for on a table whose evidence is not independent.
class NotIndependent : public Error {
 public:
  using Error::Error;
};

class EmptyEvidence : public Error {
 public:
  using Error::Error;
};

}  // namespace prospector
