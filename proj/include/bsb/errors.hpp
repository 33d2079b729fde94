#pragma once

#include <stdexcept>
#include <string>

namespace bsb {

/// Operand sizes disagree (query vs secret, state vs oracle, ...).
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A beam whose output polarization is neither |0> nor |1>.
class ReadoutError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A beam fully absorbed by a polarizer.
class DegenerateBeamError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed netlist (cycle, undriven wire, double driver).
class NetlistError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace bsb
