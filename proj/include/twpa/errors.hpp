#pragma once

#include <stdexcept>
#include <string>

namespace twpa {

/// A parameter violates its documented precondition (non-positive field, bad harmonic, ...).
class InvalidParameter : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Argument outside the mathematical domain of a model (alpha > 1, log of a value <= 1, pole).
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// A fit cannot be posed with the supplied data.
class IllPosedError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Two spectra that must share a frequency grid do not.
class GridMismatchError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file.
class ParseError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace twpa
