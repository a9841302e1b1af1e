#pragma once

#include <stdexcept>
#include <string>

namespace flexhedge {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A query or input that violates an operation's precondition.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// A LinearProgram that breaks its structural invariants.
class MalformedProgram : public Error {
 public:
  using Error::Error;
};

/// The solver gave up (iteration cap or a singular basis).
class SolverFailure : public Error {
 public:
  using Error::Error;
};

/// Text input (case file, CSV) that cannot be parsed.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace flexhedge
