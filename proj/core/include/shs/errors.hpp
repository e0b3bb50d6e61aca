#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace shs {

// Base class for all toolkit errors.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Expression source that does not lex or parse. offset() is the byte
// position into the source string where the problem was detected.
class ParseError : public Error {
public:
  ParseError(const std::string& message, std::size_t offset)
      : Error(message + " (at offset " + std::to_string(offset) + ")"),
        offset_(offset) {}

  std::size_t offset() const { return offset_; }

private:
  std::size_t offset_;
};

// An identifier that does not resolve against the declared symbols.
class UnknownSymbolError : public Error {
public:
  explicit UnknownSymbolError(const std::string& name)
      : Error("unknown symbol '" + name + "'"), name_(name) {}

  const std::string& name() const { return name_; }

private:
  std::string name_;
};

// Evaluation left the domain of a function: log of a non-positive value,
// square root of a negative value, division by zero, an ill-defined power,
// or a derivative at a non-differentiable point. where() is the offending
// subexpression, printed.
class EvalError : public Error {
public:
  EvalError(const std::string& message, const std::string& where)
      : Error(message + " in '" + where + "'"), where_(where) {}

  const std::string& where() const { return where_; }

private:
  std::string where_;
};

// A field-definition file was rejected; the message carries file:line.
class FieldFormatError : public Error {
public:
  using Error::Error;
};

// Too many sampled points failed to evaluate; the field is not
// well-defined on the requested sampling box.
class SamplingError : public Error {
public:
  using Error::Error;
};

// A Hamiltonian was requested for a field that failed the integrability
// check (and force was not set).
class NotHamiltonianError : public Error {
public:
  using Error::Error;
};

// A time step failed: the state diverged or the implicit solve did not
// converge. step_index() identifies the step.
class StepError : public Error {
public:
  StepError(const std::string& message, long step_index)
      : Error(message + " (step " + std::to_string(step_index) + ")"),
        step_index_(step_index) {}

  long step_index() const { return step_index_; }

private:
  long step_index_;
};

}  // namespace shs
