#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace soficrank {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: bad group tables, inconsistent dimensions, bad parameters.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Operands that live in different groups.
class GroupMismatch : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// A group element that a sofic level cannot evaluate.
class NotExpressible : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class UnsupportedGroup : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// A memory, size or degree guard refused the computation.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

class NumericalFailure : public Error {
 public:
  using Error::Error;
};

/// Text parse failure; `position` is a 0-based byte offset into `input`.
class ParseError : public ValidationError {
 public:
  ParseError(std::string message, std::string input, std::size_t position);

  const std::string& input() const noexcept { return input_; }
  std::size_t position() const noexcept { return position_; }
  const std::string& reason() const noexcept { return reason_; }

  /// Two-line rendering: the input followed by a caret under the offending byte.
  std::string caret() const;

 private:
  std::string reason_;
  std::string input_;
  std::size_t position_;
};

}  // namespace soficrank
