#include "soficrank/errors.hpp"

namespace soficrank {

ParseError::ParseError(std::string message, std::string input,
                       std::size_t position)
    : ValidationError(message + " at position " + std::to_string(position)),
      reason_(std::move(message)),
      input_(std::move(input)),
      position_(position) {}

std::string ParseError::caret() const {
  return input_ + "\n" + std::string(position_, ' ') + "^";
}

}  // namespace soficrank
