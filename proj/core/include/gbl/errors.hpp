#pragma once

#include <stdexcept>
#include <string>

namespace gbl {

// Malformed or out-of-range caller input (bad arm index, bad config value).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Input that is well-formed but has no valid answer (e.g. unobservable graph).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Broken internal state; indicates a bug rather than bad input.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace gbl
