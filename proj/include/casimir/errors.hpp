#pragma once

#include <stdexcept>
#include <string>

namespace casimir {

/// Invalid model or run parameters (rejected at construction time).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised instead of returning an infinity when a quantity diverges.
class DivergenceError : public DomainError {
 public:
  DivergenceError(const std::string& what, std::string suggestion)
      : DomainError(what + " (" + suggestion + ")"), suggestion_(std::move(suggestion)) {}

  const std::string& suggestion() const noexcept { return suggestion_; }

 private:
  std::string suggestion_;
};

}  // namespace casimir
