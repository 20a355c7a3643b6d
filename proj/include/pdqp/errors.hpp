#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pdqp {

/// Violated precondition or broken data-structure invariant.
class ContractViolation : public std::logic_error {
 public:
  explicit ContractViolation(const std::string& what) : std::logic_error(what) {}
};

/// Malformed input (QPS text, JSON documents, checkpoints).
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line > 0 ? what + " (line " + std::to_string(line) + ")" : what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_ = 0;
};

/// Non-finite values appeared mid-computation; `index` is the inner step or
/// layer (or optimizer step) at which the blow-up was detected.
class DivergedError : public std::runtime_error {
 public:
  DivergedError(const std::string& what, std::size_t index)
      : std::runtime_error(what + " (at index " + std::to_string(index) + ")"), index_(index) {}
  std::size_t index() const { return index_; }

 private:
  std::size_t index_ = 0;
};

}  // namespace pdqp
