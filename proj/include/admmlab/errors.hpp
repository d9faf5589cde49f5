#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace admmlab {

// Caller passed data that violates an operation's precondition.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A subproblem minimization is unbounded below.
class Unbounded : public std::runtime_error {
 public:
  explicit Unbounded(const std::string& what, std::ptrdiff_t index = -1)
      : std::runtime_error(what), index_(index) {}

  // Coordinate or iteration index the failure is attributed to, -1 if none.
  std::ptrdiff_t index() const { return index_; }

 private:
  std::ptrdiff_t index_;
};

// A rate formula was requested outside the parameter regime where it is proven.
class OutOfRegime : public std::domain_error {
 public:
  explicit OutOfRegime(const std::string& condition)
      : std::domain_error("out of regime: " + condition), condition_(condition) {}

  const std::string& condition() const { return condition_; }

 private:
  std::string condition_;
};

class UnsupportedKind : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace admmlab
