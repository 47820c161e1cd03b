#pragma once

#include <stdexcept>
#include <string>

namespace becurv {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed graph document or number literal.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Valid input that the requested computation is not defined for: unknown or
// isolated vertices, violated modification preconditions.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Non-finite matrices, singular systems, asymmetric input.
class LinalgError : public Error {
 public:
  using Error::Error;
};

// A caller-supplied function broke its declared contract (e.g. non-monotone
// samples seen during a star-product bisection).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

// Bad command-line syntax (grid or dimension literals, missing flags).
class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace becurv
