#pragma once

#include <stdexcept>
#include <string>

namespace strucrep {

/// Malformed request: unknown group, unparsable file, bad flag values.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Well-formed input that violates a contract (asymmetric tensor, NaN,
/// model/group mismatch, unsymmetrized model where one is required).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace strucrep
