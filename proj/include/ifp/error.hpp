#pragma once

#include <stdexcept>
#include <string>

namespace ifp {

/// Base of every error raised by the library. The CLI maps each subclass to
/// an exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Precondition violation: mismatched dimensions, empty inputs, bad indices.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A window or index falls outside its canvas.
class OutOfRange : public Error {
 public:
  using Error::Error;
};

/// The numerics have no meaningful answer (constant correlation input,
/// all-zero normalizer).
class DegenerateInput : public Error {
 public:
  using Error::Error;
};

/// Malformed file contents (bad magic, truncated payload, bad CSV row).
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Configuration could not be parsed or violates an invariant.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Re-throws the in-flight library error with `context` prepended, keeping
/// its dynamic type so callers can still dispatch on it.
[[noreturn]] void rethrow_with_context(const std::string& context);

}  // namespace ifp
