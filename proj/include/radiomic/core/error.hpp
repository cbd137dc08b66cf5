#pragma once

#include <stdexcept>
#include <string>

namespace radiomic {

// Base of every exception thrown by the library. The CLI maps the concrete
// subclasses onto process exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid argument or violated precondition.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Malformed file contents (bad magic, truncated payload, broken header).
class FormatError : public Error {
 public:
  using Error::Error;
};

// Well-formed input using an encoding we do not handle.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Numerically degenerate input (all-zero data, empty truth sets, ...).
class DegenerateError : public Error {
 public:
  using Error::Error;
};

namespace detail {

inline void require(bool ok, const std::string& what) {
  if (!ok) throw ParameterError(what);
}

}  // namespace detail
}  // namespace radiomic
