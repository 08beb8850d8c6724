#pragma once

#include <stdexcept>
#include <string>

namespace ripple {

// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad input data: schema violations, inconsistent artifacts, invalid
// configuration. Maps to CLI exit code 1.
class ValidationError : public Error {
public:
  explicit ValidationError(const std::string& msg) : Error(msg) {}
};

// Filesystem level failure: unreadable files, unwritable outputs.
// Maps to CLI exit code 2.
class IoError : public Error {
public:
  explicit IoError(const std::string& msg) : Error(msg) {}
};

}  // namespace ripple
