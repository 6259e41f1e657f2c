#pragma once

#include <stdexcept>
#include <string>

namespace kllab {

// Base of every error raised by the library. The CLI maps these to exit
// status 1 and prints what() on stderr.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Checked coefficient arithmetic left the range of std::int64_t.
class OverflowError : public Error {
 public:
  using Error::Error;
};

// A product or lookup needed an element longer than the enumeration cap.
class OutOfRangeError : public Error {
 public:
  using Error::Error;
};

// Malformed group specification or matrix file.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Enumeration would exceed the configured element bound.
class ResourceLimitError : public Error {
 public:
  using Error::Error;
};

// A spherical table was handed to an antispherical-only routine or vice versa.
class FlavorMismatchError : public Error {
 public:
  using Error::Error;
};

// An invariant that the mathematics guarantees was found broken.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace kllab
