#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rootarr {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Derivative order outside [0, degree].
class InvalidOrder : public Error {
 public:
  using Error::Error;
};

// Operation needs exact-rational coefficients but got floating ones.
class ExactArithmeticRequired : public Error {
 public:
  using Error::Error;
};

class InvalidTolerance : public Error {
 public:
  using Error::Error;
};

// Syntax error in a polynomial or arrangement string. `position` is the
// zero-based byte offset of the offending character.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " at offset " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

// Arrangement whose multiplicity totals disagree with (n, s, m, m').
class InvalidArrangement : public Error {
 public:
  using Error::Error;
};

class InvalidParams : public Error {
 public:
  using Error::Error;
};

class NotApplicable : public Error {
 public:
  using Error::Error;
};

// Floating root computation could not tell equality from near-equality.
class ClusterAmbiguity : public Error {
 public:
  using Error::Error;
};

}  // namespace rootarr
