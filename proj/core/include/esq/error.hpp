#pragma once

#include <stdexcept>
#include <string>

namespace esq {

/// Base class of every error raised by the engine.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DivisionByZero : public Error {
 public:
  DivisionByZero() : Error("division by zero") {}
};

class PoleAtOne : public Error {
 public:
  PoleAtOne() : Error("denominator vanishes at q = 1") {}
};

class InvalidDimension : public Error {
 public:
  explicit InvalidDimension(int n)
      : Error("invalid dimension N = " + std::to_string(n) + " (need 3 <= N <= 15)") {}
};

class SpectralError : public Error {
 public:
  using Error::Error;
};

class DegreeExceeded : public Error {
 public:
  DegreeExceeded(int degree, int limit)
      : Error("degree " + std::to_string(degree) + " exceeds the reduction limit " +
              std::to_string(limit)) {}
};

class InvalidParameter : public Error {
 public:
  using Error::Error;
};

/// An identity that must hold by construction failed.
class DerivationError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class IndexOutOfRange : public Error {
 public:
  IndexOutOfRange(int index, int n)
      : Error("index " + std::to_string(index) + " out of range 1.." + std::to_string(n)) {}
};

}  // namespace esq
