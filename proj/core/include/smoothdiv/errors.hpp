#pragma once

#include <stdexcept>
#include <string>

namespace smoothdiv {

// Base class for everything this library throws. The CLI maps subclasses to
// exit codes, so keep the taxonomy flat and explicit.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class DimensionMismatch : public Error {
public:
  using Error::Error;
};

class NotHermitian : public Error {
public:
  using Error::Error;
};

class NotPSD : public Error {
public:
  using Error::Error;
};

class TraceViolation : public Error {
public:
  using Error::Error;
};

class BadFactorization : public Error {
public:
  using Error::Error;
};

class NegativeEigenvalue : public Error {
public:
  using Error::Error;
};

class BadAlpha : public Error {
public:
  using Error::Error;
};

class SupportViolation : public Error {
public:
  using Error::Error;
};

class DomainError : public Error {
public:
  using Error::Error;
};

class ZeroVariance : public Error {
public:
  using Error::Error;
};

class SolverFailure : public Error {
public:
  using Error::Error;
};

class ModelError : public Error {
public:
  using Error::Error;
};

class AllRestartsFailed : public Error {
public:
  using Error::Error;
};

class EmptyGrid : public Error {
public:
  using Error::Error;
};

class TooLarge : public Error {
public:
  using Error::Error;
};

class NonUniformInput : public Error {
public:
  using Error::Error;
};

class EmptyFreeSet : public Error {
public:
  using Error::Error;
};

class ParseError : public Error {
public:
  using Error::Error;
};

} // namespace smoothdiv
