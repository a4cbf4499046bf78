#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace genverify {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller broke a precondition (dimension mismatch, bad index, wrong kind).
class UsageError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

// Carries the offending point when one is known.
class PointError : public Error {
 public:
  PointError(const std::string& what, std::vector<double> point);
  const std::vector<double>& point() const { return point_; }

 private:
  std::vector<double> point_;
};

class EvaluationError : public PointError {
 public:
  using PointError::PointError;
};

class DegeneracyError : public PointError {
 public:
  using PointError::PointError;
};

class FrameError : public PointError {
 public:
  using PointError::PointError;
};

// A tensor or structure fails a required algebraic property.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Scenario or manifest is inconsistent with what it declares.
class ConfigError : public Error {
 public:
  using Error::Error;
};

std::string format_point(const std::vector<double>& x);

}  // namespace genverify
