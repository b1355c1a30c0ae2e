// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace cfkit {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Base for errors that can point at a 1-based partial-quotient index.
class IndexedError : public Error {
 public:
  explicit IndexedError(const std::string& what, std::optional<std::size_t> index = std::nullopt)
      : Error(index ? what + " (index " + std::to_string(*index) + ")" : what),
        message_(what),
        index_(index) {}

  std::optional<std::size_t> index() const noexcept { return index_; }
  const std::string& message() const noexcept { return message_; }

 private:
  std::string message_;
  std::optional<std::size_t> index_;
};

// 0/0 and friends: a degenerate continued fraction.
class DegenerateFraction : public IndexedError {
 public:
  using IndexedError::IndexedError;
};

class ZeroPartialNumerator : public IndexedError {
 public:
  explicit ZeroPartialNumerator(std::optional<std::size_t> index = std::nullopt)
      : IndexedError("zero partial numerator", index) {}
};

class ZeroPartialDenominator : public IndexedError {
 public:
  explicit ZeroPartialDenominator(std::optional<std::size_t> index = std::nullopt)
      : IndexedError("zero partial denominator", index) {}
};

class ZeroFactor : public IndexedError {
 public:
  explicit ZeroFactor(std::optional<std::size_t> index = std::nullopt)
      : IndexedError("zero equivalence factor", index) {}
};

/// Two consecutive values of a sequence handed to Bernoulli's construction coincide.
class RepeatedApproximant : public IndexedError {
 public:
  explicit RepeatedApproximant(std::optional<std::size_t> index = std::nullopt)
      : IndexedError("consecutive approximants coincide", index) {}
};

class PrecisionMismatch : public Error {
 public:
  PrecisionMismatch() : Error("operands carry different precisions") {}
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " at position " + std::to_string(position)), position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class UnknownFamily : public Error {
 public:
  explicit UnknownFamily(const std::string& name) : Error("unknown family: " + name) {}
};

}  // namespace cfkit
