#ifndef BTRANK_ERRORS_H_
#define BTRANK_ERRORS_H_

#include <exception>
#include <optional>
#include <string>
#include <utility>

#include "btrank/types.h"

namespace btrank {

// Error families map onto CLI exit codes.
enum class ErrorFamily {
  kExistence = 1,
  kParse = 2,
  kNonConvergence = 3,
  kConfig = 4,
};

class Error : public std::exception {
 public:
  Error(ErrorFamily family, std::string message)
      : family_(family), message_(std::move(message)) {}

  const char* what() const noexcept override { return message_.c_str(); }
  ErrorFamily family() const { return family_; }

  // Prefixes the message with "<context>: ", e.g. the epsilon of a sweep.
  void AddContext(const std::string& context) {
    message_ = context + ": " + message_;
  }

 private:
  ErrorFamily family_;
  std::string message_;
};

// Malformed input. `location` is a 1-based line (CSV) or 0-based element
// index (JSON) when one applies.
class ParseError : public Error {
 public:
  explicit ParseError(std::string message,
                      std::optional<int> location = std::nullopt)
      : Error(ErrorFamily::kParse, std::move(message)), location_(location) {}
  std::optional<int> location() const { return location_; }

 private:
  std::optional<int> location_;
};

class SelfPlayError : public ParseError {
 public:
  SelfPlayError(std::string message, std::optional<int> location)
      : ParseError(std::move(message), location) {}
};

class ShapeError : public ParseError {
 public:
  explicit ShapeError(std::string message) : ParseError(std::move(message)) {}
};

class NegativeCountError : public ParseError {
 public:
  explicit NegativeCountError(std::string message)
      : ParseError(std::move(message)) {}
};

class EmptyInputError : public ParseError {
 public:
  explicit EmptyInputError(std::string message)
      : ParseError(std::move(message)) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(std::string message)
      : Error(ErrorFamily::kConfig, std::move(message)) {}
};

class NonPositiveEpsilonError : public ConfigError {
 public:
  explicit NonPositiveEpsilonError(std::string message)
      : ConfigError(std::move(message)) {}
};

class DimensionError : public ConfigError {
 public:
  explicit DimensionError(std::string message)
      : ConfigError(std::move(message)) {}
};

class ThetaDomainError : public ConfigError {
 public:
  explicit ThetaDomainError(std::string message)
      : ConfigError(std::move(message)) {}
};

// The model's estimate does not exist for this data: a connectivity
// condition fails. Carries the partition that demonstrates the failure.
class ExistenceError : public Error {
 public:
  ExistenceError(std::string message, PartitionWitness witness)
      : Error(ErrorFamily::kExistence, std::move(message)),
        witness_(std::move(witness)) {}
  const PartitionWitness& witness() const { return witness_; }

 private:
  PartitionWitness witness_;
};

class NoTiesError : public Error {
 public:
  explicit NoTiesError(std::string message)
      : Error(ErrorFamily::kExistence, std::move(message)) {}
};

class VenuelessDataError : public Error {
 public:
  explicit VenuelessDataError(std::string message)
      : Error(ErrorFamily::kExistence, std::move(message)) {}
};

class NonConvergenceError : public Error {
 public:
  NonConvergenceError(std::string message, FitResult result)
      : Error(ErrorFamily::kNonConvergence, std::move(message)),
        result_(std::move(result)) {}
  const FitResult& result() const { return result_; }

 private:
  FitResult result_;
};

}  // namespace btrank

#endif  // BTRANK_ERRORS_H_
