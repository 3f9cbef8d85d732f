#pragma once

#include <stdexcept>
#include <string>

namespace elan {

// Process exit codes shared by the library error hierarchy and the CLI.
enum class ExitCode : int {
  kSuccess = 0,
  kFailure = 1,
  kUsage = 2,
  kInputFormat = 3,
  kStructure = 4,
  kProvider = 5,
};

// Base class for all toolkit errors. Each subclass maps to one exit code so
// scripts can distinguish failure classes without parsing messages.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& message) : std::runtime_error(message) {}
  virtual ExitCode exit_code() const { return ExitCode::kFailure; }
};

// A required argument or option was invalid at the call boundary.
class UsageError : public Error {
 public:
  explicit UsageError(const std::string& message) : Error(message) {}
  ExitCode exit_code() const override { return ExitCode::kUsage; }
};

// ---- input format errors (exit code 3) ----

class InputFormatError : public Error {
 public:
  explicit InputFormatError(const std::string& message) : Error(message) {}
  ExitCode exit_code() const override { return ExitCode::kInputFormat; }
};

class MissingFileError : public InputFormatError {
 public:
  explicit MissingFileError(const std::string& path)
      : InputFormatError("missing file: " + path), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

class MalformedLineError : public InputFormatError {
 public:
  MalformedLineError(const std::string& path, std::size_t line_number,
                     const std::string& detail)
      : InputFormatError(path + ":" + std::to_string(line_number) + ": " +
                         detail),
        line_number_(line_number) {}
  std::size_t line_number() const { return line_number_; }

 private:
  std::size_t line_number_;
};

// Record-level parse failure with a human-readable locator.
class ParseError : public InputFormatError {
 public:
  ParseError(const std::string& locator, const std::string& detail)
      : InputFormatError(locator + ": " + detail), locator_(locator) {}
  const std::string& locator() const { return locator_; }

 private:
  std::string locator_;
};

// ---- structural errors (exit code 4) ----

class StructureError : public Error {
 public:
  explicit StructureError(const std::string& message) : Error(message) {}
  ExitCode exit_code() const override { return ExitCode::kStructure; }
};

class StructureViolationError : public StructureError {
 public:
  StructureViolationError(const std::string& conversation_id,
                          const std::string& rule, const std::string& detail)
      : StructureError("conversation " + conversation_id + " violates " +
                       rule + ": " + detail),
        conversation_id_(conversation_id),
        rule_(rule) {}
  const std::string& conversation_id() const { return conversation_id_; }
  const std::string& rule() const { return rule_; }

 private:
  std::string conversation_id_;
  std::string rule_;
};

class EmptyUtteranceError : public StructureError {
 public:
  explicit EmptyUtteranceError(const std::string& where)
      : StructureError("empty utterance at " + where) {}
};

class MixedRolesError : public StructureError {
 public:
  explicit MixedRolesError(const std::string& detail)
      : StructureError("mixed roles: " + detail) {}
};

class EmptyInputError : public StructureError {
 public:
  explicit EmptyInputError(const std::string& what)
      : StructureError("empty input: " + what) {}
};

class TooShortError : public StructureError {
 public:
  explicit TooShortError(const std::string& detail)
      : StructureError("series too short: " + detail) {}
};

class OutOfRangeError : public StructureError {
 public:
  OutOfRangeError(const std::string& field, const std::string& detail)
      : StructureError("out of range: " + field + " (" + detail + ")"),
        field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

class MissingSummaryError : public StructureError {
 public:
  explicit MissingSummaryError(const std::string& dataset_id)
      : StructureError("no trajectory summary for dataset: " + dataset_id),
        dataset_id_(dataset_id) {}
  const std::string& dataset_id() const { return dataset_id_; }

 private:
  std::string dataset_id_;
};

// ---- provider errors (exit code 5) ----

class ProviderError : public Error {
 public:
  ProviderError(const std::string& message, int status, int attempts)
      : Error(message + " (status " + std::to_string(status) + " after " +
              std::to_string(attempts) + " attempt(s))"),
        status_(status),
        attempts_(attempts) {}
  explicit ProviderError(const std::string& message)
      : Error(message), status_(0), attempts_(0) {}
  ExitCode exit_code() const override { return ExitCode::kProvider; }
  int status() const { return status_; }
  int attempts() const { return attempts_; }

 private:
  int status_;
  int attempts_;
};

class ReplayMissError : public ProviderError {
 public:
  explicit ReplayMissError(const std::string& digest)
      : ProviderError("no recorded exchange for request digest " + digest) {}
};

class MalformedCompletionError : public ProviderError {
 public:
  explicit MalformedCompletionError(const std::string& detail)
      : ProviderError("malformed completion: " + detail) {}
};

}  // namespace elan
