#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace lmnne {

/// Base of every error raised by the library. `error_class()` is a short,
/// stable token used by the command-line tool when reporting failures.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual std::string_view error_class() const noexcept { return "error"; }
};

/// Malformed input file content. The message carries `file:line`.
class ParseError : public Error {
 public:
  using Error::Error;
  std::string_view error_class() const noexcept override { return "parse"; }
};

/// Well-formed input that is inconsistent with the vocabulary or dataset.
class DataError : public Error {
 public:
  using Error::Error;
  std::string_view error_class() const noexcept override { return "data"; }
};

class IoError : public Error {
 public:
  using Error::Error;
  std::string_view error_class() const noexcept override { return "io"; }
};

class ConfigError : public Error {
 public:
  ConfigError(std::string key, const std::string& message)
      : Error(key.empty() ? message : key + ": " + message), key_(std::move(key)) {}
  std::string_view error_class() const noexcept override { return "config"; }
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

/// Embeddings were produced against a different vocabulary.
class FingerprintError : public Error {
 public:
  using Error::Error;
  std::string_view error_class() const noexcept override { return "fingerprint"; }
};

/// Training diverged (non-finite values, zero rows) or could not proceed.
class TrainingError : public Error {
 public:
  using Error::Error;
  std::string_view error_class() const noexcept override { return "training"; }
};

}  // namespace lmnne
