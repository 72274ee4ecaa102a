#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace rwpe {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The closed-form Gaussian update produced a non-positive variance or a
/// vanishing normalizer; the Gaussian approximation does not hold here.
class DegenerateUpdate : public Error {
 public:
  using Error::Error;
};

/// The numerical posterior normalizer fell below the quadrature floor.
class QuadratureFailure : public Error {
 public:
  using Error::Error;
};

/// A measurement would exceed the walker's total experiment budget.
class BudgetExhausted : public Error {
 public:
  using Error::Error;
};

class ReplayMismatch : public Error {
 public:
  using Error::Error;
};

class ReplayExhausted : public Error {
 public:
  using Error::Error;
};

/// Every particle weight underflowed to zero after a reweighting step.
class ZeroPosterior : public Error {
 public:
  using Error::Error;
};

/// File-system or stream failure; the message carries the path.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Malformed record or summary document.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration. `key()` names the offending field.
class ConfigError : public Error {
 public:
  ConfigError(std::string key, const std::string& what)
      : Error(key.empty() ? what : key + ": " + what), key_(std::move(key)) {}

  [[nodiscard]] const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

}  // namespace rwpe
