#pragma once

#include <stdexcept>
#include <string>

namespace dqe {

enum class ErrorCategory { config, singular, model, numerical, io };

inline const char* to_string(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::config: return "config";
    case ErrorCategory::singular: return "singular";
    case ErrorCategory::model: return "model";
    case ErrorCategory::numerical: return "numerical";
    case ErrorCategory::io: return "io";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}
  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& what) : Error(ErrorCategory::config, what) {}
};

// raised when a denominator or an inverted block vanishes
struct SingularityError : Error {
  explicit SingularityError(const std::string& what, double condition = 0.0)
      : Error(ErrorCategory::singular, what), condition_number(condition) {}
  double condition_number;
};

struct ModelError : Error {
  explicit ModelError(const std::string& what) : Error(ErrorCategory::model, what) {}
};

struct NumericalError : Error {
  explicit NumericalError(const std::string& what) : Error(ErrorCategory::numerical, what) {}
};

struct IoError : Error {
  explicit IoError(const std::string& what) : Error(ErrorCategory::io, what) {}
};

}  // namespace dqe
