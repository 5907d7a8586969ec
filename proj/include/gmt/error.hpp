#pragma once

#include <stdexcept>
#include <string>

namespace gmt {

enum class ErrorKind { config, budget, hypothesis };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Bad input or precondition violation.
struct ConfigError : Error {
  explicit ConfigError(const std::string& what) : Error(ErrorKind::config, what) {}
};

// Memory / angle / state-space budget exceeded.
struct BudgetError : Error {
  explicit BudgetError(const std::string& what) : Error(ErrorKind::budget, what) {}
};

// A requested construction is impossible under the stated hypotheses.
struct HypothesisError : Error {
  explicit HypothesisError(const std::string& what) : Error(ErrorKind::hypothesis, what) {}
};

inline const char* kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::config: return "config";
    case ErrorKind::budget: return "budget";
    case ErrorKind::hypothesis: return "hypothesis";
  }
  return "unknown";
}

inline int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::config: return 2;
    case ErrorKind::budget: return 3;
    case ErrorKind::hypothesis: return 4;
  }
  return 1;
}

}  // namespace gmt
