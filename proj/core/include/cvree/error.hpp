#pragma once

#include <stdexcept>
#include <string>

namespace cvree {

/// Failure category. The command-line tool maps these onto exit codes.
enum class ErrorKind {
  validation,       // malformed or out-of-contract input
  numerical_guard,  // input is valid but sits on a divergence (pure direction, pairing failure, ...)
  search_failure,   // an optimizer or iterative procedure did not produce a usable result
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail_validation(const std::string& what) {
  throw Error(ErrorKind::validation, what);
}

[[noreturn]] inline void fail_guard(const std::string& what) {
  throw Error(ErrorKind::numerical_guard, what);
}

[[noreturn]] inline void fail_search(const std::string& what) {
  throw Error(ErrorKind::search_failure, what);
}

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::validation: return "validation";
    case ErrorKind::numerical_guard: return "numerical_guard";
    case ErrorKind::search_failure: return "search_failure";
  }
  return "unknown";
}

}  // namespace cvree
