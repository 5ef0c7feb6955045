#pragma once

#include <stdexcept>
#include <string>

namespace obkit {

enum class ErrorKind {
  Parse,     // malformed input (JSON shape, literals, encodings)
  Invalid,   // well-formed input violating a documented precondition
  Check,     // a verified property failed to hold
  Budget,    // a bounded search ran out of budget
  Internal,  // invariant breach inside the library itself
};

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

private:
  ErrorKind kind_;
};

inline const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Invalid: return "invalid";
    case ErrorKind::Check: return "check";
    case ErrorKind::Budget: return "budget";
    case ErrorKind::Internal: return "internal";
  }
  return "unknown";
}

}  // namespace obkit
