#pragma once

#include <stdexcept>
#include <string>

namespace msot {

/// Machine-readable category carried by every library error.
enum class ErrorKind { Argument, Budget, Structural, Scope, Format, Signature };

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Argument: return "argument";
    case ErrorKind::Budget: return "budget";
    case ErrorKind::Structural: return "structural";
    case ErrorKind::Scope: return "scope";
    case ErrorKind::Format: return "format";
    case ErrorKind::Signature: return "signature";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

struct ArgumentError : Error {
  explicit ArgumentError(const std::string& w) : Error(ErrorKind::Argument, w) {}
};
struct BudgetError : Error {
  explicit BudgetError(const std::string& w) : Error(ErrorKind::Budget, w) {}
};
struct StructuralError : Error {
  explicit StructuralError(const std::string& w) : Error(ErrorKind::Structural, w) {}
};
struct ScopeError : Error {
  explicit ScopeError(const std::string& w) : Error(ErrorKind::Scope, w) {}
};
struct FormatError : Error {
  explicit FormatError(const std::string& w) : Error(ErrorKind::Format, w) {}
};
struct SignatureError : Error {
  explicit SignatureError(const std::string& w) : Error(ErrorKind::Signature, w) {}
};

}  // namespace msot
