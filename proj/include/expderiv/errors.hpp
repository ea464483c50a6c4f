#pragma once

#include <stdexcept>
#include <string>

namespace expderiv {

// Every failure the library reports deliberately. exit_code() mirrors the
// CLI contract: 2 = malformed/inadmissible input, 1 = a computation ran and
// produced a negative verdict (no convergence, failed check, ...).
class Error : public std::runtime_error {
 public:
  Error(std::string msg, int code) : std::runtime_error(std::move(msg)), code_(code) {}
  int exit_code() const { return code_; }

 private:
  int code_;
};

struct SyntaxError : Error {
  SyntaxError(const std::string& msg, std::size_t position)
      : Error(msg + " at position " + std::to_string(position), 2), pos(position) {}
  std::size_t pos;
};

struct DomainError : Error {
  explicit DomainError(const std::string& msg) : Error(msg, 2) {}
};

struct ShapeError : Error {
  explicit ShapeError(const std::string& msg) : Error(msg, 2) {}
};

struct PreconditionError : Error {
  explicit PreconditionError(const std::string& msg) : Error(msg, 2) {}
};

struct IndexError : Error {
  explicit IndexError(const std::string& msg) : Error(msg, 2) {}
};

struct UnsupportedError : Error {
  explicit UnsupportedError(const std::string& msg) : Error(msg, 2) {}
};

struct OverflowError : Error {
  explicit OverflowError(const std::string& msg) : Error(msg, 1) {}
};

struct SingularJacobian : Error {
  explicit SingularJacobian(const std::string& msg) : Error(msg, 1) {}
};

struct NoConvergence : Error {
  explicit NoConvergence(const std::string& msg) : Error(msg, 1) {}
};

struct HenselConditionFailed : Error {
  explicit HenselConditionFailed(const std::string& msg) : Error(msg, 1) {}
};

struct InfeasibleTarget : Error {
  explicit InfeasibleTarget(const std::string& msg) : Error(msg, 1) {}
};

}  // namespace expderiv
