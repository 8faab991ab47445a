#pragma once

#include <stdexcept>
#include <string>

namespace disclab {

// Failure categories surfaced across the library. The command line tool maps
// capacity errors to its own exit code; everything else is an input error.
enum class ErrorKind {
  dimension,     // mismatched vector/matrix sizes
  parameter,     // out-of-range or inconsistent arguments
  capacity,      // input exceeds a configured enumeration cap
  generation,    // sampling budget exhausted
  construction,  // instance unsuitable for a reduction
  precondition,  // a documented operation precondition failed
  validation,    // a value object violates its invariants
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace disclab
