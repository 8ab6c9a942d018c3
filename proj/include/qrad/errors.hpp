#pragma once

#include <stdexcept>
#include <string>

namespace qrad {

enum class ErrorKind {
  Domain,          // argument outside the mathematical domain of an operation
  Validation,      // invalid geometric or configuration input
  Geometry,        // boundary data violates a graph or convexity condition
  Incompatibility, // (Omega, A) fails the compatibility test
  Numeric,         // root not bracketed or similar numerical failure
  Configuration,   // experiment parameters inconsistent (e.g. step too coarse)
  Resolution,      // grid window or spacing insufficient for the requested quantity
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace qrad
