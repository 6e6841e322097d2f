#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace gapm {

enum class ErrorCode {
  invalid_argument,   // bad sizes, malformed input, unknown names
  dimension_mismatch,
  empty_set,          // operation needs a nonempty polyhedron
  unbounded,          // volume of an unbounded set, unbounded master, ...
  infeasible,         // infeasible LP where feasibility is required
  degenerate,         // numerically ambiguous classification
  validation,         // problem data fails its invariants
  consistency,        // internal cross-check failed (mass conservation, ...)
  io,                 // file or JSON parse trouble
  internal,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string msg)
      : std::runtime_error(std::move(msg)), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode c, const std::string& msg) {
  throw Error(c, msg);
}

inline void require(bool ok, ErrorCode c, const std::string& msg) {
  if (!ok) fail(c, msg);
}

}  // namespace gapm
