#pragma once

#include <stdexcept>
#include <string>

namespace slicemean {

// Values mirror slm_status in the public C header.
enum class ErrorCode : int {
  InvalidArgument = 1,
  RankDeficient = 2,
  ProjectionNotOnto = 3,
  Infeasible = 4,
  BelowMinN = 5,
  SliceEmpty = 6,
  NotSPD = 7,
  UnsupportedDimension = 8,
  NonFinite = 9,
  NotAdmissible = 10,
  Config = 11,
  Io = 12,
};

const char* error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace slicemean
