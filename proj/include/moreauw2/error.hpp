// Error taxonomy shared by the C++ core and the C API.

#ifndef MOREAUW2_ERROR_HPP
#define MOREAUW2_ERROR_HPP

#include <stdexcept>
#include <string>

namespace mw2 {

// Codes are stable integers; the C API exposes the same values.
enum class ErrorCode : int {
  ok = 0,
  empty_input = 1,
  non_finite_entry = 2,
  dimension_mismatch = 3,
  size_mismatch = 4,
  bad_delta = 5,
  non_spd = 6,
  too_large = 7,
  no_convergence = 8,
  degenerate = 9,
  solver_stall = 10,
  non_monotone_map = 11,
  grid_out_of_band = 12,
  io_error = 13,
  invalid_argument = 14,
  internal = 15,
};

const char* error_code_name(ErrorCode code);

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

}  // namespace mw2

#endif
