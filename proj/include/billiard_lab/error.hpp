#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace billiard_lab {

enum class ErrorCode {
  invalid_argument,
  dimension_mismatch,
  not_closed,
  non_positive_speed,
  not_convex,
  not_strictly_convex,
  invariant_violated,
  off_curve,
  tangency,
  not_inward,
  not_bracketed,
  ambiguous_fit,
  degenerate_geodesic,
  degenerate_frame,
  drift_too_large,
  not_interior,
  not_exterior,
  empty_dataset,
  parse_error,
  io_error,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries a machine-checkable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace billiard_lab
