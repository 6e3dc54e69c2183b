#pragma once

#include <stdexcept>
#include <string>

namespace harmap {

enum class ErrorCode {
  domain,
  radius,
  non_convergence,
  invalid_weights,
  atom_at_one,
  unknown_name,
  vanishing_derivative,
  zero_of_function,
  comparison_vanishes,
  curve_through_probe,
  near_curve,
  ambiguous_winding,
  hypothesis_violation,
  io,
  parse,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::domain: return "domain";
    case ErrorCode::radius: return "radius";
    case ErrorCode::non_convergence: return "non-convergence";
    case ErrorCode::invalid_weights: return "invalid-weights";
    case ErrorCode::atom_at_one: return "atom-at-one";
    case ErrorCode::unknown_name: return "unknown-name";
    case ErrorCode::vanishing_derivative: return "vanishing-derivative";
    case ErrorCode::zero_of_function: return "zero-of-function";
    case ErrorCode::comparison_vanishes: return "comparison-vanishes";
    case ErrorCode::curve_through_probe: return "curve-through-probe";
    case ErrorCode::near_curve: return "near-curve";
    case ErrorCode::ambiguous_winding: return "ambiguous-winding";
    case ErrorCode::hypothesis_violation: return "hypothesis-violation";
    case ErrorCode::io: return "io";
    case ErrorCode::parse: return "parse";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace harmap
