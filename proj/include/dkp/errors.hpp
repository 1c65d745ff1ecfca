#pragma once

#include <stdexcept>
#include <string>

namespace dkp {

// Failure categories carried by Error. Sweep drivers catch per grid point and
// report the category name in their status column; everything else propagates
// to the caller.
enum class errc {
  invalid_argument,
  empty_grid,
  pole_parameter,
  no_convergence,
  domain_too_large,
  branch_ambiguity,
  logarithmic_case,
  accuracy_loss,
  wrong_kind,
  klein_border,
  mu_degenerate,
  singular_matching,
  unitarity_violation,
  step_underflow,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::invalid_argument: return "invalid_argument";
    case errc::empty_grid: return "empty_grid";
    case errc::pole_parameter: return "pole_parameter";
    case errc::no_convergence: return "no_convergence";
    case errc::domain_too_large: return "domain_too_large";
    case errc::branch_ambiguity: return "branch_ambiguity";
    case errc::logarithmic_case: return "logarithmic_case";
    case errc::accuracy_loss: return "accuracy_loss";
    case errc::wrong_kind: return "wrong_kind";
    case errc::klein_border: return "klein_border";
    case errc::mu_degenerate: return "mu_degenerate";
    case errc::singular_matching: return "singular_matching";
    case errc::unitarity_violation: return "unitarity_violation";
    case errc::step_underflow: return "step_underflow";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void raise(errc code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace dkp
