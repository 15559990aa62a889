#pragma once

#include <stdexcept>
#include <string>

namespace treesir {

// Run configuration could not be parsed or failed validation.
class config_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Time integration violated its stability bound or produced a diverging state.
class integrator_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// A monotone march did not reach the requested residual within its time budget.
class convergence_error : public std::runtime_error {
public:
  convergence_error(const std::string& what, double last_residual)
      : std::runtime_error(what), residual_(last_residual) {}
  double residual() const noexcept { return residual_; }

private:
  double residual_;
};

// A measurement precondition failed: margin rule violated, no established
// front, or an ambiguous tail classification.
class invalid_run_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace treesir
