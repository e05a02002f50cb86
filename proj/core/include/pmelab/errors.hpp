#pragma once

#include <stdexcept>

namespace pmelab {

// Raised when a run violates a hypothesis the estimate machinery relies on
// (e.g. an empty first-crossing contact set for a live cube). The CLI maps
// this to exit code 2.
struct HypothesisViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace pmelab
