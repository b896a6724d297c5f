#pragma once

#include <stdexcept>

namespace besdp {

// Dual slack operator has a non-positive eigenvalue (or no strictly feasible
// dual point exists). Callers that orchestrate solves map this to a distinct
// exit status.
struct DualInfeasibleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Dual objective grows without bound (primal infeasible).
struct DualUnboundedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Estimator budget cannot be met (series depth overflow etc.).
struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace besdp
