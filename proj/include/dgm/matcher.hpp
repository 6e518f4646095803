#pragma once

#include "dgm/types.hpp"

namespace dgm {

struct MatchResult {
  Assignment assignment;
  double objective = 0.0;
};

/// Resolves the configured dummy-cost policy against a concrete cost matrix.
double dummy_cost_value(const CostMatrix& costs, const DummyCostMode& mode);

/// Minimum-cost row assignment with unlimited dummy capacity: solved as a
/// rectangular Hungarian problem on the m x (n + m) matrix whose m extra
/// columns all carry `dummy_cost`. Deterministic for identical inputs.
MatchResult solve_assignment(const CostMatrix& costs, double dummy_cost);

/// Exhaustive oracle for instances with m, n <= 8. Ties are broken by the
/// lexicographically smallest target sequence under the order
/// 0 < 1 < ... < n-1 < DUMMY.
MatchResult brute_force_assignment(const CostMatrix& costs, double dummy_cost);

/// Total cost of an assignment, with dummy rows charged `dummy_cost`.
double matching_objective(const CostMatrix& costs, const Assignment& assignment,
                          double dummy_cost);

}  // namespace dgm
