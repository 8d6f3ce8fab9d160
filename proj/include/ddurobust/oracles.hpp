// Copyright 2026 The ddurobust Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ddurobust/model.hpp"

namespace ddurobust {

/// Worst-case recourse feasibility at x: the maximum slack distance over all
/// scenarios.  violation <= tol means every scenario is coverable.  The
/// worst case is searched over the vertices of U(x) (exact: the distance is
/// convex in u); ties resolve to the lexicographically smallest vertex.
struct FeasibilityVerdict {
  double violation = 0.0;
  Vector worst_u;
  Vector dual_xi;        // slack multipliers at worst_u; a xi_support point
  bool empty_ddus = false;  // U(x) was empty: vacuously feasible
};
FeasibilityVerdict feasibility_oracle(const TsroProblem& p, const Vector& x);

/// Worst-case second-stage cost S(x) = max_u V(x, u) over U(x), again via
/// vertex sweep.  Pre: x robust feasible (throws ModelError otherwise).
struct OptimalityVerdict {
  double value = 0.0;
  Vector worst_u;
  Vector dual_pi;        // recourse multipliers at worst_u; a pi_support point
  Vector inner_y;
  bool empty_ddus = false;
};
OptimalityVerdict optimality_oracle(const TsroProblem& p, const Vector& x);

/// Membership/value pair computed through the multiplier supports instead of
/// U(x): feasibility by sweeping xi_support vertices through the coupling
/// argmax, cost by sweeping pi_support basic points.  Used as the independent
/// cross-check path of the surrogate equivalence.
struct SurrogateVerdict {
  bool feasible = false;
  double violation = 0.0;
  std::optional<double> value;  // worst-case cost when feasible
  bool empty_ddus = false;
};
SurrogateVerdict surrogate_verdict(const TsroProblem& p, const Vector& x,
                                   bool with_value);

struct CrosscheckMismatch {
  Vector x;
  std::string what;
};
struct CrosscheckReport {
  int checked = 0;
  int members = 0;      // robust feasible points seen (including vacuous)
  int value_compared = 0;
  std::vector<CrosscheckMismatch> mismatches;
  bool ok() const { return mismatches.empty(); }
};

/// Compares direct (scenario-side) and surrogate (multiplier-side) verdicts
/// pointwise: membership must agree exactly, worst-case values within tol.
CrosscheckReport crosscheck_equivalence(const TsroProblem& p,
                                        const std::vector<Vector>& xs,
                                        double tol = 1e-6,
                                        bool compare_values = true);

/// Feasibility tolerance shared by the oracles.
inline constexpr double kOracleTol = 1e-7;

}  // namespace ddurobust
