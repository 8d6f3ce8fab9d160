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

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include "ddurobust/model.hpp"
#include "ddurobust/oracles.hpp"

namespace ddurobust {

struct RegionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The coverable-scenario region as a polyhedral graph over the stacked block
/// [x | alpha? | u]: the set of (x, alpha, u) whose recourse admits some
/// y >= 0 with A x + B y + C u <= b (and c.y <= alpha when present).  Slicing
/// at a fixed first stage (and budget) gives the region in scenario space.
struct RegionGraph {
  Polyhedron carrier;  // variables ordered [x (nx) | alpha (0/1) | u (nu)]
  int nx = 0;
  bool has_alpha = false;
  int nu = 0;

  /// The scenario-space slice at fixed x (and alpha when the graph carries
  /// one).  Throws RegionError when alpha presence does not match.
  Polyhedron slice_u(const Vector& x,
                     std::optional<double> alpha = std::nullopt) const;
};

/// Fourier-Motzkin projection of the lifted recourse system
///   { (x, [alpha], u, y) : A x + B y + C u <= b, y >= 0, [c.y <= alpha] }
/// onto (x, [alpha], u).  Throws BudgetError when intermediate systems exceed
/// the elimination row budget.
RegionGraph dispatch_graph(const TsroProblem& p, bool with_alpha);

struct MatchResult {
  bool matched = false;
  bool vacuous = false;             // the uncertainty set was empty
  std::optional<Vector> witness;    // an uncovered scenario (or multiplier)
};

/// Does the coverable region at x contain every scenario in U(x)?  Omitting
/// alpha checks pure feasibility; passing alpha also budgets the second-stage
/// cost.  An empty U(x) matches vacuously.  Supply a precomputed graph to
/// amortize the projection across many queries.
MatchResult matching_check(const TsroProblem& p, const Vector& x,
                           std::optional<double> alpha = std::nullopt,
                           const RegionGraph* graph = nullptr);

/// The same containment tested in multiplier space: every vertex of the
/// decision-independent support maps through the coupling into the coverable
/// slice.  Separable specs use their own support and coupling; other specs use
/// the support/argmax view derived from the recourse matrix.  The witness of a
/// mismatch is the offending support vertex.
MatchResult aux_region_check(const TsroProblem& p, const Vector& x,
                             std::optional<double> alpha = std::nullopt,
                             const RegionGraph* graph = nullptr);

/// Sorted union of disjoint closed intervals on a 1-D decision axis.
struct IntervalUnion {
  std::vector<std::pair<double, double>> intervals;

  bool member(double t, double tol = 0.0) const {
    for (const auto& [lo, hi] : intervals)
      if (t >= lo - tol && t <= hi + tol) return true;
    return false;
  }
};

/// Scans the robust-feasible set { x : U(x) fully coverable } over [lo, hi]
/// for a 1-D first stage: coarse grid membership through the feasibility
/// oracle, then bisection of every boundary down to refine_tol.  Features
/// narrower than coarse_step can be missed; the defaults resolve every
/// bundled case.  Empty U(x) counts as (vacuously) feasible.
IntervalUnion rfr_scan_1d(const TsroProblem& p, double lo, double hi,
                          double coarse_step = 0.01,
                          double refine_tol = 1e-6);

struct ConvexityReport {
  int tested = 0;    // midpoint probes run
  int failures = 0;  // midpoints outside the robust-feasible set
  // Whether a failure contradicts theory: scenario sets either fixed or
  // affinely coupled to an x-free support make the feasible set convex, so
  // any failure there is a defect; for other dependence a failure is
  // legitimate nonconvexity evidence.
  bool failures_are_defects = false;
  std::vector<std::array<Vector, 3>> failure_examples;  // {x1, x2, midpoint}
};

/// Samples pairs of certified robust-feasible points and probes midpoint
/// membership.  Throws RegionError when X yields no feasible samples.
ConvexityReport convexity_probe(const TsroProblem& p, int samples,
                                unsigned seed = 13u);

}  // namespace ddurobust
